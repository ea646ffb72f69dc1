#include "lurelint/encoding.hpp"

#include <algorithm>
#include <cctype>

namespace lurelint {

std::u32string utf8_decode(std::string_view s)
{
    std::u32string out;
    out.reserve(s.size());
    size_t i = 0;
    while (i < s.size()) {
        unsigned char c = static_cast<unsigned char>(s[i]);
        if (c < 0x80) {
            out.push_back(c);
            ++i;
            continue;
        }
        int extra;
        char32_t cp;
        if ((c & 0xE0) == 0xC0) { extra = 1; cp = c & 0x1F; }
        else if ((c & 0xF0) == 0xE0) { extra = 2; cp = c & 0x0F; }
        else if ((c & 0xF8) == 0xF0) { extra = 3; cp = c & 0x07; }
        else { out.push_back(0xFFFD); ++i; continue; }
        if (i + extra >= s.size()) { // truncated sequence
            out.push_back(0xFFFD);
            ++i;
            continue;
        }
        bool ok = true;
        for (int k = 1; k <= extra; ++k) {
            unsigned char cc = static_cast<unsigned char>(s[i + k]);
            if ((cc & 0xC0) != 0x80) { ok = false; break; }
            cp = (cp << 6) | (cc & 0x3F);
        }
        if (!ok || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
            out.push_back(0xFFFD);
            ++i;
            continue;
        }
        out.push_back(cp);
        i += extra + 1;
    }
    return out;
}

std::string utf8_encode(char32_t cp)
{
    std::string out;
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
    return out;
}

std::string utf8_encode(std::u32string_view cps)
{
    std::string out;
    out.reserve(cps.size());
    for (char32_t cp : cps)
        out += utf8_encode(cp);
    return out;
}

std::string ascii_lower(std::string_view s)
{
    std::string out(s);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z')
            c = static_cast<char>(c - 'A' + 'a');
    return out;
}

bool iequals_ascii(std::string_view a, std::string_view b)
{
    if (a.size() != b.size())
        return false;
    for (size_t i = 0; i < a.size(); ++i) {
        char x = a[i], y = b[i];
        if (x >= 'A' && x <= 'Z') x = static_cast<char>(x - 'A' + 'a');
        if (y >= 'A' && y <= 'Z') y = static_cast<char>(y - 'A' + 'a');
        if (x != y)
            return false;
    }
    return true;
}

std::string_view trim(std::string_view s)
{
    size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r' || s[b] == '\n'))
        ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r' || s[e - 1] == '\n'))
        --e;
    return s.substr(b, e - b);
}

std::string collapse_ws(std::string_view s)
{
    std::string out;
    bool in_ws = false;
    for (char c : s) {
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            in_ws = true;
            continue;
        }
        if (in_ws && !out.empty())
            out.push_back(' ');
        in_ws = false;
        out.push_back(c);
    }
    return out;
}

std::vector<std::string> split(std::string_view s, char sep)
{
    std::vector<std::string> out;
    size_t start = 0;
    for (size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.emplace_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

bool contains_ci(std::string_view haystack, std::string_view needle)
{
    if (needle.empty())
        return true;
    if (haystack.size() < needle.size())
        return false;
    for (size_t i = 0; i + needle.size() <= haystack.size(); ++i)
        if (iequals_ascii(haystack.substr(i, needle.size()), needle))
            return true;
    return false;
}

static const char b64_alphabet[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

std::string base64_encode(std::string_view bytes)
{
    std::string out;
    out.reserve((bytes.size() + 2) / 3 * 4);
    size_t i = 0;
    while (i + 2 < bytes.size()) {
        uint32_t v = (static_cast<unsigned char>(bytes[i]) << 16) |
                     (static_cast<unsigned char>(bytes[i + 1]) << 8) |
                     static_cast<unsigned char>(bytes[i + 2]);
        out.push_back(b64_alphabet[(v >> 18) & 63]);
        out.push_back(b64_alphabet[(v >> 12) & 63]);
        out.push_back(b64_alphabet[(v >> 6) & 63]);
        out.push_back(b64_alphabet[v & 63]);
        i += 3;
    }
    size_t rem = bytes.size() - i;
    if (rem == 1) {
        uint32_t v = static_cast<unsigned char>(bytes[i]) << 16;
        out.push_back(b64_alphabet[(v >> 18) & 63]);
        out.push_back(b64_alphabet[(v >> 12) & 63]);
        out += "==";
    } else if (rem == 2) {
        uint32_t v = (static_cast<unsigned char>(bytes[i]) << 16) |
                     (static_cast<unsigned char>(bytes[i + 1]) << 8);
        out.push_back(b64_alphabet[(v >> 18) & 63]);
        out.push_back(b64_alphabet[(v >> 12) & 63]);
        out.push_back(b64_alphabet[(v >> 6) & 63]);
        out.push_back('=');
    }
    return out;
}

static int b64_value(char c)
{
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
}

std::string base64_decode(std::string_view text)
{
    std::string out;
    out.reserve(text.size() / 4 * 3);
    uint32_t acc = 0;
    int bits = 0;
    for (char c : text) {
        if (c == '=' )
            break;
        int v = b64_value(c);
        if (v < 0)
            continue; // whitespace and stray bytes are skipped
        acc = (acc << 6) | static_cast<uint32_t>(v);
        bits += 6;
        if (bits >= 8) {
            bits -= 8;
            out.push_back(static_cast<char>((acc >> bits) & 0xFF));
        }
    }
    return out;
}

static int hex_value(char c)
{
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

std::string qp_decode(std::string_view text, bool underscore_is_space)
{
    std::string out;
    out.reserve(text.size());
    for (size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c == '=' && i + 2 < text.size()) {
            int hi = hex_value(text[i + 1]);
            int lo = hex_value(text[i + 2]);
            if (hi >= 0 && lo >= 0) {
                out.push_back(static_cast<char>((hi << 4) | lo));
                i += 2;
                continue;
            }
            if (text[i + 1] == '\r' && text[i + 2] == '\n') { // soft break
                i += 2;
                continue;
            }
        }
        if (c == '=' && i + 1 < text.size() && text[i + 1] == '\n') {
            ++i;
            continue;
        }
        if (underscore_is_space && c == '_') {
            out.push_back(' ');
            continue;
        }
        out.push_back(c);
    }
    return out;
}

std::string percent_decode(std::string_view s)
{
    std::string out;
    out.reserve(s.size());
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '%' && i + 2 < s.size()) {
            int hi = hex_value(s[i + 1]);
            int lo = hex_value(s[i + 2]);
            if (hi >= 0 && lo >= 0) {
                out.push_back(static_cast<char>((hi << 4) | lo));
                i += 2;
                continue;
            }
        }
        out.push_back(s[i]);
    }
    return out;
}

bool has_percent_escape(std::string_view s)
{
    for (size_t i = 0; i + 2 < s.size(); ++i)
        if (s[i] == '%' && hex_value(s[i + 1]) >= 0 && hex_value(s[i + 2]) >= 0)
            return true;
    return false;
}

// Latin-1 bytes to UTF-8.
static std::string latin1_to_utf8(std::string_view bytes)
{
    std::string out;
    for (unsigned char c : bytes) {
        if (c < 0x80)
            out.push_back(static_cast<char>(c));
        else
            out += utf8_encode(static_cast<char32_t>(c));
    }
    return out;
}

static bool decode_one_word(std::string_view word, std::string& out)
{
    // =?charset?enc?payload?=
    if (word.size() < 8 || word.substr(0, 2) != "=?" || word.substr(word.size() - 2) != "?=")
        return false;
    std::string_view inner = word.substr(2, word.size() - 4);
    size_t q1 = inner.find('?');
    if (q1 == std::string_view::npos)
        return false;
    size_t q2 = inner.find('?', q1 + 1);
    if (q2 == std::string_view::npos)
        return false;
    std::string charset = ascii_lower(inner.substr(0, q1));
    // RFC 2231 language tag suffix ("utf-8*en") is irrelevant here
    if (size_t star = charset.find('*'); star != std::string::npos)
        charset.resize(star);
    std::string_view enc = inner.substr(q1 + 1, q2 - q1 - 1);
    std::string_view payload = inner.substr(q2 + 1);
    std::string decoded;
    if (enc.size() == 1 && (enc[0] == 'B' || enc[0] == 'b'))
        decoded = base64_decode(payload);
    else if (enc.size() == 1 && (enc[0] == 'Q' || enc[0] == 'q'))
        decoded = qp_decode(payload, true);
    else
        return false;
    if (charset == "iso-8859-1" || charset == "latin1" || charset == "iso8859-1")
        decoded = latin1_to_utf8(decoded);
    out += decoded;
    return true;
}

std::string rfc2047_decode(std::string_view value)
{
    std::string out;
    size_t i = 0;
    bool last_was_word = false;
    while (i < value.size()) {
        size_t start = value.find("=?", i);
        if (start == std::string_view::npos) {
            out.append(value.substr(i));
            break;
        }
        size_t mid = value.find('?', start + 2);
        size_t mid2 = (mid == std::string_view::npos) ? std::string_view::npos
                                                      : value.find('?', mid + 1);
        size_t end = (mid2 == std::string_view::npos) ? std::string_view::npos
                                                      : value.find("?=", mid2 + 1);
        if (end == std::string_view::npos) {
            out.append(value.substr(i));
            break;
        }
        std::string_view between = value.substr(i, start - i);
        // whitespace between adjacent encoded words is dropped
        if (!(last_was_word && trim(between).empty()))
            out.append(between);
        std::string_view word = value.substr(start, end + 2 - start);
        if (decode_one_word(word, out)) {
            last_was_word = true;
        } else {
            out.append(word);
            last_was_word = false;
        }
        i = end + 2;
    }
    return out;
}

std::string rfc2047_encode(std::string_view text)
{
    bool plain = true;
    for (unsigned char c : text)
        if (c < 0x20 || c > 0x7E || c == '"') {
            plain = false;
            break;
        }
    if (plain)
        return std::string(text);
    return "=?utf-8?B?" + base64_encode(text) + "?=";
}

} // namespace lurelint
