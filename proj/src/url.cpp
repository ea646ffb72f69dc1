#include "lurelint/url.hpp"

#include "lurelint/encoding.hpp"

#include <algorithm>
#include <fstream>
#include <limits>

namespace lurelint {

namespace {

bool scheme_start(char c)
{
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

bool scheme_char(char c)
{
    return scheme_start(c) || (c >= '0' && c <= '9') || c == '+' || c == '-' || c == '.';
}

bool all_digits(std::string_view s)
{
    for (char c : s)
        if (c < '0' || c > '9')
            return false;
    return true;
}

bool looks_ipv4(std::string_view host)
{
    std::vector<std::string> parts = split(host, '.');
    if (parts.size() != 4)
        return false;
    for (const std::string& p : parts) {
        if (p.empty() || p.size() > 3 || !all_digits(p))
            return false;
        if (std::stoi(p) > 255)
            return false;
    }
    return true;
}

} // namespace

std::string ParsedUrl::reassemble() const
{
    std::string out;
    if (has_scheme) {
        out += raw_scheme_;
        out += ':';
    }
    if (has_authority) {
        out += "//";
        if (userinfo) {
            out += *userinfo;
            out += '@';
        }
        if (host)
            out += *host;
        if (raw_port_) {
            out += ':';
            out += *raw_port_;
        }
    }
    out += path;
    if (query) {
        out += '?';
        out += *query;
    }
    if (fragment) {
        out += '#';
        out += *fragment;
    }
    return out;
}

ParsedUrl parse_url(std::string_view input)
{
    ParsedUrl u;
    std::string_view rest = input;

    // scheme
    if (!rest.empty() && scheme_start(rest[0])) {
        size_t i = 1;
        while (i < rest.size() && scheme_char(rest[i]))
            ++i;
        if (i < rest.size() && rest[i] == ':') {
            u.raw_scheme_ = std::string(rest.substr(0, i));
            u.scheme = ascii_lower(u.raw_scheme_);
            u.has_scheme = true;
            rest = rest.substr(i + 1);
        }
    }

    // authority
    if (rest.size() >= 2 && rest[0] == '/' && rest[1] == '/') {
        u.has_authority = true;
        rest = rest.substr(2);
        size_t end = rest.find_first_of("/?#");
        std::string_view authority = rest.substr(0, end);
        rest = (end == std::string_view::npos) ? std::string_view{} : rest.substr(end);

        size_t at = authority.rfind('@');
        std::string_view hostport = authority;
        if (at != std::string_view::npos) {
            u.userinfo = std::string(authority.substr(0, at));
            hostport = authority.substr(at + 1);
        }
        std::string_view host = hostport;
        if (!hostport.empty() && hostport.front() == '[') {
            size_t close = hostport.find(']');
            if (close != std::string_view::npos) {
                host = hostport.substr(0, close + 1);
                std::string_view after = hostport.substr(close + 1);
                if (!after.empty() && after.front() == ':')
                    u.raw_port_ = std::string(after.substr(1));
            }
            u.host_kind = HostKind::ipv6;
        } else {
            size_t colon = hostport.rfind(':');
            if (colon != std::string_view::npos && all_digits(hostport.substr(colon + 1))) {
                host = hostport.substr(0, colon);
                u.raw_port_ = std::string(hostport.substr(colon + 1));
            }
            u.host_kind = host.empty() ? HostKind::none
                          : looks_ipv4(host) ? HostKind::ipv4
                                             : HostKind::dns_name;
        }
        if (!host.empty())
            u.host = std::string(host);
        else
            u.host_kind = HostKind::none;
        if (u.raw_port_ && !u.raw_port_->empty() && u.raw_port_->size() <= 5 &&
            all_digits(*u.raw_port_)) {
            int p = std::stoi(*u.raw_port_);
            if (p <= 65535)
                u.port = p;
        }
    }

    // path / query / fragment
    size_t qpos = rest.find_first_of("?#");
    u.path = std::string(rest.substr(0, qpos));
    if (qpos != std::string_view::npos) {
        if (rest[qpos] == '?') {
            std::string_view after = rest.substr(qpos + 1);
            size_t fpos = after.find('#');
            u.query = std::string(after.substr(0, fpos));
            if (fpos != std::string_view::npos)
                u.fragment = std::string(after.substr(fpos + 1));
        } else {
            u.fragment = std::string(rest.substr(qpos + 1));
        }
    }

    // decoded view of the host
    if (u.host && u.host_kind == HostKind::dns_name) {
        std::string lowered = ascii_lower(*u.host);
        std::string pd = percent_decode(lowered);
        IdnaResult idna = decode_idna(ascii_lower(pd));
        u.decoded_host = idna.host;
        u.idna_decode_failed = idna.decode_failed;
        u.host_decode_changed = (*u.decoded_host != lowered);
    } else if (u.host) {
        u.decoded_host = ascii_lower(*u.host);
    }
    return u;
}

std::string resolve_reference(std::string_view base, std::string_view ref)
{
    ParsedUrl r = parse_url(ref);
    if (r.has_scheme)
        return std::string(ref);
    ParsedUrl b = parse_url(base);
    if (!b.has_scheme || !b.has_authority)
        return {};

    std::string origin = b.scheme + "://";
    if (b.userinfo)
        origin += *b.userinfo + "@";
    if (b.host)
        origin += *b.host;
    if (b.port)
        origin += ":" + std::to_string(*b.port);

    if (ref.size() >= 2 && ref[0] == '/' && ref[1] == '/')
        return b.scheme + ":" + std::string(ref);

    std::string tail;
    if (!ref.empty() && ref.front() == '/') {
        tail = std::string(ref);
    } else {
        std::string dir = b.path;
        size_t slash = dir.rfind('/');
        dir = (slash == std::string::npos) ? "/" : dir.substr(0, slash + 1);
        if (dir.empty() || dir.front() != '/')
            dir.insert(dir.begin(), '/');
        tail = dir + std::string(ref);
    }
    // minimal dot-segment cleanup
    std::string cleaned;
    std::vector<std::string> segs = split(tail, '/');
    std::vector<std::string> kept;
    for (size_t i = 0; i < segs.size(); ++i) {
        const std::string& s = segs[i];
        if (s == ".")
            continue;
        if (s == "..") {
            if (kept.size() > 1)
                kept.pop_back();
            continue;
        }
        kept.push_back(s);
    }
    for (size_t i = 0; i < kept.size(); ++i) {
        if (i)
            cleaned += '/';
        cleaned += kept[i];
    }
    if (cleaned.empty() || cleaned.front() != '/')
        cleaned.insert(cleaned.begin(), '/');
    return origin + cleaned;
}

// ---------------------------------------------------------------- PSL --

PublicSuffixList PublicSuffixList::builtin()
{
    PublicSuffixList psl;
    for (const char* rule :
         {"com", "net", "org", "de", "uk", "co.uk", "org.uk", "ac.uk", "io",
          "info", "biz", "edu", "gov", "eu", "fr", "nl", "ch", "at", "*.ck"})
        psl.add_rule(rule);
    psl.version_tag = "builtin-1";
    return psl;
}

PublicSuffixList PublicSuffixList::from_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open public suffix file: " + path);
    PublicSuffixList psl;
    std::string line;
    while (std::getline(in, line)) {
        std::string_view v = trim(line);
        if (v.empty() || v.substr(0, 1) == "#" || v.substr(0, 2) == "//")
            continue;
        psl.add_rule(v);
    }
    psl.version_tag = path;
    return psl;
}

void PublicSuffixList::add_rule(std::string_view rule)
{
    std::string r = ascii_lower(trim(rule));
    if (r.rfind("*.", 0) == 0)
        wildcard_parents_.insert(r.substr(2));
    else if (!r.empty())
        exact_.insert(r);
}

size_t PublicSuffixList::suffix_labels(const std::vector<std::string>& labels) const
{
    size_t best = 0;
    for (size_t take = 1; take <= labels.size(); ++take) {
        std::string suffix;
        for (size_t i = labels.size() - take; i < labels.size(); ++i) {
            if (!suffix.empty())
                suffix += '.';
            suffix += labels[i];
        }
        if (exact_.count(suffix))
            best = take;
        // wildcard "*.parent" makes <any>.parent a suffix of take+... labels
        if (take >= 2) {
            std::string parent = suffix.substr(suffix.find('.') + 1);
            if (wildcard_parents_.count(parent))
                best = std::max(best, take);
        }
    }
    return best;
}

std::optional<DomainSplit> try_split_domain(std::string_view host_in,
                                            const PublicSuffixList& psl)
{
    std::string host = ascii_lower(trim(host_in));
    if (!host.empty() && host.back() == '.')
        host.pop_back();
    if (host.empty())
        return std::nullopt;
    std::vector<std::string> labels = split(host, '.');
    for (const std::string& l : labels)
        if (l.empty())
            return std::nullopt;

    size_t suffix = psl.suffix_labels(labels);
    if (suffix == 0)
        suffix = 1; // prevailing "*" rule: last label is the suffix
    if (labels.size() <= suffix)
        return std::nullopt;

    DomainSplit ds;
    size_t reg_start = labels.size() - suffix - 1;
    for (size_t i = 0; i < reg_start; ++i)
        ds.subdomains.push_back(labels[i]);
    for (size_t i = reg_start; i < labels.size(); ++i) {
        if (!ds.registrable_domain.empty())
            ds.registrable_domain += '.';
        ds.registrable_domain += labels[i];
    }
    for (size_t i = labels.size() - suffix; i < labels.size(); ++i) {
        if (!ds.etld.empty())
            ds.etld += '.';
        ds.etld += labels[i];
    }
    return ds;
}

DomainSplit split_domain(std::string_view host, const PublicSuffixList& psl)
{
    if (auto ds = try_split_domain(host, psl))
        return *ds;
    throw HostIsSuffixOnly(std::string(host));
}

// ----------------------------------------------------------- punycode --

namespace {

constexpr uint32_t puny_base = 36, puny_tmin = 1, puny_tmax = 26, puny_skew = 38,
                   puny_damp = 700, puny_initial_bias = 72, puny_initial_n = 128;

int puny_digit(char c)
{
    if (c >= 'a' && c <= 'z') return c - 'a';
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= '0' && c <= '9') return c - '0' + 26;
    return -1;
}

uint32_t puny_adapt(uint32_t delta, uint32_t numpoints, bool firsttime)
{
    delta = firsttime ? delta / puny_damp : delta / 2;
    delta += delta / numpoints;
    uint32_t k = 0;
    while (delta > ((puny_base - puny_tmin) * puny_tmax) / 2) {
        delta /= puny_base - puny_tmin;
        k += puny_base;
    }
    return k + (((puny_base - puny_tmin + 1) * delta) / (delta + puny_skew));
}

std::optional<std::u32string> punycode_decode(std::string_view in)
{
    constexpr uint32_t maxint = std::numeric_limits<uint32_t>::max();
    std::u32string output;
    size_t basic_end = in.rfind('-');
    size_t pos = 0;
    if (basic_end != std::string_view::npos) {
        for (size_t i = 0; i < basic_end; ++i) {
            unsigned char c = static_cast<unsigned char>(in[i]);
            if (c >= 0x80)
                return std::nullopt;
            output.push_back(c);
        }
        pos = basic_end + 1;
    }
    if (pos >= in.size() && basic_end != std::string_view::npos && basic_end + 1 == in.size())
        return std::nullopt; // trailing delimiter with no extended part

    uint32_t i = 0, n = puny_initial_n, bias = puny_initial_bias;
    while (pos < in.size()) {
        uint32_t oldi = i, w = 1;
        for (uint32_t k = puny_base;; k += puny_base) {
            if (pos >= in.size())
                return std::nullopt;
            int digit = puny_digit(in[pos++]);
            if (digit < 0)
                return std::nullopt;
            if (static_cast<uint32_t>(digit) > (maxint - i) / w)
                return std::nullopt;
            i += static_cast<uint32_t>(digit) * w;
            uint32_t t = (k <= bias) ? puny_tmin
                         : (k >= bias + puny_tmax) ? puny_tmax
                                                   : k - bias;
            if (static_cast<uint32_t>(digit) < t)
                break;
            if (w > maxint / (puny_base - t))
                return std::nullopt;
            w *= puny_base - t;
        }
        uint32_t out_len = static_cast<uint32_t>(output.size()) + 1;
        bias = puny_adapt(i - oldi, out_len, oldi == 0);
        if (i / out_len > maxint - n)
            return std::nullopt;
        n += i / out_len;
        i %= out_len;
        if (n > 0x10FFFF || (n >= 0xD800 && n <= 0xDFFF))
            return std::nullopt;
        output.insert(output.begin() + i, static_cast<char32_t>(n));
        ++i;
    }
    return output;
}

bool plausible_idna_output(const std::u32string& cps)
{
    bool non_ascii = false;
    for (char32_t cp : cps) {
        if (cp < 0x80) {
            char c = static_cast<char>(cp);
            bool ldh = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                       (c >= '0' && c <= '9') || c == '-';
            if (!ldh)
                return false;
        } else {
            if (cp < 0xA0) // C1 controls
                return false;
            non_ascii = true;
        }
    }
    return non_ascii;
}

} // namespace

IdnaResult decode_idna(std::string_view host)
{
    IdnaResult r;
    std::vector<std::string> labels = split(host, '.');
    for (size_t idx = 0; idx < labels.size(); ++idx) {
        std::string& label = labels[idx];
        std::string lowered = ascii_lower(label);
        if (lowered.rfind("xn--", 0) == 0) {
            auto decoded = punycode_decode(std::string_view(lowered).substr(4));
            if (decoded && plausible_idna_output(*decoded)) {
                std::string text = utf8_encode(*decoded);
                // refuse decodes that are themselves ACE; keeps this idempotent
                if (ascii_lower(text).rfind("xn--", 0) != 0) {
                    label = text;
                    r.changed = true;
                    continue;
                }
            }
            r.decode_failed = true;
        }
    }
    for (size_t i = 0; i < labels.size(); ++i) {
        if (i)
            r.host += '.';
        r.host += labels[i];
    }
    return r;
}

SchemeClass classify_scheme(const ParsedUrl& url)
{
    if (!url.has_scheme)
        return SchemeClass::relative;
    if (url.scheme == "http" || url.scheme == "https")
        return SchemeClass::web;
    if (url.scheme == "tel")
        return SchemeClass::tel;
    if (url.scheme == "data")
        return SchemeClass::data;
    if (url.scheme == "mailto")
        return SchemeClass::mailto;
    return SchemeClass::custom;
}

std::string_view to_string(SchemeClass c)
{
    switch (c) {
    case SchemeClass::web: return "web";
    case SchemeClass::tel: return "tel";
    case SchemeClass::data: return "data";
    case SchemeClass::mailto: return "mailto";
    case SchemeClass::custom: return "custom";
    case SchemeClass::relative: return "relative";
    }
    return "?";
}

} // namespace lurelint
