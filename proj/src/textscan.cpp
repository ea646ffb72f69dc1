#include "lurelint/textscan.hpp"

#include "lurelint/encoding.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lurelint {

namespace {

struct ConfusableEntry {
    char32_t cp;
    const char* ascii;
};

// Curated subset: every code point the technique catalog uses plus the
// usual Cyrillic/Greek/dash suspects. Fullwidth forms are added as a range.
constexpr ConfusableEntry k_builtin[] = {
    // Cyrillic lowercase
    {0x0430, "a"}, {0x0435, "e"}, {0x043E, "o"}, {0x0440, "p"}, {0x0441, "c"},
    {0x0443, "y"}, {0x0445, "x"}, {0x0455, "s"}, {0x0456, "i"}, {0x0458, "j"},
    {0x04BB, "h"}, {0x0501, "d"}, {0x051B, "q"}, {0x051D, "w"}, {0x04CF, "l"},
    // Cyrillic uppercase
    {0x0405, "S"}, {0x0406, "I"}, {0x0408, "J"}, {0x0410, "A"}, {0x0412, "B"},
    {0x0415, "E"}, {0x041A, "K"}, {0x041C, "M"}, {0x041D, "H"}, {0x041E, "O"},
    {0x0420, "P"}, {0x0421, "C"}, {0x0422, "T"}, {0x0425, "X"},
    // Greek lowercase
    {0x03B1, "a"}, {0x03B9, "i"}, {0x03BA, "k"}, {0x03BD, "v"}, {0x03BF, "o"},
    {0x03C1, "p"}, {0x03C5, "u"}, {0x03C7, "x"},
    // Greek uppercase
    {0x0391, "A"}, {0x0392, "B"}, {0x0395, "E"}, {0x0396, "Z"}, {0x0397, "H"},
    {0x0399, "I"}, {0x039A, "K"}, {0x039C, "M"}, {0x039D, "N"}, {0x039F, "O"},
    {0x03A1, "P"}, {0x03A4, "T"}, {0x03A5, "Y"}, {0x03A7, "X"},
    // Latin oddities and dash/space variants
    {0x0131, "i"}, {0x2010, "-"}, {0x2011, "-"}, {0x2012, "-"}, {0x2013, "-"},
    {0x2014, "-"}, {0x00A0, " "},
};

} // namespace

ConfusableTable::ConfusableTable()
{
    for (const auto& e : k_builtin)
        map_.emplace(e.cp, e.ascii);
    // Fullwidth block: U+FF01..U+FF5E mirrors ASCII 0x21..0x7E,
    // including U+FF20 (fullwidth commercial at).
    for (char32_t cp = 0xFF01; cp <= 0xFF5E; ++cp)
        map_.emplace(cp, std::string(1, static_cast<char>(cp - 0xFF01 + 0x21)));
}

const ConfusableTable& ConfusableTable::builtin()
{
    static const ConfusableTable t;
    return t;
}

void ConfusableTable::add(char32_t cp, std::string replacement)
{
    map_[cp] = std::move(replacement);
}

void ConfusableTable::load_extension_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open confusable table: " + path);
    std::string line;
    while (std::getline(in, line)) {
        std::string_view v = trim(line);
        if (v.empty() || v.front() == '#')
            continue;
        size_t tab = v.find('\t');
        if (tab == std::string_view::npos)
            continue;
        std::string_view cp_part = trim(v.substr(0, tab));
        std::string_view repl = trim(v.substr(tab + 1));
        if (cp_part.size() < 3 || (cp_part.substr(0, 2) != "U+" && cp_part.substr(0, 2) != "u+"))
            continue;
        char32_t cp = static_cast<char32_t>(
            std::stoul(std::string(cp_part.substr(2)), nullptr, 16));
        add(cp, std::string(repl));
    }
}

const std::string* ConfusableTable::lookup(char32_t cp) const
{
    auto it = map_.find(cp);
    return it == map_.end() ? nullptr : &it->second;
}

SkeletonResult skeleton_full(std::string_view s, const ConfusableTable& table)
{
    SkeletonResult r;
    std::u32string cps = utf8_decode(s);
    r.text.reserve(s.size());
    for (char32_t cp : cps) {
        if (cp < 0x80) {
            r.text.push_back(static_cast<char>(cp));
            continue;
        }
        if (const std::string* repl = table.lookup(cp)) {
            r.text += *repl;
        } else {
            r.text += utf8_encode(cp);
            r.residue = true;
        }
    }
    return r;
}

std::string skeleton(std::string_view s, const ConfusableTable& table)
{
    return skeleton_full(s, table).text;
}

BidiRendering bidi_render(std::string_view s)
{
    BidiRendering r;
    std::u32string cps = utf8_decode(s);

    struct Frame {
        std::u32string buf;
        bool rtl;
    };
    std::vector<Frame> stack;
    stack.push_back({{}, false});

    auto pop_frame = [&stack]() {
        Frame f = std::move(stack.back());
        stack.pop_back();
        if (f.rtl)
            std::reverse(f.buf.begin(), f.buf.end());
        stack.back().buf += f.buf;
    };

    for (size_t i = 0; i < cps.size(); ++i) {
        char32_t cp = cps[i];
        switch (cp) {
        case 0x202E: // RLO
            r.control_positions.push_back(i);
            stack.push_back({{}, true});
            break;
        case 0x202D: // LRO
            r.control_positions.push_back(i);
            stack.push_back({{}, false});
            break;
        case 0x202C: // PDF
            r.control_positions.push_back(i);
            if (stack.size() > 1)
                pop_frame();
            break;
        case 0x2066: case 0x2067: case 0x2068: case 0x2069: // isolates: strip
        case 0x202A: case 0x202B:                           // embeddings: strip
            r.control_positions.push_back(i);
            break;
        default:
            stack.back().buf.push_back(cp);
        }
    }
    while (stack.size() > 1)
        pop_frame();

    r.displayed = utf8_encode(stack.front().buf);
    r.had_controls = !r.control_positions.empty();
    return r;
}

namespace {

bool valid_label(std::string_view label)
{
    if (label.empty() || label.size() > 63)
        return false;
    if (label.front() == '-' || label.back() == '-')
        return false;
    for (char c : label)
        if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-'))
            return false;
    return true;
}

bool all_alpha(std::string_view s)
{
    for (char c : s)
        if (c < 'a' || c > 'z')
            return false;
    return !s.empty();
}

} // namespace

bool looks_like_domain(std::string_view s, const ConfusableTable& table,
                       const std::set<std::string>& etlds)
{
    std::string sk = ascii_lower(skeleton(trim(s), table));
    if (sk.empty() || sk.find('.') == std::string::npos)
        return false;
    std::vector<std::string> labels = split(sk, '.');
    if (labels.size() < 2)
        return false;
    for (const std::string& l : labels)
        if (!valid_label(l))
            return false;
    const std::string& last = labels.back();
    if (etlds.count(last))
        return true;
    // also accept multi-label suffixes like co.uk from the configured set
    if (labels.size() >= 3 && etlds.count(labels[labels.size() - 2] + "." + last))
        return true;
    return all_alpha(last) && last.size() >= 2 && last.size() <= 6;
}

const ManglePairs& default_mangle_pairs()
{
    static const ManglePairs pairs = {
        {"g", "q"}, {"rn", "m"}, {"l", "1"}, {"0", "o"},
    };
    return pairs;
}

int mangle_distance(std::string_view a_in, std::string_view b_in, const ManglePairs& pairs)
{
    std::u32string a = utf8_decode(a_in);
    std::u32string b = utf8_decode(b_in);
    const size_t n = a.size(), m = b.size();
    const int INF = static_cast<int>(n + m + 1);

    // decoded pair strings, applied in both directions
    std::vector<std::pair<std::u32string, std::u32string>> prs;
    for (const auto& [x, y] : pairs) {
        prs.emplace_back(utf8_decode(x), utf8_decode(y));
        prs.emplace_back(utf8_decode(y), utf8_decode(x));
    }

    std::vector<std::vector<int>> d(n + 1, std::vector<int>(m + 1, 0));
    for (size_t i = 0; i <= n; ++i)
        d[i][0] = static_cast<int>(i);
    for (size_t j = 0; j <= m; ++j)
        d[0][j] = static_cast<int>(j);

    for (size_t i = 1; i <= n; ++i) {
        for (size_t j = 1; j <= m; ++j) {
            int best = INF;
            best = std::min(best, d[i - 1][j] + 1);
            best = std::min(best, d[i][j - 1] + 1);
            best = std::min(best, d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1));
            if (i >= 2 && j >= 2 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1])
                best = std::min(best, d[i - 2][j - 2] + 1);
            for (const auto& [p, q] : prs) {
                if (i >= p.size() && j >= q.size() &&
                    std::u32string_view(a).substr(i - p.size(), p.size()) == p &&
                    std::u32string_view(b).substr(j - q.size(), q.size()) == q)
                    best = std::min(best, d[i - p.size()][j - q.size()] + 1);
            }
            d[i][j] = best;
        }
    }
    return d[n][m];
}

namespace {

// Letter-bigram counts accumulated from an embedded English sample.
// Digits are legal table symbols but never occur in the sample, which
// leaves digit bigrams maximally improbable.
constexpr const char* k_bigram_corpus =
    "the quick brown fox jumps over the lazy dog while the early morning light "
    "settles over the quiet harbor town and the people open their small shops "
    "along the main street where fresh bread and coffee and paper and flowers "
    "change hands with easy words and familiar faces as trains arrive from the "
    "capital carrying students and workers and visitors who read their letters "
    "and messages on the platform before walking home through the old market "
    "past the bank and the post office and the garden gate while children play "
    "near the water fountain and teachers prepare their lessons for another "
    "season of learning about history and science and language and music and "
    "the simple patient art of paying attention to the world as it actually is "
    "account secure service provider update notice mailbox address password "
    "meeting agenda invoice document presentation shared folder review signing "
    "support center billing payment confirm delivery shipment order customer "
    "trusted page malicious example company partner member profile settings "
    "general information question answer response forward reply subject sender "
    "receiver attachment download upload browser window system network computer";

struct BigramModel {
    // 36 symbols: a-z then 0-9
    std::array<std::array<double, 36>, 36> nll{};           // -log2 p(b|a)
    static int index(char c)
    {
        if (c >= 'a' && c <= 'z') return c - 'a';
        if (c >= '0' && c <= '9') return 26 + (c - '0');
        return -1;
    }
    BigramModel()
    {
        std::array<std::array<double, 36>, 36> counts{};
        std::string_view corpus = k_bigram_corpus;
        int prev = -1;
        for (char c : corpus) {
            int cur = index(c);
            if (cur >= 0 && prev >= 0)
                counts[prev][cur] += 1.0;
            prev = cur;
        }
        for (int i = 0; i < 36; ++i) {
            double row = 0;
            for (int j = 0; j < 36; ++j)
                row += counts[i][j];
            for (int j = 0; j < 36; ++j) {
                double p = (counts[i][j] + 0.04) / (row + 0.04 * 36);
                nll[i][j] = -std::log2(p);
            }
        }
    }
};

const BigramModel& bigram_model()
{
    static const BigramModel m;
    return m;
}

bool is_consonant(char c)
{
    return c >= 'a' && c <= 'z' && c != 'a' && c != 'e' && c != 'i' && c != 'o' &&
           c != 'u' && c != 'y';
}

} // namespace

double randomness_score(std::string_view label)
{
    std::string folded =
        ascii_lower(skeleton(label, ConfusableTable::builtin()));

    const BigramModel& model = bigram_model();
    double surprise = 0.0;
    int prev = -1;
    int run = 0, max_run = 0;
    for (char c : folded) {
        int cur = BigramModel::index(c);
        if (cur < 0) { // separators reset the chain
            prev = -1;
            run = 0;
            continue;
        }
        if (prev >= 0) {
            double nll = model.nll[prev][cur];
            // common bigrams contribute nothing; rare ones up to one unit
            double u = (nll - 6.5) / 7.0;
            surprise += std::clamp(u, 0.0, 1.0);
        }
        run = is_consonant(c) ? run + 1 : 0;
        max_run = std::max(max_run, run);
        prev = cur;
    }
    if (max_run >= 5)
        surprise += 0.4 * (max_run - 4);

    return 1.0 - std::exp(-0.6 * surprise);
}

} // namespace lurelint
