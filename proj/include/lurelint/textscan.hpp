#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lurelint {

/// Maps visually confusable code points to an ASCII replacement.
/// Ships with a curated built-in set (Cyrillic/Greek look-alikes,
/// fullwidth forms, dash variants); extensible from a file of
/// "U+XXXX<tab>replacement" lines.
class ConfusableTable {
public:
    static const ConfusableTable& builtin();

    ConfusableTable();
    void add(char32_t cp, std::string replacement);
    void load_extension_file(const std::string& path);
    const std::string* lookup(char32_t cp) const;

private:
    std::map<char32_t, std::string> map_;
};

struct SkeletonResult {
    std::string text;
    bool residue = false; // some non-ASCII code point had no mapping
};

SkeletonResult skeleton_full(std::string_view s, const ConfusableTable& table);
std::string skeleton(std::string_view s, const ConfusableTable& table);

struct BidiRendering {
    std::string displayed;                 // controls removed, overrides applied
    bool had_controls = false;
    std::vector<size_t> control_positions; // code point offsets in the input
};

/// Display-order simulation for the override subset (RLO, LRO, PDF).
/// Directional isolates are stripped and counted as controls.
BidiRendering bidi_render(std::string_view s);

/// True when s, after skeletonization, reads as label(.label)+ with the
/// final label either in `etlds` or 2..6 ASCII letters.
bool looks_like_domain(std::string_view s, const ConfusableTable& table,
                       const std::set<std::string>& etlds);

using ManglePairs = std::vector<std::pair<std::string, std::string>>;
const ManglePairs& default_mangle_pairs();

/// Damerau-Levenshtein distance over code points with an extra unit-cost
/// class of visually-similar pair substitutions (g/q, rn/m, ...).
/// Single-character doubling already costs one edit as an insertion.
int mangle_distance(std::string_view a, std::string_view b,
                    const ManglePairs& pairs = default_mangle_pairs());

/// Heuristic score in [0,1]: how much a DNS label reads as a random
/// character sequence. Saturating sum of bigram improbabilities against
/// an embedded English table plus digit/consonant-run features, so
/// appending characters never lowers the score.
double randomness_score(std::string_view label);

} // namespace lurelint
