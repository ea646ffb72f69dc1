#pragma once

#include "lurelint/textscan.hpp"
#include "lurelint/url.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace lurelint {

enum class Indicator { sender, link, attachment, content };
std::string_view to_string(Indicator i);
int rank(Indicator i);

enum class Confidence { definite, heuristic };
std::string_view to_string(Confidence c);

/// One detected technique instance. `evidence` is always a verbatim
/// substring of the analyzed field or of its bidi-displayed rendering.
struct Finding {
    std::string rule_id;
    Indicator indicator = Indicator::content;
    std::string location; // header name / link[i] / attachment[i] / ...
    std::string evidence;
    Confidence confidence = Confidence::definite;
    std::string section; // technique catalog section, e.g. "5.9"
    std::string description;
};

struct RuleInfo {
    const char* id;
    Indicator indicator;
    const char* section;
    Confidence confidence; // default confidence for this rule's findings
    const char* summary;
    const char* example;
};

const std::vector<RuleInfo>& rule_registry();
const RuleInfo* find_rule(std::string_view id);

enum class ExtClass { executable, script, document, image, other };
std::string_view to_string(ExtClass c);

struct Thresholds {
    size_t visible_width = 60;
    size_t long_subdomain = 40;
    double random = 0.75;
    int mangle_max = 1;
};

struct RuleConfig {
    std::vector<std::string> brand_domains;
    std::vector<std::string> shortener_domains;
    std::vector<std::string> redirect_param_names;
    std::map<std::string, ExtClass> extension_risk;
    std::set<std::string> familiar_executable_exts;
    std::vector<std::string> premium_prefixes;
    std::vector<std::string> fitting_keywords;
    std::vector<std::string> scan_prompt_keywords;
    std::vector<std::string> credential_keywords;
    ManglePairs mangle_pairs;
    std::set<std::string> disabled_rules;
    Thresholds thresholds;
    PublicSuffixList psl;
    ConfusableTable confusables;

    static RuleConfig defaults();
    /// Flat key/value file; unknown keys are errors. See README for the schema.
    static RuleConfig load_file(const std::string& path);

    bool enabled(std::string_view rule_id) const;
    bool is_brand(std::string_view registrable) const;
    ExtClass classify_extension(std::string_view ext) const;
    std::set<std::string> etld_strings() const;
};

} // namespace lurelint
