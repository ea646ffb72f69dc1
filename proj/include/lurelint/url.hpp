#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lurelint {

enum class HostKind { dns_name, ipv4, ipv6, none };

/// URL decomposed into its displayed components. Splitting is total and
/// non-destructive: every piece is kept verbatim so reassemble() returns
/// the input byte-for-byte; only the `scheme` field is lowercased.
struct ParsedUrl {
    std::string scheme;                  // lowercased; "" for relative refs
    std::optional<std::string> userinfo; // between "//" and the last "@"
    std::optional<std::string> host;     // raw, as written
    HostKind host_kind = HostKind::none;
    std::optional<int> port;
    std::string path;
    std::optional<std::string> query;    // without "?"
    std::optional<std::string> fragment; // without "#"
    // percent-decoded + IDNA-decoded + lowercased; never merged into host
    std::optional<std::string> decoded_host;
    bool host_decode_changed = false;
    bool idna_decode_failed = false;

    bool has_scheme = false;
    bool has_authority = false;

    std::string reassemble() const;

private:
    friend ParsedUrl parse_url(std::string_view);
    std::string raw_scheme_;           // original case
    std::optional<std::string> raw_port_; // digits as written (may be empty)
};

ParsedUrl parse_url(std::string_view input);

/// Resolves `ref` against `base` (RFC 3986 merge, minimal dot handling).
/// Empty result when neither side yields an absolute URL.
std::string resolve_reference(std::string_view base, std::string_view ref);

struct DomainSplit {
    std::vector<std::string> subdomains;
    std::string registrable_domain;
    std::string etld;
};

class HostIsSuffixOnly : public std::runtime_error {
public:
    explicit HostIsSuffixOnly(const std::string& host)
        : std::runtime_error("host is a public suffix: " + host) {}
};

/// Public-suffix rules: exact suffixes plus "*.x" wildcards, longest
/// match wins. Ships an embedded snapshot; a file in the usual one-rule-
/// per-line format can replace it.
class PublicSuffixList {
public:
    static PublicSuffixList builtin();
    static PublicSuffixList from_file(const std::string& path);

    void add_rule(std::string_view rule);
    /// Number of labels of the longest matching suffix, 0 if none.
    size_t suffix_labels(const std::vector<std::string>& labels) const;
    /// Exact rules as strings ("com", "co.uk"), for domain-likeness checks.
    const std::set<std::string>& exact_rules() const { return exact_; }
    std::string version_tag;

private:
    std::set<std::string> exact_;
    std::set<std::string> wildcard_parents_; // "ck" for rule "*.ck"
};

/// Longest public suffix is the eTLD; one label left of it is the
/// registrable domain. Hosts matching no rule use the prevailing "*"
/// rule (last label). Throws HostIsSuffixOnly when nothing is left.
DomainSplit split_domain(std::string_view host, const PublicSuffixList& psl);
std::optional<DomainSplit> try_split_domain(std::string_view host,
                                            const PublicSuffixList& psl);

struct IdnaResult {
    std::string host;
    bool changed = false;
    bool decode_failed = false;
};

/// Decodes xn-- (ACE) labels to Unicode; failures leave the label
/// untouched and set the flag. Idempotent.
IdnaResult decode_idna(std::string_view host);

enum class SchemeClass { web, tel, data, mailto, custom, relative };
SchemeClass classify_scheme(const ParsedUrl& url);
std::string_view to_string(SchemeClass c);

} // namespace lurelint
