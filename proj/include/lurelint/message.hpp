#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lurelint {

struct SenderIdentity {
    bool present = false;
    std::optional<std::string> display_name; // decoded, control chars intact
    std::optional<std::string> address;      // addr-spec
    std::optional<std::string> local_part;
    std::optional<std::string> host;
    std::optional<std::string> authentication_results; // raw header value
    std::optional<std::string> return_path_host;

    bool operator==(const SenderIdentity&) const = default;
};

enum class LinkKind { anchor, form_submit, image_link, inline_image };
std::string_view to_string(LinkKind k);

struct LinkInstance {
    size_t source_index = 0;
    LinkKind kind = LinkKind::anchor;
    std::optional<std::string> href_raw;       // as authored
    std::optional<std::string> href_effective; // absolute after base resolution
    std::string anchor_text;
    std::optional<std::string> title_attr;
    bool base_applied = false;
    bool styled_as_link = false;

    bool operator==(const LinkInstance&) const = default;
};

struct AttachmentMeta {
    size_t index = 0;
    std::string filename_raw; // verbatim, including control characters
    std::optional<std::string> declared_mime;
    size_t size_bytes = 0;

    bool operator==(const AttachmentMeta&) const = default;
};

enum class RefKind { stylesheet, image, other };
std::string_view to_string(RefKind k);

struct ExternalRef {
    RefKind kind = RefKind::other;
    std::string url;
    bool local = false; // file: scheme, drive-letter path, or rooted path

    bool operator==(const ExternalRef&) const = default;
};

/// Structural facts the rendering-environment rules need; collected by
/// the same pass that extracts links.
struct HtmlFacts {
    struct PasswordInput {
        std::string tag; // the raw input tag text
    };
    struct FormInfo {
        std::string visible_text;
        bool has_input = false;
        bool has_action = false;
    };
    struct ImageAnchor {
        size_t link_index; // into EmailMessage::links
        std::string style; // combined style attrs of anchor + image
    };
    std::vector<PasswordInput> password_inputs;
    std::vector<FormInfo> forms;
    std::vector<ImageAnchor> image_anchors;
    std::map<size_t, std::string> image_block_text; // link index -> enclosing block text

    bool operator==(const HtmlFacts&) const = default;
    bool operator==(const PasswordInput&) const;
};

inline bool operator==(const HtmlFacts::PasswordInput& a, const HtmlFacts::PasswordInput& b)
{ return a.tag == b.tag; }
inline bool operator==(const HtmlFacts::FormInfo& a, const HtmlFacts::FormInfo& b)
{ return a.visible_text == b.visible_text && a.has_input == b.has_input && a.has_action == b.has_action; }
inline bool operator==(const HtmlFacts::ImageAnchor& a, const HtmlFacts::ImageAnchor& b)
{ return a.link_index == b.link_index && a.style == b.style; }

struct EmailMessage {
    std::string raw_bytes;
    std::vector<std::pair<std::string, std::string>> headers; // original order and names
    SenderIdentity sender;
    std::optional<std::string> body_html;
    std::optional<std::string> body_text;
    std::vector<LinkInstance> links;
    std::vector<AttachmentMeta> attachments;
    std::vector<ExternalRef> external_refs;
    HtmlFacts html_facts;

    std::optional<std::string> header(std::string_view name) const;
};

class HeaderSectionMissing : public std::runtime_error {
public:
    HeaderSectionMissing() : std::runtime_error("no header/body separator found") {}
};

/// Lenient parse of a raw RFC-5322/MIME message. Malformed MIME yields a
/// best-effort body and empty link list; only a missing blank-line
/// separator is fatal.
EmailMessage parse_message(std::string_view raw);

/// Tag-scanner link extraction. `base` seeds resolution; a <base href>
/// inside the document takes precedence.
std::vector<LinkInstance> extract_links(std::string_view html,
                                        std::optional<std::string> base = std::nullopt);

/// Canonical writer: verbatim headers, reconstructed MIME body. For
/// messages this writer produced, parse -> serialize is the identity.
std::string serialize_message(const EmailMessage& msg);

/// Deterministic attachment payload used by the canonical writer.
std::string canonical_payload(size_t size);

/// Semantic equality (everything except raw_bytes).
bool models_equal(const EmailMessage& a, const EmailMessage& b);

} // namespace lurelint
