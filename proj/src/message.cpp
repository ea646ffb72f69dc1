#include "lurelint/message.hpp"

#include "lurelint/encoding.hpp"
#include "lurelint/url.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace lurelint {

std::string_view to_string(LinkKind k)
{
    switch (k) {
    case LinkKind::anchor: return "anchor";
    case LinkKind::form_submit: return "form_submit";
    case LinkKind::image_link: return "image_link";
    case LinkKind::inline_image: return "inline_image";
    }
    return "?";
}

std::string_view to_string(RefKind k)
{
    switch (k) {
    case RefKind::stylesheet: return "stylesheet";
    case RefKind::image: return "image";
    case RefKind::other: return "other";
    }
    return "?";
}

std::optional<std::string> EmailMessage::header(std::string_view name) const
{
    for (const auto& [n, v] : headers)
        if (iequals_ascii(n, name))
            return v;
    return std::nullopt;
}

// ------------------------------------------------------------- headers --

namespace {

struct HeaderList {
    std::vector<std::pair<std::string, std::string>> items;

    std::optional<std::string> get(std::string_view name) const
    {
        for (const auto& [n, v] : items)
            if (iequals_ascii(n, name))
                return v;
        return std::nullopt;
    }
};

// Splits a header block into unfolded (name, value) pairs.
HeaderList parse_header_block(std::string_view block)
{
    HeaderList out;
    size_t pos = 0;
    while (pos < block.size()) {
        size_t eol = block.find('\n', pos);
        std::string_view line = block.substr(pos, eol == std::string_view::npos
                                                      ? std::string_view::npos
                                                      : eol - pos);
        pos = (eol == std::string_view::npos) ? block.size() : eol + 1;
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        if (line.empty())
            continue;
        if ((line.front() == ' ' || line.front() == '\t') && !out.items.empty()) {
            out.items.back().second += ' ';
            out.items.back().second += trim(line);
            continue;
        }
        size_t colon = line.find(':');
        if (colon == std::string_view::npos)
            continue; // garbage line, skip
        std::string name(line.substr(0, colon));
        std::string_view value = line.substr(colon + 1);
        if (!value.empty() && value.front() == ' ')
            value.remove_prefix(1);
        out.items.emplace_back(std::move(name), std::string(value));
    }
    return out;
}

// Content-Type / Content-Disposition style "value; p1=v1; p2=v2".
struct ParamHeader {
    std::string value; // lowercased main token
    std::vector<std::pair<std::string, std::string>> params;

    std::optional<std::string> param(std::string_view name) const
    {
        for (const auto& [n, v] : params)
            if (iequals_ascii(n, name))
                return v;
        return std::nullopt;
    }
};

ParamHeader parse_param_header(std::string_view raw)
{
    ParamHeader h;
    std::vector<std::string> pieces = split(raw, ';');
    if (!pieces.empty())
        h.value = ascii_lower(trim(pieces[0]));
    // RFC 2231 continuations: join name*0, name*1, ...
    std::map<std::string, std::string> star_parts;
    for (size_t i = 1; i < pieces.size(); ++i) {
        std::string_view p = trim(pieces[i]);
        size_t eq = p.find('=');
        if (eq == std::string_view::npos)
            continue;
        std::string name = ascii_lower(trim(p.substr(0, eq)));
        std::string_view v = trim(p.substr(eq + 1));
        if (v.size() >= 2 && v.front() == '"' && v.back() == '"')
            v = v.substr(1, v.size() - 2);
        std::string value(v);
        if (size_t star = name.find('*'); star != std::string::npos) {
            std::string base = name.substr(0, star);
            bool ext_encoded = name.back() == '*';
            if (ext_encoded) {
                // charset'lang'percent-encoded
                size_t q1 = value.find('\'');
                size_t q2 = (q1 == std::string::npos) ? std::string::npos
                                                      : value.find('\'', q1 + 1);
                if (q2 != std::string::npos)
                    value = percent_decode(value.substr(q2 + 1));
                else
                    value = percent_decode(value);
            }
            star_parts[base] += value;
        } else {
            h.params.emplace_back(std::move(name), std::move(value));
        }
    }
    for (auto& [n, v] : star_parts)
        h.params.emplace_back(n, v);
    return h;
}

std::string decode_transfer(std::string_view body, std::string_view cte)
{
    std::string enc = ascii_lower(trim(cte));
    if (enc == "base64")
        return base64_decode(body);
    if (enc == "quoted-printable")
        return qp_decode(body, false);
    return std::string(body);
}

// --------------------------------------------------------------- html --

void decode_entities_into(std::string_view s, std::string& out)
{
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '&') {
            out.push_back(s[i]);
            continue;
        }
        size_t semi = s.find(';', i);
        if (semi == std::string_view::npos || semi - i > 10) {
            out.push_back(s[i]);
            continue;
        }
        std::string_view ent = s.substr(i + 1, semi - i - 1);
        if (ent == "amp") out.push_back('&');
        else if (ent == "lt") out.push_back('<');
        else if (ent == "gt") out.push_back('>');
        else if (ent == "quot") out.push_back('"');
        else if (ent == "apos") out.push_back('\'');
        else if (ent == "nbsp") out.push_back(' ');
        else if (!ent.empty() && ent[0] == '#') {
            char32_t cp = 0;
            bool ok = true;
            if (ent.size() > 1 && (ent[1] == 'x' || ent[1] == 'X')) {
                for (size_t k = 2; k < ent.size(); ++k) {
                    char c = ent[k];
                    int v = (c >= '0' && c <= '9') ? c - '0'
                            : (c >= 'a' && c <= 'f') ? c - 'a' + 10
                            : (c >= 'A' && c <= 'F') ? c - 'A' + 10 : -1;
                    if (v < 0) { ok = false; break; }
                    cp = cp * 16 + static_cast<char32_t>(v);
                }
            } else {
                for (size_t k = 1; k < ent.size(); ++k) {
                    if (ent[k] < '0' || ent[k] > '9') { ok = false; break; }
                    cp = cp * 10 + static_cast<char32_t>(ent[k] - '0');
                }
            }
            if (!ok || cp == 0 || cp > 0x10FFFF) {
                out.push_back(s[i]);
                continue;
            }
            out += utf8_encode(cp);
        } else {
            out.push_back(s[i]);
            continue;
        }
        i = semi;
    }
}

std::string decode_entities(std::string_view s)
{
    std::string out;
    out.reserve(s.size());
    decode_entities_into(s, out);
    return out;
}

struct Tag {
    std::string name; // lowercased
    bool closing = false;
    std::vector<std::pair<std::string, std::string>> attrs;

    std::optional<std::string> attr(std::string_view n) const
    {
        for (const auto& [an, av] : attrs)
            if (an == n)
                return av;
        return std::nullopt;
    }
};

struct HtmlScan {
    std::vector<LinkInstance> links;
    std::vector<ExternalRef> refs;
    HtmlFacts facts;
};

bool is_block_tag(std::string_view name)
{
    static const std::set<std::string, std::less<>> blocks = {
        "p", "div", "br", "td", "th", "li", "tr", "table", "body", "html",
        "h1", "h2", "h3", "h4", "h5", "h6", "section", "article", "blockquote",
        "ul", "ol", "center"};
    return blocks.count(name) > 0;
}

bool is_local_path(std::string_view url)
{
    std::string_view v = trim(url);
    if (v.size() >= 5 && iequals_ascii(v.substr(0, 5), "file:"))
        return true;
    if (v.size() >= 3 && ((v[0] >= 'A' && v[0] <= 'Z') || (v[0] >= 'a' && v[0] <= 'z')) &&
        v[1] == ':' && v[2] == '\\')
        return true;
    if (!v.empty() && v[0] == '/' && !(v.size() >= 2 && v[1] == '/'))
        return true; // rooted path; "//" is a network-path reference
    return false;
}

bool skippable_ref(std::string_view url)
{
    std::string_view v = trim(url);
    return v.empty() || (v.size() >= 4 && iequals_ascii(v.substr(0, 4), "cid:")) ||
           (v.size() >= 5 && iequals_ascii(v.substr(0, 5), "data:"));
}

class HtmlScanner {
public:
    HtmlScanner(std::string_view html, std::optional<std::string> base)
        : html_(html), base_(std::move(base)) {}

    HtmlScan run()
    {
        size_t i = 0;
        while (i < html_.size()) {
            size_t lt = html_.find('<', i);
            if (lt == std::string_view::npos) {
                text(html_.substr(i));
                break;
            }
            if (lt > i)
                text(html_.substr(i, lt - i));
            if (html_.compare(lt, 4, "<!--") == 0) {
                size_t end = html_.find("-->", lt + 4);
                i = (end == std::string_view::npos) ? html_.size() : end + 3;
                continue;
            }
            size_t gt = html_.find('>', lt);
            if (gt == std::string_view::npos) {
                text(html_.substr(lt));
                break;
            }
            handle_tag(parse_tag(html_.substr(lt + 1, gt - lt - 1)), lt, gt);
            i = cursor_ > gt ? cursor_ : gt + 1;
        }
        finish_anchor();
        flush_block();
        return std::move(scan_);
    }

private:
    std::string_view html_;
    std::optional<std::string> base_;
    std::optional<std::string> doc_base_;
    HtmlScan scan_;
    size_t cursor_ = 0;

    struct AnchorCtx {
        bool open = false;
        std::optional<std::string> href;
        std::optional<std::string> title;
        std::string style;
        std::string text;
        bool has_img = false;
    } anchor_;

    struct FormCtx {
        bool open = false;
        std::optional<std::string> action;
        std::string text;
        bool has_input = false;
    } form_;

    std::string block_text_;
    std::vector<size_t> block_images_;

    const std::string* effective_base() const
    {
        if (doc_base_)
            return &*doc_base_;
        if (base_)
            return &*base_;
        return nullptr;
    }

    static Tag parse_tag(std::string_view body)
    {
        Tag t;
        size_t i = 0;
        if (i < body.size() && body[i] == '/') {
            t.closing = true;
            ++i;
        }
        size_t name_start = i;
        while (i < body.size() && (std::isalnum(static_cast<unsigned char>(body[i])) || body[i] == '!'))
            ++i;
        t.name = ascii_lower(body.substr(name_start, i - name_start));
        while (i < body.size()) {
            while (i < body.size() && std::isspace(static_cast<unsigned char>(body[i])))
                ++i;
            if (i >= body.size() || body[i] == '/')
                break;
            size_t astart = i;
            while (i < body.size() && body[i] != '=' && body[i] != '>' &&
                   !std::isspace(static_cast<unsigned char>(body[i])))
                ++i;
            std::string aname = ascii_lower(body.substr(astart, i - astart));
            std::string avalue;
            while (i < body.size() && std::isspace(static_cast<unsigned char>(body[i])))
                ++i;
            if (i < body.size() && body[i] == '=') {
                ++i;
                while (i < body.size() && std::isspace(static_cast<unsigned char>(body[i])))
                    ++i;
                if (i < body.size() && (body[i] == '"' || body[i] == '\'')) {
                    char q = body[i++];
                    size_t vstart = i;
                    while (i < body.size() && body[i] != q)
                        ++i;
                    avalue = decode_entities(body.substr(vstart, i - vstart));
                    if (i < body.size())
                        ++i;
                } else {
                    size_t vstart = i;
                    while (i < body.size() && !std::isspace(static_cast<unsigned char>(body[i])))
                        ++i;
                    avalue = decode_entities(body.substr(vstart, i - vstart));
                }
            }
            if (!aname.empty())
                t.attrs.emplace_back(std::move(aname), std::move(avalue));
        }
        return t;
    }

    void text(std::string_view raw)
    {
        std::string decoded = decode_entities(raw);
        if (anchor_.open)
            anchor_.text += decoded;
        if (form_.open)
            form_.text += decoded;
        block_text_ += decoded;
    }

    void flush_block()
    {
        std::string collapsed = collapse_ws(block_text_);
        for (size_t idx : block_images_)
            scan_.facts.image_block_text[idx] = collapsed;
        block_text_.clear();
        block_images_.clear();
    }

    void add_ref(RefKind kind, std::string_view url)
    {
        if (skippable_ref(url))
            return;
        scan_.refs.push_back({kind, std::string(trim(url)), is_local_path(url)});
    }

    void finish_anchor()
    {
        if (!anchor_.open)
            return;
        AnchorCtx a = std::move(anchor_);
        anchor_ = {};
        if (!a.href || trim(*a.href).empty())
            return;
        LinkInstance link;
        link.source_index = scan_.links.size();
        std::string text = collapse_ws(a.text);
        link.kind = (text.empty() && a.has_img) ? LinkKind::image_link : LinkKind::anchor;
        link.anchor_text = text;
        link.href_raw = std::string(trim(*a.href));
        link.title_attr = a.title;
        resolve_href(link);
        if (link.kind == LinkKind::image_link)
            scan_.facts.image_anchors.push_back({link.source_index, a.style});
        scan_.links.push_back(std::move(link));
    }

    void resolve_href(LinkInstance& link)
    {
        ParsedUrl u = parse_url(*link.href_raw);
        if (u.has_scheme) {
            link.href_effective = link.href_raw;
            return;
        }
        const std::string* base = effective_base();
        if (!base)
            return;
        std::string resolved = resolve_reference(*base, *link.href_raw);
        if (!resolved.empty()) {
            link.href_effective = resolved;
            link.base_applied = true;
        }
    }

    void handle_tag(const Tag& t, size_t lt, size_t gt)
    {
        cursor_ = gt + 1;
        if (t.name.empty())
            return;

        if (t.name == "style" && !t.closing) {
            size_t end = html_.find("</style", cursor_);
            std::string_view css = html_.substr(
                cursor_, end == std::string_view::npos ? std::string_view::npos
                                                       : end - cursor_);
            scan_css(css);
            cursor_ = (end == std::string_view::npos) ? html_.size()
                                                      : html_.find('>', end) + 1;
            return;
        }
        if (t.name == "script" && !t.closing) {
            size_t end = html_.find("</script", cursor_);
            cursor_ = (end == std::string_view::npos) ? html_.size()
                                                      : html_.find('>', end) + 1;
            return;
        }

        if (is_block_tag(t.name))
            flush_block();

        if (t.name == "base" && !t.closing) {
            if (auto href = t.attr("href"); href && !doc_base_)
                doc_base_ = trim(*href);
            return;
        }
        if (t.name == "a") {
            finish_anchor();
            if (!t.closing) {
                anchor_.open = true;
                anchor_.href = t.attr("href");
                anchor_.title = t.attr("title");
                if (auto s = t.attr("style"))
                    anchor_.style += *s;
            }
            return;
        }
        if (t.name == "form") {
            if (t.closing) {
                if (form_.open)
                    scan_.facts.forms.push_back({collapse_ws(form_.text),
                                                 form_.has_input,
                                                 form_.action.has_value()});
                form_ = {};
            } else {
                form_ = {};
                form_.open = true;
                if (auto a = t.attr("action"); a && !trim(*a).empty())
                    form_.action = std::string(trim(*a));
            }
            return;
        }
        if (t.name == "input" && !t.closing) {
            std::string type = ascii_lower(t.attr("type").value_or("text"));
            if (form_.open)
                form_.has_input = true;
            if (type == "password") {
                scan_.facts.password_inputs.push_back(
                    {std::string(html_.substr(lt, gt - lt + 1))});
            } else if (type == "submit" && form_.open && form_.action) {
                LinkInstance link;
                link.source_index = scan_.links.size();
                link.kind = LinkKind::form_submit;
                link.anchor_text = t.attr("value").value_or("");
                link.href_raw = form_.action;
                std::string style = ascii_lower(t.attr("style").value_or(""));
                std::string cls = ascii_lower(t.attr("class").value_or(""));
                link.styled_as_link = style.find("underline") != std::string::npos ||
                                      style.find("blue") != std::string::npos ||
                                      cls.find("link") != std::string::npos;
                resolve_href(link);
                scan_.links.push_back(std::move(link));
            }
            return;
        }
        if (t.name == "img" && !t.closing) {
            auto src = t.attr("src");
            if (anchor_.open) {
                anchor_.has_img = true;
                if (auto s = t.attr("style"))
                    anchor_.style += *s;
            } else {
                LinkInstance link;
                link.source_index = scan_.links.size();
                link.kind = LinkKind::inline_image;
                link.anchor_text = t.attr("alt").value_or("");
                block_images_.push_back(link.source_index);
                scan_.links.push_back(std::move(link));
            }
            if (src)
                add_ref(RefKind::image, *src);
            return;
        }
        if (t.name == "link" && !t.closing) {
            std::string rel = ascii_lower(t.attr("rel").value_or(""));
            auto href = t.attr("href");
            if (href && rel.find("stylesheet") != std::string::npos)
                add_ref(RefKind::stylesheet, *href);
            return;
        }
    }

    void scan_css(std::string_view css)
    {
        size_t pos = 0;
        while ((pos = css.find("@import", pos)) != std::string_view::npos) {
            pos += 7;
            size_t end = css.find(';', pos);
            std::string_view stmt = css.substr(
                pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
            std::string url;
            if (size_t u = stmt.find("url("); u != std::string_view::npos) {
                size_t close = stmt.find(')', u);
                if (close != std::string_view::npos)
                    url = std::string(trim(stmt.substr(u + 4, close - u - 4)));
            } else {
                url = std::string(trim(stmt));
            }
            if (url.size() >= 2 && (url.front() == '"' || url.front() == '\'') &&
                url.back() == url.front())
                url = url.substr(1, url.size() - 2);
            if (!url.empty())
                add_ref(RefKind::stylesheet, url);
            if (end == std::string_view::npos)
                break;
            pos = end;
        }
    }
};

HtmlScan scan_html(std::string_view html, std::optional<std::string> base)
{
    return HtmlScanner(html, std::move(base)).run();
}

// --------------------------------------------------------------- From --

void parse_addr_spec(std::string_view spec, SenderIdentity& s)
{
    std::string_view v = trim(spec);
    size_t at = v.rfind('@');
    if (at == std::string_view::npos || at == 0 || at + 1 >= v.size())
        return;
    std::string local(trim(v.substr(0, at)));
    std::string host(trim(v.substr(at + 1)));
    if (!host.empty() && host.front() == '[' && host.back() == ']' && host.size() > 2)
        host = host.substr(1, host.size() - 2); // domain-literal
    s.local_part = local;
    s.host = host;
    s.address = local + "@" + host;
}

SenderIdentity parse_from_value(std::string_view raw_value)
{
    SenderIdentity s;
    s.present = true;
    std::string decoded = rfc2047_decode(raw_value);
    std::string_view v = trim(decoded);

    size_t open = v.rfind('<');
    if (open != std::string_view::npos) {
        size_t close = v.find('>', open);
        std::string_view addr = v.substr(
            open + 1, close == std::string_view::npos ? std::string_view::npos
                                                      : close - open - 1);
        std::string_view display = trim(v.substr(0, open));
        if (display.size() >= 2 && display.front() == '"' && display.back() == '"')
            display = display.substr(1, display.size() - 2);
        if (!display.empty())
            s.display_name = std::string(display);
        parse_addr_spec(addr, s);
    } else if (v.find('@') != std::string_view::npos) {
        parse_addr_spec(v, s);
    } else if (!v.empty()) {
        std::string_view display = v;
        if (display.size() >= 2 && display.front() == '"' && display.back() == '"')
            display = display.substr(1, display.size() - 2);
        s.display_name = std::string(display);
    }
    return s;
}

// --------------------------------------------------------------- MIME --

struct MimeCollector {
    std::optional<std::string> body_text;
    std::vector<std::string> html_parts;
    std::vector<AttachmentMeta> attachments;
};

void walk_part(const HeaderList& headers, std::string_view body, MimeCollector& out,
               int depth)
{
    if (depth > 8)
        return;
    ParamHeader ct = parse_param_header(headers.get("Content-Type").value_or("text/plain"));
    ParamHeader cd = parse_param_header(headers.get("Content-Disposition").value_or(""));

    if (ct.value.rfind("multipart/", 0) == 0) {
        auto boundary = ct.param("boundary");
        if (!boundary || boundary->empty())
            return;
        std::string open_marker = "--" + *boundary;
        // collect child part ranges between boundary lines
        std::vector<std::pair<size_t, size_t>> parts;
        size_t line_start = 0;
        std::optional<size_t> current;
        while (line_start <= body.size()) {
            size_t eol = body.find('\n', line_start);
            size_t line_end = (eol == std::string_view::npos) ? body.size() : eol;
            std::string_view line = body.substr(line_start, line_end - line_start);
            if (!line.empty() && line.back() == '\r')
                line.remove_suffix(1);
            bool is_boundary = line.rfind(open_marker, 0) == 0 &&
                               (line.size() == open_marker.size() ||
                                trim(line.substr(open_marker.size())).empty() ||
                                line.substr(open_marker.size(), 2) == "--");
            if (is_boundary) {
                if (current) {
                    size_t end = line_start;
                    // strip the CRLF that belongs to the boundary line
                    if (end > *current && body[end - 1] == '\n') --end;
                    if (end > *current && body[end - 1] == '\r') --end;
                    parts.emplace_back(*current, end);
                    current.reset();
                }
                bool final_marker = line.substr(open_marker.size(), 2) == "--";
                if (!final_marker)
                    current = (eol == std::string_view::npos) ? body.size() : eol + 1;
            }
            if (eol == std::string_view::npos)
                break;
            line_start = eol + 1;
        }
        for (auto [b, e] : parts) {
            std::string_view part = body.substr(b, e - b);
            size_t sep = part.find("\r\n\r\n");
            size_t sep_len = 4;
            if (sep == std::string_view::npos) {
                sep = part.find("\n\n");
                sep_len = 2;
            }
            HeaderList ph;
            std::string_view pbody;
            if (sep == std::string_view::npos) {
                ph = parse_header_block(part);
            } else {
                ph = parse_header_block(part.substr(0, sep));
                pbody = part.substr(sep + sep_len);
            }
            walk_part(ph, pbody, out, depth + 1);
        }
        return;
    }

    std::string decoded =
        decode_transfer(body, headers.get("Content-Transfer-Encoding").value_or(""));

    std::optional<std::string> filename = cd.param("filename");
    if (!filename)
        filename = ct.param("name");
    bool is_attachment = cd.value == "attachment" ||
                         (filename && ct.value.rfind("text/", 0) != 0 &&
                          cd.value != "inline");

    if (is_attachment) {
        AttachmentMeta meta;
        meta.index = out.attachments.size();
        std::string fn = filename.value_or("");
        if (fn.find("=?") != std::string::npos)
            fn = rfc2047_decode(fn);
        if (fn.empty())
            fn = "attachment-" + std::to_string(meta.index);
        meta.filename_raw = fn;
        if (!ct.value.empty())
            meta.declared_mime = ct.value;
        meta.size_bytes = decoded.size();
        out.attachments.push_back(std::move(meta));
        return;
    }
    if (ct.value == "text/html") {
        out.html_parts.push_back(std::move(decoded));
        return;
    }
    if (ct.value == "text/plain" && !out.body_text) {
        out.body_text = std::move(decoded);
        return;
    }
}

} // namespace

std::vector<LinkInstance> extract_links(std::string_view html,
                                        std::optional<std::string> base)
{
    return scan_html(html, std::move(base)).links;
}

EmailMessage parse_message(std::string_view raw)
{
    if (raw.empty())
        throw HeaderSectionMissing();
    size_t sep = raw.find("\r\n\r\n");
    size_t sep_len = 4;
    if (sep == std::string_view::npos) {
        sep = raw.find("\n\n");
        sep_len = 2;
    }
    if (sep == std::string_view::npos)
        throw HeaderSectionMissing();

    EmailMessage msg;
    msg.raw_bytes = std::string(raw);
    HeaderList headers = parse_header_block(raw.substr(0, sep));
    msg.headers = headers.items;

    if (auto from = headers.get("From"))
        msg.sender = parse_from_value(*from);
    if (auto rp = headers.get("Return-Path")) {
        SenderIdentity tmp;
        std::string_view v = trim(*rp);
        if (v.size() >= 2 && v.front() == '<' && v.back() == '>')
            v = v.substr(1, v.size() - 2);
        parse_addr_spec(v, tmp);
        if (tmp.host)
            msg.sender.return_path_host = tmp.host;
    }
    if (auto ar = headers.get("Authentication-Results"))
        msg.sender.authentication_results = ar;

    MimeCollector mime;
    walk_part(headers, raw.substr(sep + sep_len), mime, 0);
    msg.body_text = std::move(mime.body_text);
    msg.attachments = std::move(mime.attachments);
    if (!mime.html_parts.empty())
        msg.body_html = mime.html_parts.front();

    for (const std::string& html : mime.html_parts) {
        HtmlScan scan = scan_html(html, std::nullopt);
        size_t offset = msg.links.size();
        for (LinkInstance& l : scan.links) {
            l.source_index += offset;
            msg.links.push_back(std::move(l));
        }
        for (ExternalRef& r : scan.refs)
            msg.external_refs.push_back(std::move(r));
        for (auto& p : scan.facts.password_inputs)
            msg.html_facts.password_inputs.push_back(std::move(p));
        for (auto& f : scan.facts.forms)
            msg.html_facts.forms.push_back(std::move(f));
        for (auto& ia : scan.facts.image_anchors)
            msg.html_facts.image_anchors.push_back(
                {ia.link_index + offset, std::move(ia.style)});
        for (auto& [idx, text] : scan.facts.image_block_text)
            msg.html_facts.image_block_text[idx + offset] = std::move(text);
    }
    return msg;
}

// ---------------------------------------------------------- serializer --

std::string canonical_payload(size_t size)
{
    static const std::string cycle =
        "0123456789abcdef-corpus-payload-0123456789ABCDEF-PAYLOAD-BYTES!\n";
    std::string out;
    out.reserve(size);
    while (out.size() < size)
        out += cycle.substr(0, std::min(cycle.size(), size - out.size()));
    return out;
}

namespace {

std::string wrap_base64(std::string_view b64)
{
    std::string out;
    for (size_t i = 0; i < b64.size(); i += 76) {
        out += b64.substr(i, 76);
        out += "\r\n";
    }
    return out;
}

std::string quote_filename(std::string_view name)
{
    return "\"" + rfc2047_encode(name) + "\"";
}

void emit_text_part(std::string& out, std::string_view type, std::string_view body)
{
    out += "Content-Type: ";
    out += type;
    out += "; charset=utf-8\r\nContent-Transfer-Encoding: 8bit\r\n\r\n";
    out += body;
    out += "\r\n";
}

void emit_attachment(std::string& out, const AttachmentMeta& att)
{
    std::string mime = att.declared_mime.value_or("application/octet-stream");
    std::string fn = quote_filename(att.filename_raw);
    out += "Content-Type: " + mime + "; name=" + fn + "\r\n";
    out += "Content-Disposition: attachment; filename=" + fn + "\r\n";
    out += "Content-Transfer-Encoding: base64\r\n\r\n";
    out += wrap_base64(base64_encode(canonical_payload(att.size_bytes)));
}

void emit_alternative(std::string& out, const std::string& boundary,
                      const EmailMessage& msg)
{
    out += "Content-Type: multipart/alternative; boundary=\"" + boundary + "\"\r\n\r\n";
    out += "--" + boundary + "\r\n";
    emit_text_part(out, "text/plain", msg.body_text.value_or(""));
    out += "--" + boundary + "\r\n";
    emit_text_part(out, "text/html", msg.body_html.value_or(""));
    out += "--" + boundary + "--\r\n";
}

} // namespace

std::string serialize_message(const EmailMessage& msg)
{
    std::string out;
    for (const auto& [name, value] : msg.headers) {
        out += name;
        out += ": ";
        out += value;
        out += "\r\n";
    }
    out += "\r\n";

    ParamHeader ct = parse_param_header(msg.header("Content-Type").value_or("text/plain"));

    if (ct.value == "multipart/mixed") {
        std::string boundary = ct.param("boundary").value_or("mixed-boundary");
        std::string alt_boundary = boundary + ".alt";
        if (msg.body_text || msg.body_html) {
            out += "--" + boundary + "\r\n";
            if (msg.body_text && msg.body_html)
                emit_alternative(out, alt_boundary, msg);
            else if (msg.body_html)
                emit_text_part(out, "text/html", *msg.body_html);
            else
                emit_text_part(out, "text/plain", *msg.body_text);
        }
        for (const AttachmentMeta& att : msg.attachments) {
            out += "--" + boundary + "\r\n";
            emit_attachment(out, att);
        }
        out += "--" + boundary + "--\r\n";
    } else if (ct.value == "multipart/alternative") {
        std::string boundary = ct.param("boundary").value_or("alt-boundary");
        out += "--" + boundary + "\r\n";
        emit_text_part(out, "text/plain", msg.body_text.value_or(""));
        out += "--" + boundary + "\r\n";
        emit_text_part(out, "text/html", msg.body_html.value_or(""));
        out += "--" + boundary + "--\r\n";
    } else if (ct.value == "text/html") {
        out += msg.body_html.value_or("");
    } else {
        out += msg.body_text.value_or(msg.body_html.value_or(""));
    }
    return out;
}

bool models_equal(const EmailMessage& a, const EmailMessage& b)
{
    return a.headers == b.headers && a.sender == b.sender &&
           a.body_html == b.body_html && a.body_text == b.body_text &&
           a.links == b.links && a.attachments == b.attachments &&
           a.external_refs == b.external_refs && a.html_facts == b.html_facts;
}

} // namespace lurelint
