#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lurelint {

// UTF-8 <-> code point helpers. Decoding is lenient: malformed byte
// sequences become U+FFFD so hostile input never aborts a scan.
std::u32string utf8_decode(std::string_view s);
std::string utf8_encode(std::u32string_view cps);
std::string utf8_encode(char32_t cp);

std::string ascii_lower(std::string_view s);
bool iequals_ascii(std::string_view a, std::string_view b);
std::string_view trim(std::string_view s);
std::string collapse_ws(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
bool contains_ci(std::string_view haystack, std::string_view needle);

std::string base64_encode(std::string_view bytes);
std::string base64_decode(std::string_view text);

// Quoted-printable; `underscore_is_space` selects the RFC 2047 "Q" variant.
std::string qp_decode(std::string_view text, bool underscore_is_space = false);

std::string percent_decode(std::string_view s);
bool has_percent_escape(std::string_view s);

// RFC 2047 encoded words. Decoding handles B and Q with utf-8,
// us-ascii and iso-8859-1 charsets and passes anything else through.
std::string rfc2047_decode(std::string_view header_value);
// Encodes as a single utf-8 B word when the input is not printable ASCII.
std::string rfc2047_encode(std::string_view text);

} // namespace lurelint
