#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ghabuse::textkit {

/// Every http:// and https:// URL in order of appearance. Trailing sentence
/// punctuation and closing brackets are not part of the URL.
std::vector<std::string> extract_links(std::string_view text);

/// Line prefixes that mark a shell command (matched case-insensitively after
/// leading whitespace).
std::span<const std::string_view> default_command_prefixes();

/// Contents of fenced code blocks (``` or ~~~), followed by lines outside
/// fences that start with one of `prefixes`.
std::vector<std::string> extract_commands(std::string_view text,
                                          std::span<const std::string_view> prefixes);
std::vector<std::string> extract_commands(std::string_view text);

inline bool has_links(std::string_view text) { return !extract_links(text).empty(); }
inline bool has_commands(std::string_view text) { return !extract_commands(text).empty(); }

}  // namespace ghabuse::textkit
