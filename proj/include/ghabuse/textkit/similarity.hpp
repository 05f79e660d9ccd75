#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace ghabuse::textkit {

/// Optimal-string-alignment distance over Unicode code points: insertions,
/// deletions, substitutions and adjacent transpositions each cost 1.
std::size_t edit_distance(std::u32string_view a, std::u32string_view b);

/// Decodes UTF-8; invalid bytes map to U+FFFD.
std::u32string decode_utf8(std::string_view s);

/// Lowercased name with the separators '-', '_' and '.' removed.
std::u32string normalize_name(std::string_view name);

/// 1 - edit_distance / max length over normalized names; ("", "") -> 1.
double name_similarity(std::string_view a, std::string_view b);

/// Cosine similarity of raw term-frequency vectors of the two tokenized texts.
/// Both empty -> 1, exactly one empty -> 0.
double readme_similarity(std::string_view a, std::string_view b);

}  // namespace ghabuse::textkit
