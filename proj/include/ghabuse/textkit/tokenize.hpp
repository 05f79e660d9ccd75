#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ghabuse::textkit {

/// Lowercases ASCII, splits on runs of non-alphanumeric ASCII bytes and keeps
/// tokens of at least two code points. Bytes >= 0x80 are treated as word
/// characters so UTF-8 sequences are never split. Code-fence contents are
/// tokenized like any other text.
std::vector<std::string> tokenize(std::string_view text);

}  // namespace ghabuse::textkit
