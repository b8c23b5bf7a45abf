#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace dmm {

// Lowercases (ASCII range only), splits on Unicode whitespace, and strips
// leading/trailing characters that are not letters, digits, apostrophes,
// '#', or '@' from each token. Non-ASCII codepoints count as letters.
// Tokens that become empty are dropped.
std::vector<std::string> tokenize(std::string_view text);

}  // namespace dmm
