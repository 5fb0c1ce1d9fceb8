#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace chemdelt::linker {

/// NFC, simple (one-to-one) case folding, whitespace runs collapsed to one
/// space, ends trimmed. No German-specific rewriting: "ß" stays "ß".
/// Idempotent. Input must be valid UTF-8.
std::string normalize(std::string_view text);

/// Byte range [begin, end) of one token in the scanned text.
struct TokenSpan {
  std::size_t begin = 0;
  std::size_t end = 0;

  friend bool operator==(const TokenSpan&, const TokenSpan&) = default;
};

/// Tokens are maximal runs of Unicode letters and decimal digits. Combining
/// marks continue a token; a hyphen (U+002D or U+2010) is kept only between
/// two token characters. Offsets are bytes into `text`.
std::vector<TokenSpan> scan_tokens(std::string_view text);

}  // namespace chemdelt::linker
