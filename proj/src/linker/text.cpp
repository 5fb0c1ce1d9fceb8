#include "chemdelt/linker/text.h"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <stdexcept>

namespace chemdelt::linker {

namespace {

const icu::Normalizer2& nfc() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || n == nullptr) throw std::runtime_error("ICU NFC normalizer unavailable");
  return *n;
}

icu::UnicodeString to_nfc(const icu::UnicodeString& s) {
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString out = nfc().normalize(s, status);
  if (U_FAILURE(status)) throw std::runtime_error("ICU normalization failed");
  return out;
}

bool is_hyphen(UChar32 c) { return c == 0x002D || c == 0x2010; }
bool is_token_start(UChar32 c) { return u_isalnum(c) != 0; }
bool is_mark(UChar32 c) { return (U_GET_GC_MASK(c) & U_GC_M_MASK) != 0; }

}  // namespace

std::string normalize(std::string_view text) {
  icu::UnicodeString s = to_nfc(icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size()))));

  icu::UnicodeString folded;
  for (int32_t i = 0; i < s.length();) {
    UChar32 c = s.char32At(i);
    folded.append(u_foldCase(c, U_FOLD_CASE_DEFAULT));
    i += U16_LENGTH(c);
  }
  folded = to_nfc(folded);

  icu::UnicodeString collapsed;
  bool pending_space = false;
  for (int32_t i = 0; i < folded.length();) {
    UChar32 c = folded.char32At(i);
    i += U16_LENGTH(c);
    if (u_isUWhiteSpace(c)) {
      pending_space = true;
      continue;
    }
    if (pending_space && collapsed.length() > 0) collapsed.append(static_cast<UChar>(0x20));
    pending_space = false;
    collapsed.append(c);
  }
  std::string out;
  collapsed.toUTF8String(out);
  return out;
}

std::vector<TokenSpan> scan_tokens(std::string_view text) {
  std::vector<TokenSpan> tokens;
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());

  auto decode = [&](int32_t at, int32_t& next) {
    UChar32 c;
    next = at;
    U8_NEXT(s, next, length, c);
    return c;
  };

  int32_t i = 0;
  bool in_token = false;
  std::size_t start = 0;
  while (i < length) {
    int32_t next;
    UChar32 c = decode(i, next);
    if (in_token) {
      if (c >= 0 && (is_token_start(c) || is_mark(c))) {
        i = next;
        continue;
      }
      if (c >= 0 && is_hyphen(c) && next < length) {
        int32_t after;
        UChar32 d = decode(next, after);
        if (d >= 0 && is_token_start(d)) {
          i = next;
          continue;
        }
      }
      tokens.push_back({start, static_cast<std::size_t>(i)});
      in_token = false;
    }
    if (c >= 0 && is_token_start(c)) {
      in_token = true;
      start = static_cast<std::size_t>(i);
    }
    i = next;
  }
  if (in_token) tokens.push_back({start, static_cast<std::size_t>(length)});
  return tokens;
}

}  // namespace chemdelt::linker
