#include "dmm/text_normalize.hpp"

namespace dmm {

namespace utf8 {

char32_t decode_next(std::string_view in, size_t& pos) {
  unsigned char b0 = static_cast<unsigned char>(in[pos]);
  if (b0 < 0x80) {
    pos += 1;
    return b0;
  }
  int len;
  char32_t cp;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    // Stray continuation or invalid lead byte: emit as-is.
    pos += 1;
    return b0;
  }
  if (pos + len > in.size()) {
    pos += 1;
    return b0;
  }
  for (int i = 1; i < len; i++) {
    unsigned char b = static_cast<unsigned char>(in[pos + i]);
    if ((b & 0xC0) != 0x80) {
      pos += 1;
      return b0;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  // Reject overlong encodings and out-of-range values the same way.
  if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
      (len == 4 && (cp < 0x10000 || cp > 0x10FFFF))) {
    pos += 1;
    return b0;
  }
  pos += len;
  return cp;
}

void append(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

}  // namespace utf8

bool is_stripped_codepoint(char32_t cp) {
  for (const auto& [lo, hi] : kStripRanges) {
    if (cp < lo) return false;
    if (cp <= hi) return true;
  }
  return false;
}

std::string strip_symbols(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  size_t pos = 0;
  while (pos < text.size()) {
    size_t start = pos;
    char32_t cp = utf8::decode_next(text, pos);
    if (!is_stripped_codepoint(cp)) out.append(text.substr(start, pos - start));
  }
  return out;
}

bool is_unicode_space(char32_t cp) {
  switch (cp) {
    case 0x09:
    case 0x0A:
    case 0x0B:
    case 0x0C:
    case 0x0D:
    case 0x20:
    case 0x85:
    case 0xA0:
    case 0x1680:
    case 0x2028:
    case 0x2029:
    case 0x202F:
    case 0x205F:
    case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

namespace {

bool is_word_char(char32_t cp) {
  if (cp >= 0x80) return true;
  if (cp >= 'a' && cp <= 'z') return true;
  if (cp >= 'A' && cp <= 'Z') return true;
  if (cp >= '0' && cp <= '9') return true;
  return cp == '_';
}

bool is_mention(std::string_view token) {
  if (token.empty() || token[0] != '@') return false;
  size_t pos = 1;
  if (pos >= token.size()) return false;
  while (pos < token.size()) {
    if (!is_word_char(utf8::decode_next(token, pos))) return false;
  }
  return true;
}

}  // namespace

std::string strip_mentions(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  size_t pos = 0;
  size_t token_start = 0;
  bool in_token = false;
  auto flush = [&](size_t end) {
    if (!in_token) return;
    std::string_view token = text.substr(token_start, end - token_start);
    if (!is_mention(token)) {
      if (!out.empty()) out.push_back(' ');
      out.append(token);
    }
    in_token = false;
  };
  while (pos < text.size()) {
    size_t start = pos;
    char32_t cp = utf8::decode_next(text, pos);
    if (is_unicode_space(cp)) {
      flush(start);
    } else if (!in_token) {
      in_token = true;
      token_start = start;
    }
  }
  flush(text.size());
  return out;
}

}  // namespace dmm
