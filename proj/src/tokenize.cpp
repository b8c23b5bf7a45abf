#include "dmm/tokenize.hpp"

#include "dmm/text_normalize.hpp"

namespace dmm {

namespace {

bool is_keep_char(char32_t cp) {
  if (cp >= 0x80) return true;
  if (cp >= 'a' && cp <= 'z') return true;
  if (cp >= '0' && cp <= '9') return true;
  return cp == '\'' || cp == '#' || cp == '@';
}

// Strips edge characters from an already-lowercased single token.
void emit_token(std::string_view raw, std::vector<std::string>& out) {
  // Decode once so edge stripping works on codepoints, not bytes.
  std::vector<std::pair<size_t, size_t>> spans;  // byte offset, length
  std::vector<char32_t> cps;
  size_t pos = 0;
  while (pos < raw.size()) {
    size_t start = pos;
    cps.push_back(utf8::decode_next(raw, pos));
    spans.emplace_back(start, pos - start);
  }
  size_t lo = 0, hi = cps.size();
  while (lo < hi && !is_keep_char(cps[lo])) lo++;
  while (hi > lo && !is_keep_char(cps[hi - 1])) hi--;
  if (lo == hi) return;
  size_t begin = spans[lo].first;
  size_t end = spans[hi - 1].first + spans[hi - 1].second;
  out.emplace_back(raw.substr(begin, end - begin));
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::string lowered;
  lowered.reserve(text.size());
  for (char c : text) {
    lowered.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a')
                                           : c);
  }
  std::vector<std::string> out;
  std::string_view lv = lowered;
  size_t pos = 0;
  size_t token_start = 0;
  bool in_token = false;
  while (pos < lv.size()) {
    size_t start = pos;
    char32_t cp = utf8::decode_next(lv, pos);
    if (is_unicode_space(cp)) {
      if (in_token) {
        emit_token(lv.substr(token_start, start - token_start), out);
        in_token = false;
      }
    } else if (!in_token) {
      in_token = true;
      token_start = start;
    }
  }
  if (in_token) emit_token(lv.substr(token_start), out);
  return out;
}

}  // namespace dmm
