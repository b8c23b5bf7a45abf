#include "dmm/common.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <vector>

namespace dmm {

static const char* kCategoryNames[kNumCategories] = {"white", "aa", "hispanic", "asian"};

const char* category_name(int k) {
  if (k < 0 || k >= kNumCategories) throw input_error("category index out of range");
  return kCategoryNames[k];
}

int category_from_name(std::string_view name) {
  for (int k = 0; k < kNumCategories; k++) {
    if (name == kCategoryNames[k]) return k;
  }
  if (name == "black") return kAA;
  if (name == "hisp") return kHispanic;
  throw input_error("unknown demographic category: " + std::string(name));
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  double v = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw input_error("bad numeric field: '" + std::string(text) + "'");
  }
  return v;
}

uint64_t fnv1a64(const void* data, size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  uint64_t h = 0xcbf29ce484222325ull;
  for (size_t i = 0; i < n; i++) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

uint64_t fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot open file for checksum: " + path);
  uint64_t h = 0xcbf29ce484222325ull;
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; i++) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ull;
    }
  }
  return h;
}

}  // namespace dmm
