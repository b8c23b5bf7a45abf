#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dmm {

// Demographic categories, in the fixed index order used everywhere:
// priors, posteriors, topic ids, and serialized tables.
inline constexpr int kNumCategories = 4;
enum Category : int { kWhite = 0, kAA = 1, kHispanic = 2, kAsian = 3 };

const char* category_name(int k);
int category_from_name(std::string_view name);

// Bad input data or unusable arguments; the CLI maps this to exit code 1.
struct input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A broken internal invariant; the CLI maps this to exit code 2.
struct invariant_error : std::logic_error {
  using std::logic_error::logic_error;
};

// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double v);
double parse_double(std::string_view text);

uint64_t fnv1a64(const void* data, size_t n);
uint64_t fnv1a64_file(const std::string& path);

}  // namespace dmm
