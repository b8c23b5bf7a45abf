#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dmm {

inline constexpr std::string_view kArtifactVersion = "1.0";

// Flat key=value record of one CLI run: resolved flags, seeds, and input
// checksums. Deliberately timestamp-free so identical runs produce
// identical manifests.
class Manifest {
 public:
  explicit Manifest(std::string_view command);

  void set(std::string_view key, std::string_view value);
  void set(std::string_view key, const char* value) { set(key, std::string_view(value)); }
  void set(std::string_view key, double value);
  void set(std::string_view key, uint64_t value);
  void set(std::string_view key, int64_t value);
  void set(std::string_view key, int value) { set(key, static_cast<int64_t>(value)); }
  void set(std::string_view key, bool value) { set(key, value ? "true" : "false"); }

  // Records the path and its FNV-1a checksum under input.<name>.*.
  void add_input(std::string_view name, const std::string& path);

  void write(std::ostream& out) const;
  void write_file(const std::string& path) const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace dmm
