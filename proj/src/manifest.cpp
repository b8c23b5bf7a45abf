#include "dmm/manifest.hpp"

#include <fstream>

#include "dmm/common.hpp"

namespace dmm {

Manifest::Manifest(std::string_view command) {
  set("manifest_version", "1");
  set("artifact_version", kArtifactVersion);
  set("command", command);
}

void Manifest::set(std::string_view key, std::string_view value) {
  entries_.emplace_back(std::string(key), std::string(value));
}

void Manifest::set(std::string_view key, double value) { set(key, format_double(value)); }

void Manifest::set(std::string_view key, uint64_t value) { set(key, std::to_string(value)); }

void Manifest::set(std::string_view key, int64_t value) { set(key, std::to_string(value)); }

void Manifest::add_input(std::string_view name, const std::string& path) {
  std::string base = "input." + std::string(name);
  set(base + ".path", path);
  char hex[17];
  const uint64_t h = fnv1a64_file(path);
  for (int i = 0; i < 16; i++) hex[i] = "0123456789abcdef"[(h >> (60 - 4 * i)) & 0xF];
  hex[16] = '\0';
  set(base + ".fnv1a64", hex);
}

void Manifest::write(std::ostream& out) const {
  for (const auto& [key, value] : entries_) out << key << '=' << value << '\n';
  if (!out) throw input_error("manifest write failed");
}

void Manifest::write_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw input_error("cannot open for writing: " + path);
  write(out);
}

}  // namespace dmm
