#pragma once

// Shared fixtures for the unit suites.

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "dmm/corpus.hpp"
#include "dmm/demographics.hpp"

namespace testutil {

inline dmm::DemographicVector demo(double a, double b, double c, double d) {
  dmm::DemographicVector v;
  v.p = {a, b, c, d};
  return v;
}

class TempDir {
 public:
  TempDir() {
    auto base = std::filesystem::temp_directory_path();
    std::random_device rd;
    for (int attempt = 0; attempt < 64; attempt++) {
      path_ = base / ("dmmtest-" + std::to_string(rd()));
      std::error_code ec;
      if (std::filesystem::create_directory(path_, ec)) return;
    }
    throw std::runtime_error("cannot create temp dir");
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

inline void spit(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

// Two users, four messages, vocabulary {a b c d}; enough structure for
// sampler and posterior plumbing without being a synthetic benchmark.
inline dmm::Corpus small_corpus() {
  dmm::Corpus corpus;
  std::vector<std::string> words = {"a", "b", "c", "d"};
  corpus.vocab = dmm::Vocabulary(words);
  corpus.add_message("m1", "u1", demo(0.7, 0.1, 0.1, 0.1), {1, 2, 1});
  corpus.add_message("m2", "u1", demo(0.7, 0.1, 0.1, 0.1), {3, 4});
  corpus.add_message("m3", "u2", demo(0.1, 0.6, 0.2, 0.1), {2, 2, 4, 1});
  corpus.add_message("m4", "u2", demo(0.1, 0.6, 0.2, 0.1), {3});
  corpus.finalize_priors();
  return corpus;
}

}  // namespace testutil
