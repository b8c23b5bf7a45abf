#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "dmm/corpus.hpp"

namespace dmm {

// Parameters of the generative process: per-user simplex priors, topic-word
// distributions phi*_k ~ Dir(symmetric beta), per-message theta ~
// Dir(alpha * pi_u), tokens z ~ theta, w ~ phi*_z.
struct SynthSpec {
  int K = kNumCategories;
  uint32_t vocab_words = 500;  // real words; the OOV symbol is added on top
  uint32_t num_users = 2000;
  uint32_t msgs_per_user = 20;
  uint32_t tokens_per_msg = 10;
  double alpha = 10.0;
  double beta_per_word = 0.01;  // symmetric Dirichlet parameter for phi*
  uint64_t seed = 1;
  // Optional fixed user priors (size num_users); sampled from Dir(1,1,1,1)
  // when empty so every topic is exercised.
  std::vector<DemographicVector> user_priors;

  void check() const;
};

struct SynthResult {
  Corpus corpus;
  // Ground truth (vocab_words+1) * K row-major topic-word probabilities;
  // the OOV row is all zeros.
  std::vector<double> phi_star;
};

SynthResult generate_synthetic(const SynthSpec& spec);

// DMMPHI v1: header "DMMPHI v1 <K> <V>", then V lines of K reals.
void write_phi(std::span<const double> phi, int k, uint32_t v, std::ostream& out);
void write_phi_file(std::span<const double> phi, int k, uint32_t v, const std::string& path);

struct PhiTable {
  int K = 0;
  uint32_t v = 0;
  std::vector<double> values;  // V*K row-major
};

PhiTable read_phi(std::istream& in);
PhiTable read_phi_file(const std::string& path);

}  // namespace dmm
