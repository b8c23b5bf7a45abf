#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dmm/corpus.hpp"
#include "dmm/rng.hpp"

namespace dmm {

struct Hyperparams {
  int K = kNumCategories;
  double alpha = 10.0;
  double beta = 0.0;  // total topic-word smoothing mass, spread as beta/V per word
  int iterations = 300;
  int average_last = 50;
  uint64_t seed = 1;

  // Validates the full training configuration. Training is anchored to the
  // demographic categories, so K must match their count.
  void check() const;
};

// Collapsed Gibbs count tables. All counts are exact tallies of z.
struct SamplerState {
  int K = 0;
  std::vector<uint8_t> z;      // per token, values in [0, K)
  std::vector<uint32_t> n_wk;  // V*K row-major word-topic counts
  std::vector<uint64_t> n_k;   // per-topic totals
  std::vector<uint32_t> n_mk;  // M*K row-major message-topic counts

  uint32_t* wk_row(uint32_t w) { return n_wk.data() + static_cast<size_t>(w) * K; }
  const uint32_t* wk_row(uint32_t w) const { return n_wk.data() + static_cast<size_t>(w) * K; }
  uint32_t* mk_row(uint32_t m) { return n_mk.data() + static_cast<size_t>(m) * K; }
  const uint32_t* mk_row(uint32_t m) const { return n_mk.data() + static_cast<size_t>(m) * K; }
};

// Per-user Dirichlet pseudocounts alpha * pi_u, row-major U*K. The anchored
// model uses the census prior; K must equal kNumCategories here.
std::vector<double> make_alpha_pi(const Corpus& corpus, const Hyperparams& hyper);

// Samples every z_t from its user's prior and tallies the count tables.
SamplerState init_state(const Corpus& corpus, std::span<const double> alpha_pi, int K,
                        Rng& rng);

// One full collapsed Gibbs sweep over the corpus in message-then-token
// order. Deterministic given the RNG state.
void gibbs_sweep(SamplerState& state, const Corpus& corpus, std::span<const double> alpha_pi,
                 double beta, Rng& rng);

// Approximate data-parallel sweep: messages are split into `partitions`
// contiguous token-balanced blocks, each sampled against a private snapshot
// of the word-topic tables, then the tables are re-tallied from z. Results
// depend on the partition count (not on thread count) and differ from the
// serial sweep; with partitions=1 it reproduces gibbs_sweep exactly.
void gibbs_sweep_partitioned(SamplerState& state, const Corpus& corpus,
                             std::span<const double> alpha_pi, double beta, uint64_t seed,
                             int sweep_index, int partitions);

// Full conditional for one token, given counts that already exclude it:
// p(k) proportional to (n_wk+beta/V)/(n_k+beta) * (n_mk+alpha_pi)/(n_m+sum alpha_pi).
// Writes the normalized distribution.
void token_conditional(std::span<const uint32_t> n_wk_row, std::span<const uint64_t> n_k,
                       std::span<const uint32_t> n_mk_row, uint64_t n_m,
                       std::span<const double> alpha_pi_row, double beta, uint32_t v,
                       std::span<double> out);

// Collapsed joint log P(w, z | alpha*pi, beta): Dirichlet-multinomial terms
// over the word-topic and message-topic tables. Zero-prior topics are
// skipped (their counts are invariantly zero).
double log_likelihood(const SamplerState& state, const Corpus& corpus,
                      std::span<const double> alpha_pi, double beta, uint32_t v);

// Recomputes every count table from z.
void retally(SamplerState& state, const Corpus& corpus, uint32_t v);

// Throws invariant_error if any table disagrees with a fresh tally of z.
void check_consistency(const SamplerState& state, const Corpus& corpus, uint32_t v);

// Derives per-sweep, per-partition RNG streams from the master seed.
// Sweep 0 is reserved for initialization.
inline Rng sweep_rng(uint64_t seed, int sweep_index, int partition) {
  return Rng(derive_seed(seed, static_cast<uint64_t>(sweep_index),
                         static_cast<uint64_t>(partition)));
}

}  // namespace dmm
