// Throughput comparison between the serial Gibbs sweep and the partitioned
// OpenMP sweep. Not a test; run by hand.
//
//   sweep_bench [tokens] [vocab] [partitions...]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "dmm/sampler.hpp"
#include "dmm/synth.hpp"

namespace {

double time_sweeps(dmm::SamplerState& state, const dmm::Corpus& corpus,
                   std::span<const double> alpha_pi, double beta, int partitions,
                   int sweeps) {
  auto start = std::chrono::steady_clock::now();
  for (int s = 1; s <= sweeps; s++) {
    if (partitions == 0) {
      auto rng = dmm::sweep_rng(1, s, 0);
      dmm::gibbs_sweep(state, corpus, alpha_pi, beta, rng);
    } else {
      dmm::gibbs_sweep_partitioned(state, corpus, alpha_pi, beta, 1, s, partitions);
    }
  }
  auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(stop - start).count();
}

}  // namespace

int main(int argc, char** argv) {
  uint64_t tokens = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 4000000;
  uint32_t vocab = argc > 2 ? static_cast<uint32_t>(std::strtoul(argv[2], nullptr, 10)) : 200000;
  std::vector<int> partition_counts;
  for (int i = 3; i < argc; i++) partition_counts.push_back(std::atoi(argv[i]));
  if (partition_counts.empty()) partition_counts = {1, 2, 4, 8};

  dmm::SynthSpec spec;
  spec.vocab_words = vocab;
  spec.tokens_per_msg = 10;
  spec.msgs_per_user = 20;
  spec.num_users = static_cast<uint32_t>(
      tokens / (spec.tokens_per_msg * spec.msgs_per_user));
  spec.seed = 17;
  std::printf("generating %u users x %u msgs x %u tokens, V=%u\n", spec.num_users,
              spec.msgs_per_user, spec.tokens_per_msg, vocab);
  auto synth = dmm::generate_synthetic(spec);
  const auto& corpus = synth.corpus;
  std::printf("corpus: %zu tokens, %zu messages\n", corpus.total_tokens(),
              corpus.messages.size());

  dmm::Hyperparams hyper;
  hyper.beta = 0.01 * static_cast<double>(corpus.vocab.size());
  auto alpha_pi = dmm::make_alpha_pi(corpus, hyper);

  const int sweeps = 3;
  const double n = static_cast<double>(corpus.total_tokens()) * sweeps;

  {
    auto rng = dmm::sweep_rng(1, 0, 0);
    auto state = dmm::init_state(corpus, alpha_pi, hyper.K, rng);
    auto warm = dmm::sweep_rng(1, 1, 0);
    dmm::gibbs_sweep(state, corpus, alpha_pi, hyper.beta, warm);
    double s = time_sweeps(state, corpus, alpha_pi, hyper.beta, 0, sweeps);
    std::printf("serial           %6.2fs  %7.2fM tokens/s\n", s, n / s / 1e6);
  }

#ifdef _OPENMP
  std::printf("openmp max threads: %d\n", omp_get_max_threads());
#endif
  for (int p : partition_counts) {
    auto rng = dmm::sweep_rng(1, 0, 0);
    auto state = dmm::init_state(corpus, alpha_pi, hyper.K, rng);
    dmm::gibbs_sweep_partitioned(state, corpus, alpha_pi, hyper.beta, 1, 1, p);
    double s = time_sweeps(state, corpus, alpha_pi, hyper.beta, p, sweeps);
    std::printf("partitions=%-4d  %6.2fs  %7.2fM tokens/s\n", p, s, n / s / 1e6);
  }
  return 0;
}
