#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dmm/sampler.hpp"

namespace dmm {

// Averaged word-topic tables from the final Gibbs samples, with the derived
// topic-word distributions. Immutable after training; safe to share across
// threads.
struct TrainedModel {
  Vocabulary vocab;
  Hyperparams hyper;
  std::vector<double> nbar_wk;  // V*K averaged counts
  std::vector<double> nbar_k;   // per-topic column sums of nbar_wk
  std::vector<double> phi;      // V*K, phi[w][k] = (nbar_wk+1)/(nbar_k+V)

  uint32_t v() const { return vocab.size(); }
  const double* phi_row(uint32_t w) const {
    return phi.data() + static_cast<size_t>(w) * hyper.K;
  }
  double phi_at(uint32_t w, int k) const { return phi_row(w)[k]; }

  // Recomputes nbar_k and phi from nbar_wk.
  void derive_phi();
};

struct TrainOptions {
  // Retain per-message averaged topic counts (needed for user/message
  // posteriors and aligned-corpus extraction; costs M*K doubles).
  bool retain_message_averages = false;
  // 0 runs the serial reference sampler. >=1 runs the approximate
  // partitioned sampler with that many partitions (OpenMP across them).
  int partitions = 0;
  // Collects the collapsed joint log-likelihood after every sweep.
  std::vector<double>* loglik = nullptr;
  // Called after every sweep with (sweep index from 1, log-likelihood).
  void (*progress)(int, double) = nullptr;
};

struct TrainResult {
  TrainedModel model;
  // M*K when retain_message_averages was set, else empty. Row order is
  // corpus message order.
  std::vector<double> nbar_mk;
};

TrainResult train(const Corpus& corpus, const Hyperparams& hyper, const TrainOptions& opts = {});

// DMM v1 model file: header, vocabulary block, then V lines of K averaged
// counts. phi is derived on load, never stored.
void write_model(const TrainedModel& model, std::ostream& out);
void write_model_file(const TrainedModel& model, const std::string& path);
TrainedModel read_model(std::istream& in);
TrainedModel read_model_file(const std::string& path);

}  // namespace dmm
