#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dmm/model.hpp"

namespace dmm {

struct InferenceConfig {
  double alpha_sym = 1.0 / 16.0;  // symmetric pseudo-count per topic
  int iterations = 8;
  double convergence_tol = 0.001;  // max absolute theta change per sweep
  bool score_oov = false;          // include OOV tokens instead of dropping them
  bool early_stop = true;          // stop at the first converged sweep

  // Test instrumentation: receives the final T*K soft-assignment rows.
  std::vector<double>* q_out = nullptr;

  void check() const;
};

struct InferenceResult {
  DemographicVector theta;
  bool converged = false;
  int sweeps = 0;               // sweeps actually run
  size_t used_tokens = 0;       // tokens scored after OOV handling
  std::vector<double> deltas;   // max |theta change| after each sweep
};

// CVB0 fixed-point iteration for P(theta | w, phi, alpha): soft assignments
// q_t(k) proportional to (N_minus_t_k + alpha) * phi[w_t][k], updated
// sequentially in token order; theta is the mean q row. OOV tokens are
// dropped unless score_oov is set. Throws input_error when no tokens
// survive.
InferenceResult infer_theta(const TrainedModel& model, std::span<const uint32_t> tokens,
                            const InferenceConfig& cfg = {});

}  // namespace dmm
