#include "dmm/cvb0.hpp"

#include <cmath>

#include "dmm/common.hpp"

namespace dmm {

void InferenceConfig::check() const {
  if (!(alpha_sym > 0.0)) throw input_error("alpha_sym must be positive");
  if (iterations < 1) throw input_error("iterations must be at least 1");
  if (!(convergence_tol >= 0.0)) throw input_error("convergence_tol must be non-negative");
}

InferenceResult infer_theta(const TrainedModel& model, std::span<const uint32_t> tokens,
                            const InferenceConfig& cfg) {
  cfg.check();
  const int K = model.hyper.K;

  std::vector<uint32_t> kept;
  kept.reserve(tokens.size());
  for (uint32_t w : tokens) {
    if (w >= model.v()) throw input_error("token id outside the model vocabulary");
    if (w == kOovId && !cfg.score_oov) continue;
    kept.push_back(w);
  }
  if (kept.empty()) throw input_error("no in-vocabulary tokens to infer from");

  const size_t T = kept.size();
  std::vector<double> q(T * static_cast<size_t>(K));
  std::vector<double> s(static_cast<size_t>(K), 0.0);  // column sums of q

  for (size_t t = 0; t < T; t++) {
    const double* phi = model.phi_row(kept[t]);
    double* qt = q.data() + t * static_cast<size_t>(K);
    double total = 0.0;
    for (int k = 0; k < K; k++) {
      qt[k] = cfg.alpha_sym * phi[k];
      total += qt[k];
    }
    for (int k = 0; k < K; k++) {
      qt[k] /= total;
      s[static_cast<size_t>(k)] += qt[k];
    }
  }

  InferenceResult result;
  std::vector<double> theta(static_cast<size_t>(K));
  std::vector<double> prev(static_cast<size_t>(K));
  for (int k = 0; k < K; k++) prev[static_cast<size_t>(k)] = s[static_cast<size_t>(k)] / static_cast<double>(T);

  for (int sweep = 1; sweep <= cfg.iterations; sweep++) {
    for (size_t t = 0; t < T; t++) {
      const double* phi = model.phi_row(kept[t]);
      double* qt = q.data() + t * static_cast<size_t>(K);
      double total = 0.0;
      for (int k = 0; k < K; k++) {
        const double excl = s[static_cast<size_t>(k)] - qt[k];
        theta[static_cast<size_t>(k)] = (excl + cfg.alpha_sym) * phi[k];  // reused as scratch
        total += theta[static_cast<size_t>(k)];
      }
      for (int k = 0; k < K; k++) {
        const double fresh = theta[static_cast<size_t>(k)] / total;
        s[static_cast<size_t>(k)] += fresh - qt[k];
        qt[k] = fresh;
      }
    }
    double delta = 0.0;
    for (int k = 0; k < K; k++) {
      theta[static_cast<size_t>(k)] = s[static_cast<size_t>(k)] / static_cast<double>(T);
      delta = std::max(delta, std::abs(theta[static_cast<size_t>(k)] - prev[static_cast<size_t>(k)]));
      prev[static_cast<size_t>(k)] = theta[static_cast<size_t>(k)];
    }
    result.deltas.push_back(delta);
    result.sweeps = sweep;
    result.converged = delta <= cfg.convergence_tol;
    if (result.converged && cfg.early_stop) break;
  }

  result.used_tokens = T;
  for (int k = 0; k < K && k < kNumCategories; k++) result.theta[k] = prev[static_cast<size_t>(k)];
  if (cfg.q_out) *cfg.q_out = q;
  return result;
}

}  // namespace dmm
