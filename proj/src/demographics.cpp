#include "dmm/demographics.hpp"

#include <cmath>

namespace dmm {

bool DemographicVector::valid(double tol) const {
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0 && v <= 1.0)) return false;
    sum += v;
  }
  return std::abs(sum - 1.0) <= tol;
}

std::optional<DemographicVector> normalize_demographics(const std::array<double, 4>& raw) {
  double sum = 0.0;
  for (double v : raw) {
    if (!std::isfinite(v) || v < 0.0) throw input_error("bad demographic component");
    sum += v;
  }
  if (sum < 0.5) return std::nullopt;
  DemographicVector out;
  for (int k = 0; k < kNumCategories; k++) out[k] = raw[static_cast<size_t>(k)] / sum;
  return out;
}

DemographicVector user_prior(std::span<const DemographicVector> message_priors) {
  if (message_priors.empty()) throw input_error("user_prior: no messages");
  DemographicVector mean;
  for (const auto& v : message_priors) {
    for (int k = 0; k < kNumCategories; k++) mean[k] += v[k];
  }
  const double n = static_cast<double>(message_priors.size());
  for (int k = 0; k < kNumCategories; k++) mean[k] /= n;
  return mean;
}

}  // namespace dmm
