#pragma once

#include <array>
#include <optional>
#include <span>

#include "dmm/common.hpp"

namespace dmm {

// Point on the length-4 simplex over {white, AA, Hispanic, Asian}.
// Census priors and every topic posterior live in this shape.
struct DemographicVector {
  std::array<double, kNumCategories> p{};

  double& operator[](int k) { return p[static_cast<size_t>(k)]; }
  double operator[](int k) const { return p[static_cast<size_t>(k)]; }

  bool valid(double tol = 1e-9) const;
};

// Census covariates re-normalized to a simplex. Rows whose components sum
// to less than 0.5 are unusable and yield nullopt; negative components are
// rejected as input errors.
std::optional<DemographicVector> normalize_demographics(const std::array<double, 4>& raw);

// Component-wise mean of a user's per-message demographic vectors.
DemographicVector user_prior(std::span<const DemographicVector> message_priors);

}  // namespace dmm
