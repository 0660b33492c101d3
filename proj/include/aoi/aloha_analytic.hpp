// Closed-form analysis of slotted ALOHA-like random access.

#ifndef AOI_ALOHA_ANALYTIC_HPP
#define AOI_ALOHA_ANALYTIC_HPP

#include <vector>

#include "aoi/core.hpp"

namespace aoi {

/// Per-slot update probability of each node:
///   gamma_i = tau_i p_i prod_{j != i} (1 - tau_j).
struct AlohaRates {
  std::vector<double> gammas;
};

AlohaRates aloha_rates(const AlohaConfig& cfg);

/// Node age 1/2 + 1/gamma_i (geometric inter-update times); unbounded for a
/// starved node.
AgeReport aloha_age(const AlohaConfig& cfg);

/// Residuals of the first-order conditions of the network age,
///   (1 - tau_i) / (p_i tau_i^2) - sum_j (1 - tau_j) / (p_j tau_j).
/// Requires every tau_i in (0, 1).
struct FocResidual {
  std::vector<double> residuals;
  double max_norm = 0.0;
};

FocResidual foc_residual(const AlohaConfig& cfg);

/// Lower bound on the network age from 1 - x <= exp(-x).
struct ApproxDiagnostics {
  double c = 0.0;        // sum_j (1/p_j)(1/tau_j - 1)
  double c_prime = 0.0;  // sum_j 1/(p_j tau_j)
  double age_lower_bound = 0.0;
};

ApproxDiagnostics aloha_age_lower_bound(const AlohaConfig& cfg);

}  // namespace aoi

#endif  // AOI_ALOHA_ANALYTIC_HPP
