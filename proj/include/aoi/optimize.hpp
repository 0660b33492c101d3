// Parameter optimization for both access schemes.

#ifndef AOI_OPTIMIZE_HPP
#define AOI_OPTIMIZE_HPP

#include <optional>
#include <string_view>
#include <vector>

#include "aoi/core.hpp"
#include "aoi/sf_analytic.hpp"

namespace aoi {

struct SweepResult {
  /// ages[k] is the network age at turn cap S = k + 1.
  std::vector<double> ages;
  /// Full breakdown per S, parallel to ages.
  std::vector<SfAgeBreakdown> breakdowns;
  /// Smallest minimizing S.
  int best_s = 1;
  /// True iff the age strictly decreases at every step of the sweep.
  bool monotone_decreasing = false;
};

SweepResult sf_sweep(const ChannelProfile& profile, int s_max);

enum class TauMethod { kExactTwo, kApprox, kNumeric };

std::string_view to_string(TauMethod method);

struct TauSolution {
  std::vector<double> taus;
  TauMethod method = TauMethod::kNumeric;
  double foc_max_residual = 0.0;
  double achieved_age = 0.0;
  int iterations = 0;
};

/// Thrown by tau_numeric when it fails to converge; carries the last
/// iterate.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, TauSolution last)
      : Error(ErrorCode::kNoConvergence, what), last_(std::move(last)) {}

  const TauSolution& last_iterate() const { return last_; }

 private:
  TauSolution last_;
};

/// Exact age-minimizing attempt probabilities for two nodes:
///   tau_i = 1 / (1 + (p_i / p_j)^(1/3)).
TauSolution tau_exact_two(double p1, double p2);

/// Large-network approximation tau_i = p_i^(-1/2) / sum_j p_j^(-1/2).
TauSolution tau_approx(const ChannelProfile& profile);

struct TauSolverOptions {
  double tol = 1e-10;
  int max_iter = 10'000;
  /// Starting point; tau_approx when empty.
  std::optional<std::vector<double>> initial;
};

/// Damped fixed-point iteration on the first-order conditions. Each sweep
/// holds K = sum_j (1 - tau_j) / (p_j tau_j) fixed and solves
/// K p_i tau^2 + tau - 1 = 0 for every tau_i.
TauSolution tau_numeric(const ChannelProfile& profile,
                        const TauSolverOptions& options = {});

}  // namespace aoi

#endif  // AOI_OPTIMIZE_HPP
