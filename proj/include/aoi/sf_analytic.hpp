// Closed-form analysis of scheduled access with feedback (SF).
//
// Between two updates of node i, node i spends N_i turns (the first N_i - 1
// of them full length S with no success, the last ending after Y_i slots on
// a success) and every other node j takes N_i turns of X_jk slots each:
//
//   Z_i = (N_i - 1) S + sum_{j != i} sum_{k=1..N_i} X_jk + Y_i.

#ifndef AOI_SF_ANALYTIC_HPP
#define AOI_SF_ANALYTIC_HPP

#include <cstddef>
#include <vector>

#include "aoi/core.hpp"

namespace aoi {

/// Turn-level distributions for one node with decode probability p and turn
/// cap S. Index k of each vector holds the mass at value k + 1.
struct TurnPmfs {
  /// P[N = n], truncated once the remaining mass drops below the requested
  /// tolerance; the dropped mass is turns_tail.
  std::vector<double> turns;
  double turns_tail = 0.0;
  /// P[X = a], slots used by this node in one of its turns, a in 1..S.
  std::vector<double> other_turn;
  /// P[Y = x], slots in the turn that ends in an update, x in 1..S.
  std::vector<double> updating_turn;
  /// Probability of at least one success in a turn: 1 - (1 - p)^S.
  double r = 0.0;
};

TurnPmfs turn_pmfs(double p, int turn_cap, double tail_tol = 1e-15,
                   std::size_t max_turns = std::size_t{1} << 22);

/// The pieces of the closed-form second moment, grouped as in the
/// derivation so each can be checked on its own.
struct SecondMomentTerms {
  double own;              // (2 - p_i) / p_i^2
  double squared_ratio;    // sum_j 2 eta_ji^2 / p_j^2
  double turn_cap_excess;  // sum_j 2 S (eta_ji - 1) / (r_i p_j)
  double linear;           // sum_j ((2-p_i)/(p_i p_j) + 2(1-r_j)/p_j^2) eta_ji
  double cross;            // (2 - r_i) sum_j sum_{j' != j} eta_ji eta_j'i / (p_j p_j')

  double total() const {
    return own + squared_ratio + turn_cap_excess + linear + cross;
  }
};

SecondMomentTerms sf_second_moment_terms(const SfConfig& cfg,
                                         std::size_t node);

/// Closed-form E[Z_i] and E[Z_i^2].
InterUpdateMoments sf_moments(const SfConfig& cfg, std::size_t node);

struct OracleMoments {
  InterUpdateMoments moments;
  /// Upper bounds on the moment mass lost to truncating N_i.
  double mean_error_bound = 0.0;
  double second_moment_error_bound = 0.0;
  /// Number of values of N_i summed.
  std::size_t turns_summed = 0;
};

/// Brute-force moments: sums P[N_i = n] E[Z_i | N_i = n] over n, where the
/// conditional moments come from the PMFs of X_j and Y_i. Independent of
/// the closed-form algebra in sf_moments.
OracleMoments sf_moments_oracle(const SfConfig& cfg, std::size_t node,
                                double tail_tol = 1e-14,
                                std::size_t max_turns = 100'000'000);

struct SfAgeBreakdown {
  std::vector<InterUpdateMoments> moments;
  /// eta[j][i] = r_j / r_i.
  std::vector<std::vector<double>> eta;
  AgeReport ages;
};

SfAgeBreakdown sf_age(const SfConfig& cfg);

/// M / p: the mean inter-update time of a homogeneous network, for any S.
double sf_homogeneous_mean(double p, int nodes);

}  // namespace aoi

#endif  // AOI_SF_ANALYTIC_HPP
