// Symmetric updating: every node sees the same age.
//
// SF is symmetric in the limit of an unbounded turn cap. ALOHA is made
// symmetric by choosing tau_i = beta / (beta + p_i), which gives every node
// the same per-slot success probability
//   gamma(beta) = beta prod_j p_j / (beta + p_j).

#ifndef AOI_SYMMETRIC_HPP
#define AOI_SYMMETRIC_HPP

#include <vector>

#include "aoi/core.hpp"

namespace aoi {

struct SymmetricSfAge {
  double age = 0.0;
  /// R(p) = sum_j p_j^-2 / sum_j p_j^-1.
  double r = 0.0;
};

/// Age of every node under SF with S -> infinity:
///   (1 + sum_j 1/p_j + R(p)) / 2.
SymmetricSfAge symmetric_sf_age(const ChannelProfile& profile);

/// The maximizer of gamma(beta): the root of sum_j beta / (beta + p_j) = 1,
/// found by bisection on [p_min / (M-1), p_max / (M-1)].
double beta_star(const ChannelProfile& profile, double tol = 1e-14);

/// gamma(beta) computed in log space.
double symmetric_gamma(const ChannelProfile& profile, double beta);

struct SymmetricAloha {
  double beta_star = 0.0;
  double gamma_star = 0.0;
  std::vector<double> taus;
  double age = 0.0;
};

SymmetricAloha symmetric_aloha(const ChannelProfile& profile);

struct RatioBounds {
  double lower = 0.0;
  double upper = 0.0;
  /// (1 + 2 rho^2) / (M - 1) + rho^2 / (M - 1)^2.
  double l_m = 0.0;
};

/// Bounds ln(2e) -/+ L_M on L = ln(age_aloha / age_sf).
RatioBounds ratio_bounds(double p_min, double p_max, int nodes);

struct SymmetricReport {
  double age_sf = 0.0;
  double age_aloha = 0.0;
  double beta_star = 0.0;
  double gamma_star = 0.0;
  std::vector<double> taus;
  double l = 0.0;
  RatioBounds bounds;
  double r = 0.0;
  double rho = 0.0;
};

/// Throws kBoundViolation if L falls outside the bounds, which can only
/// happen through a defect in this code.
SymmetricReport symmetric_compare(const ChannelProfile& profile);

}  // namespace aoi

#endif  // AOI_SYMMETRIC_HPP
