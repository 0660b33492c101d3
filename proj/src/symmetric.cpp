#include "aoi/symmetric.hpp"

#include <cmath>

#include <fmt/core.h>

namespace aoi {
namespace {

constexpr double kRootResidual = 1e-10;
constexpr int kMaxBisections = 400;
// Small products cannot underflow and are computed directly.
constexpr std::size_t kDirectProductNodes = 64;

void require_multiple_nodes(const ChannelProfile& profile) {
  if (profile.size() < 2) {
    throw Error(ErrorCode::kSingleNode,
                "symmetric ALOHA needs at least two nodes; a single node "
                "should transmit in every slot (tau = 1)");
  }
}

// sum_j beta / (beta + p_j) - 1, strictly increasing in beta.
double root_function(const ChannelProfile& profile, double beta) {
  double sum = 0.0;
  for (double p : profile.probs()) sum += beta / (beta + p);
  return sum - 1.0;
}

}  // namespace

SymmetricSfAge symmetric_sf_age(const ChannelProfile& profile) {
  double inv = 0.0;
  double inv_sq = 0.0;
  for (double p : profile.probs()) {
    inv += 1.0 / p;
    inv_sq += 1.0 / (p * p);
  }
  SymmetricSfAge out;
  out.r = inv_sq / inv;
  out.age = 0.5 * (1.0 + inv + out.r);
  return out;
}

double beta_star(const ChannelProfile& profile, double tol) {
  require_multiple_nodes(profile);
  if (!(tol > 0.0 && tol <= 1e-8)) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("bisection tolerance {} outside (0, 1e-8]", tol));
  }
  const double denom = static_cast<double>(profile.size() - 1);
  double lo = profile.p_min() / denom;
  double hi = profile.p_max() / denom;
  if (lo == hi) return lo;

  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < kMaxBisections; ++it) {
    mid = 0.5 * (lo + hi);
    const double f = root_function(profile, mid);
    if ((hi - lo) / mid < tol && std::abs(f) <= kRootResidual) break;
    if (mid <= lo || mid >= hi) break;  // bracket exhausted
    if (f < 0.0) {
      lo = mid;
    } else if (f > 0.0) {
      hi = mid;
    } else {
      break;
    }
  }
  return mid;
}

double symmetric_gamma(const ChannelProfile& profile, double beta) {
  if (profile.size() <= kDirectProductNodes) {
    double gamma = beta;
    for (double p : profile.probs()) gamma *= p / (beta + p);
    return gamma;
  }
  double log_gamma = std::log(beta);
  for (double p : profile.probs()) log_gamma -= std::log1p(beta / p);
  return std::exp(log_gamma);
}

SymmetricAloha symmetric_aloha(const ChannelProfile& profile) {
  SymmetricAloha out;
  out.beta_star = beta_star(profile);
  out.gamma_star = symmetric_gamma(profile, out.beta_star);
  out.taus.reserve(profile.size());
  for (double p : profile.probs()) {
    out.taus.push_back(out.beta_star / (out.beta_star + p));
  }
  out.age = 0.5 + 1.0 / out.gamma_star;
  return out;
}

RatioBounds ratio_bounds(double p_min, double p_max, int nodes) {
  if (!(p_min > 0.0 && p_min <= p_max && p_max <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("need 0 < p_min <= p_max <= 1, got ({}, {})",
                            p_min, p_max));
  }
  if (nodes < 2) {
    throw Error(ErrorCode::kSingleNode, "ratio bounds need M >= 2");
  }
  const double rho = p_max / p_min;
  const double rho2 = rho * rho;
  const double k = static_cast<double>(nodes - 1);
  RatioBounds out;
  out.l_m = (1.0 + 2.0 * rho2) / k + rho2 / (k * k);
  const double center = std::log(2.0) + 1.0;  // ln(2e)
  out.lower = center - out.l_m;
  out.upper = center + out.l_m;
  return out;
}

SymmetricReport symmetric_compare(const ChannelProfile& profile) {
  require_multiple_nodes(profile);
  const SymmetricSfAge sf = symmetric_sf_age(profile);
  SymmetricAloha aloha = symmetric_aloha(profile);

  SymmetricReport out;
  out.age_sf = sf.age;
  out.r = sf.r;
  out.age_aloha = aloha.age;
  out.beta_star = aloha.beta_star;
  out.gamma_star = aloha.gamma_star;
  out.taus = std::move(aloha.taus);
  out.rho = profile.rho();
  out.l = std::log(out.age_aloha / out.age_sf);
  out.bounds = ratio_bounds(profile.p_min(), profile.p_max(),
                              static_cast<int>(profile.size()));
  if (!(out.l >= out.bounds.lower && out.l <= out.bounds.upper)) {
    throw Error(ErrorCode::kBoundViolation,
                fmt::format("L = {} outside [{}, {}]", out.l, out.bounds.lower,
                            out.bounds.upper));
  }
  return out;
}

}  // namespace aoi
