#include "aoi/aloha_analytic.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

namespace aoi {
namespace {

// Above this many nodes the collision-free product is accumulated in log
// space to avoid underflow.
constexpr std::size_t kLogSpaceThreshold = 64;

void require_interior(const AlohaConfig& cfg, const char* what) {
  for (std::size_t i = 0; i < cfg.attempts.size(); ++i) {
    const double tau = cfg.attempts[i];
    if (!(tau > 0.0 && tau < 1.0)) {
      throw Error(ErrorCode::kInvalidAttempt,
                  fmt::format("{} needs tau in (0, 1), tau[{}] = {}", what,
                              i + 1, tau));
    }
  }
}

std::vector<double> rates_direct(const AlohaConfig& cfg) {
  const std::size_t m = cfg.attempts.size();
  std::vector<double> g(m);
  for (std::size_t i = 0; i < m; ++i) {
    double v = cfg.attempts[i] * cfg.profile[i];
    for (std::size_t j = 0; j < m; ++j) {
      if (j != i) v *= 1.0 - cfg.attempts[j];
    }
    g[i] = v;
  }
  return g;
}

std::vector<double> rates_log_space(const AlohaConfig& cfg) {
  const std::size_t m = cfg.attempts.size();
  // Nodes with tau = 1 make log(1 - tau) = -inf; count them separately.
  std::size_t always_on = 0;
  double log_silent = 0.0;
  for (double tau : cfg.attempts) {
    if (tau == 1.0) {
      ++always_on;
    } else {
      log_silent += std::log1p(-tau);
    }
  }
  std::vector<double> g(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const double tau = cfg.attempts[i];
    if (tau == 0.0) continue;
    const bool self_on = tau == 1.0;
    if (always_on - (self_on ? 1 : 0) > 0) continue;
    const double log_others = self_on ? log_silent : log_silent - std::log1p(-tau);
    g[i] = std::exp(std::log(tau) + std::log(cfg.profile[i]) + log_others);
  }
  return g;
}

}  // namespace

AlohaRates aloha_rates(const AlohaConfig& cfg) {
  if (cfg.attempts.size() > kLogSpaceThreshold) {
    return {rates_log_space(cfg)};
  }
  return {rates_direct(cfg)};
}

AgeReport aloha_age(const AlohaConfig& cfg) {
  const AlohaRates rates = aloha_rates(cfg);
  std::vector<Age> ages;
  ages.reserve(rates.gammas.size());
  for (double g : rates.gammas) {
    ages.push_back(g > 0.0 ? Age::finite(0.5 + 1.0 / g) : Age::unbounded());
  }
  return network_age(ages);
}

FocResidual foc_residual(const AlohaConfig& cfg) {
  require_interior(cfg, "first-order residual");
  const std::size_t m = cfg.attempts.size();
  double rhs = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double tau = cfg.attempts[j];
    rhs += (1.0 - tau) / (cfg.profile[j] * tau);
  }
  FocResidual out;
  out.residuals.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double tau = cfg.attempts[i];
    out.residuals[i] = (1.0 - tau) / (cfg.profile[i] * tau * tau) - rhs;
    out.max_norm = std::max(out.max_norm, std::abs(out.residuals[i]));
  }
  return out;
}

ApproxDiagnostics aloha_age_lower_bound(const AlohaConfig& cfg) {
  require_interior(cfg, "age lower bound");
  ApproxDiagnostics out;
  double tau_sum = 0.0;
  for (std::size_t j = 0; j < cfg.attempts.size(); ++j) {
    const double tau = cfg.attempts[j];
    const double p = cfg.profile[j];
    out.c += (1.0 / tau - 1.0) / p;
    out.c_prime += 1.0 / (p * tau);
    tau_sum += tau;
  }
  const double m = static_cast<double>(cfg.attempts.size());
  out.age_lower_bound = 0.5 + std::exp(tau_sum) / m * out.c;
  return out;
}

}  // namespace aoi
