#include "aoi/optimize.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

#include "aoi/aloha_analytic.hpp"

namespace aoi {
namespace {

constexpr double kTauFloor = 1e-9;
constexpr double kTauCeil = 1.0 - 1e-9;

void finish(TauSolution& sol, const ChannelProfile& profile) {
  const AlohaConfig cfg(profile, sol.taus);
  sol.foc_max_residual = foc_residual(cfg).max_norm;
  sol.achieved_age = aloha_age(cfg).network.slots();
}

double residual_norm(const ChannelProfile& profile,
                     const std::vector<double>& taus) {
  return foc_residual(AlohaConfig(profile, taus)).max_norm;
}

}  // namespace

std::string_view to_string(TauMethod method) {
  switch (method) {
    case TauMethod::kExactTwo: return "exact2";
    case TauMethod::kApprox: return "approx";
    case TauMethod::kNumeric: return "numeric";
  }
  return "unknown";
}

SweepResult sf_sweep(const ChannelProfile& profile, int s_max) {
  if (s_max < 1) {
    throw Error(ErrorCode::kInvalidTurnCap,
                fmt::format("S_max = {} must be >= 1", s_max));
  }
  SweepResult out;
  out.ages.reserve(static_cast<std::size_t>(s_max));
  out.breakdowns.reserve(static_cast<std::size_t>(s_max));
  for (int s = 1; s <= s_max; ++s) {
    out.breakdowns.push_back(sf_age(SfConfig(profile, s)));
    out.ages.push_back(out.breakdowns.back().ages.network.slots());
  }
  const auto best = std::min_element(out.ages.begin(), out.ages.end());
  out.best_s = static_cast<int>(best - out.ages.begin()) + 1;
  out.monotone_decreasing = s_max > 1;
  for (std::size_t k = 1; k < out.ages.size(); ++k) {
    if (!(out.ages[k] < out.ages[k - 1])) {
      out.monotone_decreasing = false;
      break;
    }
  }
  return out;
}

TauSolution tau_exact_two(double p1, double p2) {
  const ChannelProfile profile({p1, p2});
  TauSolution sol;
  sol.method = TauMethod::kExactTwo;
  sol.taus = {1.0 / (1.0 + std::cbrt(p1 / p2)),
              1.0 / (1.0 + std::cbrt(p2 / p1))};
  finish(sol, profile);
  return sol;
}

TauSolution tau_approx(const ChannelProfile& profile) {
  if (profile.size() < 2) {
    throw Error(ErrorCode::kSingleNode,
                "attempt-probability approximation needs at least two nodes; "
                "a single node should always transmit");
  }
  TauSolution sol;
  sol.method = TauMethod::kApprox;
  sol.taus.resize(profile.size());
  double total = 0.0;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    sol.taus[i] = 1.0 / std::sqrt(profile[i]);
    total += sol.taus[i];
  }
  for (double& t : sol.taus) t /= total;
  finish(sol, profile);
  return sol;
}

TauSolution tau_numeric(const ChannelProfile& profile,
                        const TauSolverOptions& options) {
  if (profile.size() < 2) {
    throw Error(ErrorCode::kSingleNode,
                "attempt-probability solver needs at least two nodes");
  }
  if (!(options.tol > 0.0 && options.tol <= 1e-6)) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("solver tolerance {} outside (0, 1e-6]",
                            options.tol));
  }
  if (options.max_iter < 1) {
    throw Error(ErrorCode::kInvalidArgument, "max_iter must be >= 1");
  }
  const std::size_t m = profile.size();

  std::vector<double> taus;
  if (options.initial) {
    taus = *options.initial;
    if (taus.size() != m) {
      throw Error(ErrorCode::kLengthMismatch,
                  "initial attempt vector does not match profile");
    }
  } else {
    taus = tau_approx(profile).taus;
  }
  for (double& t : taus) t = std::clamp(t, kTauFloor, kTauCeil);

  double residual = residual_norm(profile, taus);
  std::vector<double> next(m);
  int iter = 0;
  while (residual > options.tol && iter < options.max_iter) {
    ++iter;
    double k = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      k += (1.0 - taus[j]) / (profile[j] * taus[j]);
    }
    for (std::size_t i = 0; i < m; ++i) {
      const double a = k * profile[i];
      // Positive root of a tau^2 + tau - 1 = 0, written to avoid
      // cancellation when a is small.
      next[i] = std::clamp(2.0 / (1.0 + std::sqrt(1.0 + 4.0 * a)), kTauFloor,
                           kTauCeil);
    }
    double next_residual = residual_norm(profile, next);
    if (next_residual > residual) {
      for (std::size_t i = 0; i < m; ++i) {
        next[i] = taus[i] + 0.5 * (next[i] - taus[i]);
      }
      next_residual = residual_norm(profile, next);
    }
    taus.swap(next);
    residual = next_residual;
  }

  TauSolution sol;
  sol.method = TauMethod::kNumeric;
  sol.taus = std::move(taus);
  sol.iterations = iter;
  finish(sol, profile);
  if (sol.foc_max_residual > options.tol) {
    throw ConvergenceError(
        fmt::format("attempt-probability solver stopped after {} iterations "
                    "with residual {}",
                    iter, sol.foc_max_residual),
        sol);
  }
  return sol;
}

}  // namespace aoi
