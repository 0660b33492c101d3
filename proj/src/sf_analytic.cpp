#include "aoi/sf_analytic.hpp"

#include <cmath>

#include <fmt/core.h>

namespace aoi {
namespace {

void check_probability(double p) {
  if (!(p > 0.0)) {
    throw Error(ErrorCode::kProbabilityNotPositive,
                fmt::format("p = {} must be > 0", p));
  }
  if (p > 1.0) {
    throw Error(ErrorCode::kProbabilityAboveOne,
                fmt::format("p = {} must be <= 1", p));
  }
}

void check_turn_cap(int turn_cap) {
  if (turn_cap < 1) {
    throw Error(ErrorCode::kInvalidTurnCap,
                fmt::format("turn cap S = {} must be >= 1", turn_cap));
  }
}

double success_within_turn(double p, int turn_cap) {
  return 1.0 - std::pow(1.0 - p, turn_cap);
}

std::vector<double> success_within_turn(const SfConfig& cfg) {
  std::vector<double> r(cfg.profile.size());
  for (std::size_t j = 0; j < r.size(); ++j) {
    r[j] = success_within_turn(cfg.profile[j], cfg.turn_cap);
  }
  return r;
}

struct Moments2 {
  double first = 0.0;
  double second = 0.0;
};

// Moments of a PMF over the values 1..size.
Moments2 moments_of(const std::vector<double>& pmf) {
  Moments2 m;
  for (std::size_t k = 0; k < pmf.size(); ++k) {
    const double v = static_cast<double>(k + 1);
    m.first += v * pmf[k];
    m.second += v * v * pmf[k];
  }
  return m;
}

}  // namespace

TurnPmfs turn_pmfs(double p, int turn_cap, double tail_tol,
                   std::size_t max_turns) {
  check_probability(p);
  check_turn_cap(turn_cap);
  if (!(tail_tol > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "tail tolerance must be > 0");
  }
  const double q = 1.0 - p;
  TurnPmfs out;
  out.r = success_within_turn(p, turn_cap);

  const auto cap = static_cast<std::size_t>(turn_cap);
  out.other_turn.resize(cap);
  out.updating_turn.resize(cap);
  double fail_run = 1.0;  // (1 - p)^(a - 1)
  for (std::size_t a = 1; a <= cap; ++a) {
    out.other_turn[a - 1] = a < cap ? fail_run * p : fail_run;
    out.updating_turn[a - 1] = fail_run * p / out.r;
    fail_run *= q;
  }

  const double miss = 1.0 - out.r;
  double tail = 1.0;  // P[N > n - 1]
  while (tail >= tail_tol && out.turns.size() < max_turns) {
    out.turns.push_back(tail * out.r);
    tail *= miss;
  }
  out.turns_tail = tail;
  return out;
}

SecondMomentTerms sf_second_moment_terms(const SfConfig& cfg,
                                         std::size_t i) {
  cfg.profile.check_node(i);
  const auto& p = cfg.profile;
  const std::size_t m = p.size();
  const double s = cfg.turn_cap;
  const std::vector<double> r = success_within_turn(cfg);
  const double pi = p[i];
  const double ri = r[i];

  SecondMomentTerms t{};
  t.own = (2.0 - pi) / (pi * pi);
  double cross_sum = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    if (j == i) continue;
    const double pj = p[j];
    const double eta_ji = r[j] / ri;
    t.squared_ratio += 2.0 * eta_ji * eta_ji / (pj * pj);
    t.turn_cap_excess += 2.0 * s * (eta_ji - 1.0) / (ri * pj);
    t.linear += ((2.0 - pi) / (pi * pj) + 2.0 * (1.0 - r[j]) / (pj * pj)) *
                eta_ji;
    for (std::size_t k = 0; k < m; ++k) {
      if (k == i || k == j) continue;
      cross_sum += eta_ji * (r[k] / ri) / (pj * p[k]);
    }
  }
  t.cross = (2.0 - ri) * cross_sum;
  return t;
}

InterUpdateMoments sf_moments(const SfConfig& cfg, std::size_t i) {
  cfg.profile.check_node(i);
  const std::vector<double> r = success_within_turn(cfg);
  double mean = 0.0;
  for (std::size_t j = 0; j < r.size(); ++j) {
    mean += (r[j] / r[i]) / cfg.profile[j];
  }
  return {mean, sf_second_moment_terms(cfg, i).total()};
}

OracleMoments sf_moments_oracle(const SfConfig& cfg, std::size_t i,
                                double tail_tol, std::size_t max_turns) {
  cfg.profile.check_node(i);
  if (!(tail_tol > 0.0 && tail_tol <= 1e-6)) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("tail tolerance {} outside (0, 1e-6]", tail_tol));
  }
  const auto& p = cfg.profile;
  const std::size_t m = p.size();
  const double s = cfg.turn_cap;

  // Moments of each other node's turn length, and of the residual turn.
  double other_mean = 0.0;  // sum_j E[X_j]
  double other_var = 0.0;   // sum_j Var[X_j]
  for (std::size_t j = 0; j < m; ++j) {
    if (j == i) continue;
    const Moments2 x = moments_of(turn_pmfs(p[j], cfg.turn_cap).other_turn);
    other_mean += x.first;
    other_var += x.second - x.first * x.first;
  }
  const TurnPmfs own = turn_pmfs(p[i], cfg.turn_cap);
  const Moments2 y = moments_of(own.updating_turn);

  // E[Z | N = n] and E[Z^2 | N = n], with T_j = sum_{k<=n} X_jk and
  // W = (n - 1) S + Y independent of every T_j.
  auto conditional = [&](double n) {
    const double w1 = (n - 1.0) * s + y.first;
    const double w2 = (n - 1.0) * (n - 1.0) * s * s +
                      2.0 * (n - 1.0) * s * y.first + y.second;
    const double t1 = n * other_mean;
    // E[(sum_j T_j)^2] = sum_j Var[T_j] + (sum_j E[T_j])^2.
    const double t2 = n * other_var + t1 * t1;
    return Moments2{w1 + t1, w2 + 2.0 * w1 * t1 + t2};
  };

  const double r = own.r;
  const double miss = 1.0 - r;
  OracleMoments out;
  double tail = 1.0;  // P[N > n - 1]
  std::size_t n = 0;
  while (tail >= tail_tol) {
    if (n >= max_turns) {
      throw Error(ErrorCode::kNoConvergence,
                  fmt::format("turn distribution tail {} still above {} after "
                              "{} terms",
                              tail, tail_tol, n));
    }
    ++n;
    const double mass = tail * r;
    const Moments2 c = conditional(static_cast<double>(n));
    out.moments.mean += mass * c.first;
    out.moments.second_moment += mass * c.second;
    tail *= miss;
  }
  out.turns_summed = n;

  // Z <= N M S, and N beyond n is n plus a fresh geometric(r) variable.
  const double k = static_cast<double>(n);
  const double tail_n1 = tail * (k + 1.0 / r);
  const double tail_n2 = tail * (k * k + 2.0 * k / r + (2.0 - r) / (r * r));
  const double span = static_cast<double>(m) * s;
  out.mean_error_bound = span * tail_n1;
  out.second_moment_error_bound = span * span * tail_n2;
  return out;
}

SfAgeBreakdown sf_age(const SfConfig& cfg) {
  const std::size_t m = cfg.profile.size();
  const std::vector<double> r = success_within_turn(cfg);
  SfAgeBreakdown out;
  out.eta.assign(m, std::vector<double>(m, 1.0));
  std::vector<double> ages(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (j != i) out.eta[j][i] = r[j] / r[i];
    }
    out.moments.push_back(sf_moments(cfg, i));
    ages[i] = age_from_moments(out.moments.back());
  }
  out.ages = network_age(ages);
  return out;
}

double sf_homogeneous_mean(double p, int nodes) {
  check_probability(p);
  if (nodes < 1) {
    throw Error(ErrorCode::kInvalidArgument, "node count must be >= 1");
  }
  return static_cast<double>(nodes) / p;
}

}  // namespace aoi
