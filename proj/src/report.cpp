#include "aoi/report.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/core.h>

#include "aoi/aloha_analytic.hpp"
#include "aoi/experiments.hpp"
#include "aoi/sf_analytic.hpp"

namespace aoi {
namespace {

void line(std::ostream& out, const std::string& s) { out << s << '\n'; }

void preamble(std::ostream& out, std::string_view command) {
  line(out, fmt::format("# tool: {}", kToolVersion));
  line(out, fmt::format("# command: {}", command));
}

std::vector<Age> analytic_ages(const SimConfig& cfg) {
  if (const auto* sf = std::get_if<SfConfig>(&cfg.protocol)) {
    return sf_age(*sf).ages.per_node;
  }
  return aloha_age(std::get<AlohaConfig>(cfg.protocol)).per_node;
}

}  // namespace

void write_sf_analysis(std::ostream& out, const SfConfig& cfg) {
  preamble(out, "analyze-sf");
  line(out, fmt::format("# S: {}", cfg.turn_cap));
  const SfAgeBreakdown b = sf_age(cfg);
  line(out, "node,p,r,mean_z,second_moment_z,age");
  for (std::size_t i = 0; i < cfg.profile.size(); ++i) {
    const double p = cfg.profile[i];
    line(out, fmt::format("{},{},{},{},{},{}", i + 1, format_double(p),
                          format_double(1.0 - std::pow(1.0 - p, cfg.turn_cap)),
                          format_double(b.moments[i].mean),
                          format_double(b.moments[i].second_moment),
                          format_age(b.ages.per_node[i])));
  }
  line(out, fmt::format("# network_age={}", format_age(b.ages.network)));
}

void write_aloha_analysis(std::ostream& out, const AlohaConfig& cfg) {
  preamble(out, "analyze-aloha");
  const AlohaRates rates = aloha_rates(cfg);
  const AgeReport ages = aloha_age(cfg);
  line(out, "node,p,tau,gamma,age");
  for (std::size_t i = 0; i < cfg.profile.size(); ++i) {
    line(out, fmt::format("{},{},{},{},{}", i + 1,
                          format_double(cfg.profile[i]),
                          format_double(cfg.attempts[i]),
                          format_double(rates.gammas[i]),
                          format_age(ages.per_node[i])));
  }
  line(out, fmt::format("# network_age={}", format_age(ages.network)));
  const bool interior =
      std::all_of(cfg.attempts.begin(), cfg.attempts.end(),
                  [](double t) { return t > 0.0 && t < 1.0; });
  if (interior) {
    const ApproxDiagnostics d = aloha_age_lower_bound(cfg);
    line(out, fmt::format("# foc_max_residual={}",
                          format_double(foc_residual(cfg).max_norm)));
    line(out, fmt::format("# C={}", format_double(d.c)));
    line(out, fmt::format("# C_prime={}", format_double(d.c_prime)));
    line(out, fmt::format("# age_lower_bound={}",
                          format_double(d.age_lower_bound)));
  }
}

void write_tau_optimization(std::ostream& out, std::ostream& log,
                            const ChannelProfile& profile,
                            const TauSolverOptions& options, bool multistart) {
  preamble(out, "optimize-tau");
  const std::size_t m = profile.size();
  const TauSolution approx = tau_approx(profile);
  const TauSolution numeric = tau_numeric(profile, options);
  std::vector<TauSolution> extra;
  if (m == 2) extra.push_back(tau_exact_two(profile[0], profile[1]));

  std::string header = "node,p,tau_approx,tau_numeric";
  if (m == 2) header += ",tau_exact2";
  line(out, header);
  for (std::size_t i = 0; i < m; ++i) {
    std::string row = fmt::format("{},{},{},{}", i + 1,
                                  format_double(profile[i]),
                                  format_double(approx.taus[i]),
                                  format_double(numeric.taus[i]));
    for (const auto& s : extra) row += ',' + format_double(s.taus[i]);
    line(out, row);
  }
  line(out, fmt::format("# age_approx={}", format_double(approx.achieved_age)));
  line(out,
       fmt::format("# age_numeric={}", format_double(numeric.achieved_age)));
  for (const auto& s : extra) {
    line(out, fmt::format("# age_{}={}", to_string(s.method),
                          format_double(s.achieved_age)));
  }
  line(out, fmt::format("# foc_max_residual={}",
                        format_double(numeric.foc_max_residual)));
  line(out, fmt::format("# iterations={}", numeric.iterations));

  if (multistart) {
    TauSolverOptions uniform = options;
    uniform.initial = std::vector<double>(m, 1.0 / static_cast<double>(m));
    const TauSolution alt = tau_numeric(profile, uniform);
    double gap = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      gap = std::max(gap, std::abs(alt.taus[i] - numeric.taus[i]));
    }
    line(out, fmt::format("# multistart_uniform_age={}",
                          format_double(alt.achieved_age)));
    line(out, fmt::format("# multistart_max_tau_gap={}", format_double(gap)));
    if (gap > 1e-6) {
      log << fmt::format(
          "optimize-tau: starts from the approximation and from 1/M reach "
          "different stationary points (max tau gap {}, ages {} vs {})\n",
          format_double(gap), format_double(numeric.achieved_age),
          format_double(alt.achieved_age));
    }
  }
}

void write_symmetric(std::ostream& out, const ChannelProfile& profile) {
  preamble(out, "symmetric");
  const SymmetricReport r = symmetric_compare(profile);
  line(out, "node,p,tau");
  for (std::size_t i = 0; i < profile.size(); ++i) {
    line(out, fmt::format("{},{},{}", i + 1, format_double(profile[i]),
                          format_double(r.taus[i])));
  }
  line(out, fmt::format("# age_sf={}", format_double(r.age_sf)));
  line(out, fmt::format("# age_aloha={}", format_double(r.age_aloha)));
  line(out, fmt::format("# R={}", format_double(r.r)));
  line(out, fmt::format("# beta_star={}", format_double(r.beta_star)));
  line(out, fmt::format("# gamma_star={}", format_double(r.gamma_star)));
  line(out, fmt::format("# rho={}", format_double(r.rho)));
  line(out, fmt::format("# L={}", format_double(r.l)));
  line(out, fmt::format("# L_M={}", format_double(r.bounds.l_m)));
  line(out, fmt::format("# L_bounds={},{}", format_double(r.bounds.lower),
                        format_double(r.bounds.upper)));
}

SimResult write_simulation(std::ostream& out, const SimConfig& cfg,
                           int replications) {
  preamble(out, "simulate");
  const bool sf = std::holds_alternative<SfConfig>(cfg.protocol);
  line(out, fmt::format("# protocol: {}", sf ? "sf" : "aloha"));
  line(out, fmt::format("# horizon: {}", cfg.horizon));
  line(out, fmt::format("# seed: {}", cfg.seed));
  line(out, fmt::format("# replications: {}", replications));
  const std::vector<Age> analytic = analytic_ages(cfg);

  SimResult result;
  if (replications <= 1) {
    result = simulate(cfg);
    line(out,
         "node,updates,mean_z,mean_z_se,second_moment_z,second_moment_z_se,"
         "age,age_se,analytic_age");
    for (std::size_t i = 0; i < result.nodes.size(); ++i) {
      const NodeSimStats& s = result.nodes[i];
      line(out, fmt::format("{},{},{},{},{},{},{},{},{}", i + 1, s.updates,
                            format_double(s.mean_z.value),
                            format_double(s.mean_z.se),
                            format_double(s.second_moment_z.value),
                            format_double(s.second_moment_z.se),
                            format_age(s.age), format_double(s.age_se),
                            format_age(analytic[i])));
    }
    return result;
  }

  const ReplicationSummary rep = replicate(cfg, replications, cfg.seed);
  line(out,
       "node,mean_z,mean_z_se,second_moment_z,second_moment_z_se,age,age_se,"
       "analytic_age");
  for (std::size_t i = 0; i < rep.nodes.size(); ++i) {
    const auto& n = rep.nodes[i];
    line(out, fmt::format("{},{},{},{},{},{},{},{}", i + 1,
                          format_double(n.mean_z.value),
                          format_double(n.mean_z.se),
                          format_double(n.second_moment_z.value),
                          format_double(n.second_moment_z.se),
                          format_double(n.age.value), format_double(n.age.se),
                          format_age(analytic[i])));
  }
  return result;
}

}  // namespace aoi
