#include "aoi/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>

#include <fmt/core.h>

#include "aoi/aloha_analytic.hpp"
#include "aoi/parallel.hpp"
#include "aoi/rng.hpp"

namespace aoi {
namespace {

using nlohmann::json;

[[noreturn]] void invalid(const std::string& what) {
  throw Error(ErrorCode::kInvalidArgument, what);
}

void reject_unknown_keys(const json& doc, std::set<std::string> allowed) {
  allowed.insert("kind");
  allowed.insert("output");
  for (const auto& [key, value] : doc.items()) {
    if (!allowed.contains(key)) {
      invalid(fmt::format("unknown experiment field '{}'", key));
    }
  }
}

template <typename T>
void read_field(const json& doc, const char* key, T& dst) {
  if (!doc.contains(key)) return;
  try {
    dst = doc.at(key).get<T>();
  } catch (const json::exception& e) {
    invalid(fmt::format("field '{}': {}", key, e.what()));
  }
}

void check_range(double low, double high) {
  if (!(low >= 0.0 && low <= high && high <= 1.0 &&
        high >= kMinSampledProbability)) {
    invalid(fmt::format("sampling range ({}, {}] must satisfy 0 <= low <= "
                        "high <= 1",
                        low, high));
  }
}

void validate(const SSweepParams& p) {
  (void)ChannelProfile(p.p);
  if (p.s_max < 1) invalid("s_max must be >= 1");
}

void validate(const ScatterParams& p) {
  if (p.networks < 2) invalid("scatter needs at least 2 networks to fit");
  if (p.nodes < 2) invalid("scatter needs at least 2 nodes per network");
  check_range(p.p_low, p.p_high);
}

void validate(const ApproxCdfParams& p) {
  if (p.nodes.empty()) invalid("approx_cdf needs at least one node count");
  for (int m : p.nodes) {
    if (m < 2) invalid("approx_cdf node counts must be >= 2");
  }
  if (p.samples < 10) invalid("approx_cdf needs at least 10 samples");
  check_range(p.p_low, p.p_high);
  if (!(p.tol > 0.0 && p.tol <= 1e-6)) invalid("tol must be in (0, 1e-6]");
  if (p.max_iter < 1) invalid("max_iter must be >= 1");
}

void write_line(std::ostream& out, const std::string& line) {
  out << line << '\n';
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", v);
}

std::string format_age(Age a) {
  return a.is_unbounded() ? "inf" : format_double(a.slots());
}

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kSSweep: return "s_sweep";
    case ExperimentKind::kScatter: return "scatter";
    case ExperimentKind::kApproxCdf: return "approx_cdf";
  }
  return "unknown";
}

ExperimentSpec parse_experiment_spec(const json& doc) {
  if (!doc.is_object()) invalid("experiment spec must be a JSON object");
  std::string kind;
  read_field(doc, "kind", kind);
  ExperimentSpec spec;
  read_field(doc, "output", spec.output_path);
  if (kind == "s_sweep") {
    reject_unknown_keys(doc, {"p", "s_max"});
    SSweepParams p;
    read_field(doc, "p", p.p);
    read_field(doc, "s_max", p.s_max);
    validate(p);
    spec.kind = ExperimentKind::kSSweep;
    spec.params = std::move(p);
  } else if (kind == "scatter") {
    reject_unknown_keys(doc, {"networks", "nodes", "p_low", "p_high", "seed"});
    ScatterParams p;
    read_field(doc, "networks", p.networks);
    read_field(doc, "nodes", p.nodes);
    read_field(doc, "p_low", p.p_low);
    read_field(doc, "p_high", p.p_high);
    read_field(doc, "seed", p.seed);
    validate(p);
    spec.kind = ExperimentKind::kScatter;
    spec.params = p;
  } else if (kind == "approx_cdf") {
    reject_unknown_keys(doc, {"nodes", "samples", "p_low", "p_high", "seed",
                              "tol", "max_iter"});
    ApproxCdfParams p;
    read_field(doc, "nodes", p.nodes);
    read_field(doc, "samples", p.samples);
    read_field(doc, "p_low", p.p_low);
    read_field(doc, "p_high", p.p_high);
    read_field(doc, "seed", p.seed);
    read_field(doc, "tol", p.tol);
    read_field(doc, "max_iter", p.max_iter);
    validate(p);
    spec.kind = ExperimentKind::kApproxCdf;
    spec.params = std::move(p);
  } else {
    invalid(fmt::format("unknown experiment kind '{}'", kind));
  }
  return spec;
}

json to_json(const ExperimentSpec& spec) {
  json doc;
  doc["kind"] = std::string(to_string(spec.kind));
  if (const auto* p = std::get_if<SSweepParams>(&spec.params)) {
    doc["p"] = p->p;
    doc["s_max"] = p->s_max;
  } else if (const auto* p = std::get_if<ScatterParams>(&spec.params)) {
    doc["networks"] = p->networks;
    doc["nodes"] = p->nodes;
    doc["p_low"] = p->p_low;
    doc["p_high"] = p->p_high;
    doc["seed"] = p->seed;
  } else {
    const auto& q = std::get<ApproxCdfParams>(spec.params);
    doc["nodes"] = q.nodes;
    doc["samples"] = q.samples;
    doc["p_low"] = q.p_low;
    doc["p_high"] = q.p_high;
    doc["seed"] = q.seed;
    doc["tol"] = q.tol;
    doc["max_iter"] = q.max_iter;
  }
  if (!spec.output_path.empty()) doc["output"] = spec.output_path;
  return doc;
}

std::vector<double> sample_profile(std::uint64_t rng_seed, std::size_t count,
                                   double low, double high) {
  Xoshiro256 rng(rng_seed);
  std::vector<double> p;
  p.reserve(count);
  while (p.size() < count) {
    const double v = low + (high - low) * rng.uniform_open_closed();
    if (v >= kMinSampledProbability) p.push_back(v);
  }
  return p;
}

SweepResult run_s_sweep(const SSweepParams& params, std::ostream& out) {
  validate(params);
  const ChannelProfile profile(params.p);
  SweepResult sweep = sf_sweep(profile, params.s_max);

  std::string header = "S";
  for (std::size_t i = 1; i <= profile.size(); ++i) {
    header += fmt::format(",mean_z_{0},second_moment_z_{0},age_{0}", i);
  }
  header += ",network_age";
  write_line(out, header);
  for (std::size_t k = 0; k < sweep.ages.size(); ++k) {
    const SfAgeBreakdown& b = sweep.breakdowns[k];
    std::string row = std::to_string(k + 1);
    for (std::size_t i = 0; i < profile.size(); ++i) {
      row += ',' + format_double(b.moments[i].mean);
      row += ',' + format_double(b.moments[i].second_moment);
      row += ',' + format_age(b.ages.per_node[i]);
    }
    row += ',' + format_double(sweep.ages[k]);
    write_line(out, row);
  }
  write_line(out, fmt::format("# best_S={}", sweep.best_s));
  write_line(out, fmt::format("# best_network_age={}",
                              format_double(sweep.ages[sweep.best_s - 1])));
  write_line(out, fmt::format("# monotone_decreasing={}",
                              sweep.monotone_decreasing));
  return sweep;
}

ScatterSummary run_scatter(const ScatterParams& params, std::ostream& out) {
  validate(params);
  const auto n = static_cast<std::size_t>(params.networks);
  ScatterSummary summary;
  summary.networks.resize(n);
  parallel_for(n, [&](std::size_t k) {
    const ChannelProfile profile(
        sample_profile(substream_seed(params.seed, k),
                       static_cast<std::size_t>(params.nodes), params.p_low,
                       params.p_high));
    summary.networks[k] = symmetric_compare(profile);
  });

  write_line(out, "network_id,age_sf,age_aloha,L");
  double sxy = 0.0, sxx = 0.0, sx = 0.0, sy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const SymmetricReport& r = summary.networks[k];
    write_line(out, fmt::format("{},{},{},{}", k + 1, format_double(r.age_sf),
                                format_double(r.age_aloha),
                                format_double(r.l)));
    sxy += r.age_sf * r.age_aloha;
    sxx += r.age_sf * r.age_sf;
    sx += r.age_sf;
    sy += r.age_aloha;
  }
  const double nd = static_cast<double>(n);
  summary.slope_through_origin = sxy / sxx;
  const double var_x = sxx - sx * sx / nd;
  summary.affine_slope = (sxy - sx * sy / nd) / var_x;
  summary.affine_intercept = (sy - summary.affine_slope * sx) / nd;
  summary.bounds = ratio_bounds(std::max(params.p_low, kMinSampledProbability),
                                  params.p_high, params.nodes);

  write_line(out, fmt::format("# slope_through_origin={}",
                              format_double(summary.slope_through_origin)));
  write_line(out, fmt::format("# affine_slope={}",
                              format_double(summary.affine_slope)));
  write_line(out, fmt::format("# affine_intercept={}",
                              format_double(summary.affine_intercept)));
  write_line(out, fmt::format("# L_M={}", format_double(summary.bounds.l_m)));
  write_line(out, fmt::format("# exp_L_bounds={},{}",
                              format_double(std::exp(summary.bounds.lower)),
                              format_double(std::exp(summary.bounds.upper))));
  return summary;
}

ApproxCdfSummary run_approx_cdf(const ApproxCdfParams& params,
                                std::ostream& out, std::ostream& log) {
  validate(params);
  ApproxCdfSummary summary;
  const auto samples = static_cast<std::size_t>(params.samples);
  TauSolverOptions options;
  options.tol = params.tol;
  options.max_iter = params.max_iter;

  for (int m : params.nodes) {
    const std::uint64_t series_seed =
        substream_seed(params.seed, static_cast<std::uint64_t>(m));
    // NaN marks an excluded sample.
    std::vector<double> errors(samples);
    std::vector<std::string> failures(samples);
    parallel_for(samples, [&](std::size_t k) {
      const ChannelProfile profile(
          sample_profile(substream_seed(series_seed, k),
                         static_cast<std::size_t>(m), params.p_low,
                         params.p_high));
      const double approx = tau_approx(profile).achieved_age;
      double reference = 0.0;
      try {
        reference = m == 2 ? tau_exact_two(profile[0], profile[1]).achieved_age
                           : tau_numeric(profile, options).achieved_age;
      } catch (const ConvergenceError& e) {
        errors[k] = std::nan("");
        failures[k] = e.what();
        return;
      }
      errors[k] = std::abs(approx - reference) / reference * 100.0;
    });

    ApproxCdfSeries series;
    series.nodes = m;
    for (std::size_t k = 0; k < samples; ++k) {
      if (std::isnan(errors[k])) {
        ++series.excluded;
        log << fmt::format("approx_cdf: M={} sample {} excluded: {}\n", m,
                           k + 1, failures[k]);
      } else {
        series.errors.push_back(errors[k]);
      }
    }
    std::sort(series.errors.begin(), series.errors.end());
    const auto below = std::count_if(series.errors.begin(),
                                     series.errors.end(),
                                     [](double e) { return e < 5.0; });
    series.fraction_below_5pct =
        series.errors.empty()
            ? 0.0
            : static_cast<double>(below) /
                  static_cast<double>(series.errors.size());
    summary.series.push_back(std::move(series));
  }

  write_line(out, "M,percentile,error");
  for (const auto& s : summary.series) {
    const double n = static_cast<double>(s.errors.size());
    for (std::size_t k = 0; k < s.errors.size(); ++k) {
      write_line(out, fmt::format("{},{},{}", s.nodes,
                                  format_double(100.0 * (k + 1) / n),
                                  format_double(s.errors[k])));
    }
  }
  for (const auto& s : summary.series) {
    write_line(out, fmt::format("# M={} samples={} excluded={} "
                                "fraction_below_5pct={}",
                                s.nodes, s.errors.size(), s.excluded,
                                format_double(s.fraction_below_5pct)));
  }
  return summary;
}

void run_experiment(const ExperimentSpec& spec, std::ostream& out,
                    std::ostream& log) {
  write_line(out, fmt::format("# tool: {}", kToolVersion));
  write_line(out, fmt::format("# experiment: {}", to_string(spec.kind)));
  nlohmann::json recorded = to_json(spec);
  recorded.erase("output");
  write_line(out, fmt::format("# spec: {}", recorded.dump()));
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, SSweepParams>) {
          write_line(out, "# seed: none");
          run_s_sweep(p, out);
        } else if constexpr (std::is_same_v<T, ScatterParams>) {
          write_line(out, fmt::format("# seed: {}", p.seed));
          run_scatter(p, out);
        } else {
          write_line(out, fmt::format("# seed: {}", p.seed));
          run_approx_cdf(p, out, log);
        }
      },
      spec.params);
  if (!out) throw Error(ErrorCode::kIo, "failed writing experiment output");
}

}  // namespace aoi
