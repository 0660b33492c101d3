// Canned experiments and the CSV conventions shared by every command.
//
// CSV output: '#'-prefixed metadata lines, a column header, data rows, and
// '#'-prefixed summary lines. Floats use 17 significant digits, '.' as the
// decimal separator and LF line endings, so identical inputs give
// byte-identical files.

#ifndef AOI_EXPERIMENTS_HPP
#define AOI_EXPERIMENTS_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "aoi/optimize.hpp"
#include "aoi/symmetric.hpp"

namespace aoi {

inline constexpr std::string_view kToolVersion = "aoi 1.0.0";

/// 17 significant digits; "inf" for infinity and "nan" for NaN.
std::string format_double(double v);
std::string format_age(Age a);

enum class ExperimentKind { kSSweep, kScatter, kApproxCdf };

std::string_view to_string(ExperimentKind kind);

struct SSweepParams {
  std::vector<double> p;
  int s_max = 30;
};

/// p_i drawn uniformly from (p_low, p_high].
struct ScatterParams {
  int networks = 500;
  int nodes = 1000;
  double p_low = 0.1;
  double p_high = 0.9;
  std::uint64_t seed = 1;
};

struct ApproxCdfParams {
  std::vector<int> nodes = {5, 20};
  int samples = 1000;
  double p_low = 0.0;
  double p_high = 1.0;
  std::uint64_t seed = 1;
  double tol = 1e-10;
  int max_iter = 10'000;
};

/// Draws below this are rejected and redrawn.
inline constexpr double kMinSampledProbability = 1e-6;

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::kSSweep;
  std::variant<SSweepParams, ScatterParams, ApproxCdfParams> params;
  std::string output_path;  // empty: standard output
};

/// Parses and validates a JSON experiment description. Field names:
///   kind: "s_sweep" | "scatter" | "approx_cdf"
///   s_sweep:    p (array), s_max
///   scatter:    networks, nodes, p_low, p_high, seed
///   approx_cdf: nodes (array), samples, p_low, p_high, seed, tol, max_iter
///   output:     optional output path
/// Throws Error(kInvalidArgument) on a malformed or invalid spec.
ExperimentSpec parse_experiment_spec(const nlohmann::json& doc);

/// Fully resolved spec, defaults included.
nlohmann::json to_json(const ExperimentSpec& spec);

/// Draws `count` probabilities uniform on (low, high] from `rng_seed`.
std::vector<double> sample_profile(std::uint64_t rng_seed, std::size_t count,
                                   double low, double high);

SweepResult run_s_sweep(const SSweepParams& params, std::ostream& out);

struct ScatterSummary {
  std::vector<SymmetricReport> networks;
  double slope_through_origin = 0.0;
  double affine_slope = 0.0;
  double affine_intercept = 0.0;
  /// Bounds for the sampling range (p_low, p_high) and M; every sampled
  /// network lies inside its own, tighter, bounds.
  RatioBounds bounds;
};

ScatterSummary run_scatter(const ScatterParams& params, std::ostream& out);

struct ApproxCdfSeries {
  int nodes = 0;
  /// Sorted absolute percentage errors of the approximation.
  std::vector<double> errors;
  int excluded = 0;
  double fraction_below_5pct = 0.0;
};

struct ApproxCdfSummary {
  std::vector<ApproxCdfSeries> series;
};

/// Solver failures are reported on `log`, excluded, and counted.
ApproxCdfSummary run_approx_cdf(const ApproxCdfParams& params,
                                std::ostream& out, std::ostream& log);

/// Dispatches on spec.kind, writing metadata, rows and summary to `out`.
void run_experiment(const ExperimentSpec& spec, std::ostream& out,
                    std::ostream& log);

}  // namespace aoi

#endif  // AOI_EXPERIMENTS_HPP
