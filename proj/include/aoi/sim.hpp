// Slot-level Monte Carlo simulation of SF and ALOHA access.
//
// Slots are numbered 1, 2, ..., horizon. An update delivered in slot t is
// stamped t (the end of the slot). Node i draws from its own substream of
// the run seed, so adding nodes never changes the draws of existing ones.

#ifndef AOI_SIM_HPP
#define AOI_SIM_HPP

#include <array>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <variant>
#include <vector>

#include "aoi/core.hpp"

namespace aoi {

inline constexpr std::uint64_t kMaxHorizon = std::uint64_t{1} << 40;
inline constexpr std::size_t kAgeBatches = 30;

enum class WarmupPolicy {
  /// Statistics start at each node's first update.
  kDropUntilFirstUpdate,
};

struct SimConfig {
  std::variant<SfConfig, AlohaConfig> protocol;
  std::uint64_t horizon = 0;
  std::uint64_t seed = 0;
  WarmupPolicy warmup = WarmupPolicy::kDropUntilFirstUpdate;
  /// Keep per-update timestamps and inter-update samples.
  bool keep_trace = true;
  /// Keep one record per SF turn (ignored for ALOHA).
  bool keep_turns = false;
};

struct Estimate {
  double value = std::numeric_limits<double>::quiet_NaN();
  double se = std::numeric_limits<double>::quiet_NaN();
};

struct TurnRecord {
  std::uint32_t node = 0;
  std::uint64_t first_slot = 0;
  std::uint32_t length = 0;
  bool updated = false;
};

struct NodeSimStats {
  std::uint64_t updates = 0;
  std::vector<std::uint64_t> timestamps;    // when keep_trace
  std::vector<std::uint64_t> inter_update;  // when keep_trace

  // Running sums over inter-update samples.
  std::uint64_t sum_z = 0;
  double sum_area = 0.0;  // sum of Z^2 / 2 + Z

  Estimate mean_z;
  Estimate second_moment_z;
  /// Time-average age; unbounded when fewer than two updates were seen.
  Age age = Age::unbounded();
  /// Batch-means standard error of the age.
  double age_se = std::numeric_limits<double>::quiet_NaN();
};

struct SimResult {
  std::uint64_t horizon = 0;
  std::vector<NodeSimStats> nodes;
  std::vector<TurnRecord> turns;  // SF with keep_turns only
};

SimResult simulate(const SimConfig& cfg);

/// (sum_j Z_j^2 / 2 + Z_j) / (sum_j Z_j) over the given inter-update
/// samples. Throws kInsufficientData when the span is empty.
double empirical_age(std::span<const std::uint64_t> inter_update);

/// Empirical age of one node; throws kInsufficientData below two updates.
double empirical_age(const SimResult& result, std::size_t node);

struct NodeReplicationStats {
  /// Mean over replications, with the standard error of that mean.
  Estimate age;
  Estimate mean_z;
  Estimate second_moment_z;
  std::vector<double> replicate_ages;
};

struct ReplicationSummary {
  int replications = 0;
  std::vector<NodeReplicationStats> nodes;
};

/// Runs `replications` independent simulations with seeds base_seed,
/// base_seed + 1, ... (cfg.seed is ignored). Traces are not kept.
ReplicationSummary replicate(const SimConfig& cfg, int replications,
                             std::uint64_t base_seed);

/// Writes one CSV row (node, slot, Z) per update in slot order, 1-based
/// node numbers. Z is empty for a node's first update. Needs a trace.
void write_trace_csv(std::ostream& out, const SimResult& result);

}  // namespace aoi

#endif  // AOI_SIM_HPP
