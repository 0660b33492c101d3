#include "aoi/sim.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <queue>

#include <fmt/core.h>

#include "aoi/parallel.hpp"
#include "aoi/rng.hpp"

namespace aoi {
namespace {

// Welford running mean and variance.
class RunningStat {
 public:
  void add(double x) {
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
  }

  std::uint64_t count() const { return n_; }

  Estimate estimate() const {
    Estimate e;
    if (n_ == 0) return e;
    e.value = mean_;
    if (n_ >= 2) {
      const double var = m2_ / static_cast<double>(n_ - 1);
      e.se = std::sqrt(var / static_cast<double>(n_));
    }
    return e;
  }

 private:
  std::uint64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

class NodeRecorder {
 public:
  NodeRecorder(std::uint64_t horizon, bool keep_trace)
      : horizon_(horizon), keep_trace_(keep_trace) {}

  void record(std::uint64_t slot) {
    ++stats_.updates;
    if (keep_trace_) stats_.timestamps.push_back(slot);
    if (stats_.updates > 1) {
      const std::uint64_t z = slot - last_;
      const double zd = static_cast<double>(z);
      const double area = 0.5 * zd * zd + zd;
      if (keep_trace_) stats_.inter_update.push_back(z);
      stats_.sum_z += z;
      stats_.sum_area += area;
      z_.add(zd);
      z2_.add(zd * zd);
      // An interval belongs to the batch containing its closing slot.
      const std::size_t b =
          static_cast<std::size_t>((slot - 1) * kAgeBatches / horizon_);
      batch_area_[b] += area;
      batch_span_[b] += z;
    }
    last_ = slot;
  }

  NodeSimStats finish() && {
    stats_.mean_z = z_.estimate();
    stats_.second_moment_z = z2_.estimate();
    if (stats_.updates >= 2) {
      stats_.age = Age::finite(stats_.sum_area /
                               static_cast<double>(stats_.sum_z));
      RunningStat batches;
      for (std::size_t b = 0; b < kAgeBatches; ++b) {
        if (batch_span_[b] > 0) {
          batches.add(batch_area_[b] / static_cast<double>(batch_span_[b]));
        }
      }
      stats_.age_se = batches.estimate().se;
    }
    return std::move(stats_);
  }

 private:
  std::uint64_t horizon_;
  bool keep_trace_;
  std::uint64_t last_ = 0;
  NodeSimStats stats_;
  RunningStat z_;
  RunningStat z2_;
  std::array<double, kAgeBatches> batch_area_{};
  std::array<std::uint64_t, kAgeBatches> batch_span_{};
};

std::vector<Xoshiro256> node_streams(std::uint64_t seed, std::size_t m) {
  std::vector<Xoshiro256> out;
  out.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    out.emplace_back(substream_seed(seed, i));
  }
  return out;
}

void run_sf(const SfConfig& sf, const SimConfig& cfg,
            std::vector<NodeRecorder>& rec, SimResult& result) {
  const std::size_t m = sf.profile.size();
  auto rng = node_streams(cfg.seed, m);
  const auto cap = static_cast<std::uint32_t>(sf.turn_cap);
  std::uint64_t slot = 0;
  std::size_t node = 0;
  while (slot < cfg.horizon) {
    TurnRecord turn{static_cast<std::uint32_t>(node), slot + 1, 0, false};
    while (turn.length < cap && slot < cfg.horizon) {
      ++slot;
      ++turn.length;
      if (rng[node].bernoulli(sf.profile[node])) {
        rec[node].record(slot);
        turn.updated = true;
        break;
      }
    }
    if (cfg.keep_turns) result.turns.push_back(turn);
    node = node + 1 == m ? 0 : node + 1;
  }
}

void run_aloha(const AlohaConfig& aloha, const SimConfig& cfg,
               std::vector<NodeRecorder>& rec) {
  const std::size_t m = aloha.profile.size();
  auto rng = node_streams(cfg.seed, m);
  for (std::uint64_t slot = 1; slot <= cfg.horizon; ++slot) {
    std::size_t attempts = 0;
    std::size_t sender = 0;
    bool decoded = false;
    for (std::size_t i = 0; i < m; ++i) {
      // Both draws are taken every slot so each node's stream advances
      // independently of the others.
      const bool attempt = rng[i].bernoulli(aloha.attempts[i]);
      const bool decode = rng[i].bernoulli(aloha.profile[i]);
      if (attempt) {
        ++attempts;
        sender = i;
        decoded = decode;
      }
    }
    if (attempts == 1 && decoded) rec[sender].record(slot);
  }
}

std::size_t node_count(const SimConfig& cfg) {
  return std::visit([](const auto& c) { return c.profile.size(); },
                    cfg.protocol);
}

Estimate mean_with_se(const std::vector<double>& xs) {
  RunningStat s;
  for (double x : xs) s.add(x);
  Estimate e = s.estimate();
  if (xs.size() == 1) e.se = 0.0;
  return e;
}

}  // namespace

SimResult simulate(const SimConfig& cfg) {
  if (cfg.horizon < 1 || cfg.horizon > kMaxHorizon) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("horizon {} outside [1, 2^40]", cfg.horizon));
  }
  const std::size_t m = node_count(cfg);
  std::vector<NodeRecorder> rec(m, NodeRecorder(cfg.horizon, cfg.keep_trace));
  SimResult result;
  result.horizon = cfg.horizon;
  if (const auto* sf = std::get_if<SfConfig>(&cfg.protocol)) {
    run_sf(*sf, cfg, rec, result);
  } else {
    run_aloha(std::get<AlohaConfig>(cfg.protocol), cfg, rec);
  }
  result.nodes.reserve(m);
  for (auto& r : rec) result.nodes.push_back(std::move(r).finish());
  return result;
}

double empirical_age(std::span<const std::uint64_t> inter_update) {
  if (inter_update.empty()) {
    throw Error(ErrorCode::kInsufficientData,
                "age needs at least one inter-update sample");
  }
  double area = 0.0;
  double span = 0.0;
  for (std::uint64_t z : inter_update) {
    const double zd = static_cast<double>(z);
    area += 0.5 * zd * zd + zd;
    span += zd;
  }
  return area / span;
}

double empirical_age(const SimResult& result, std::size_t node) {
  if (node >= result.nodes.size()) {
    throw Error(ErrorCode::kNodeIndex,
                fmt::format("node {} out of range", node + 1));
  }
  const NodeSimStats& s = result.nodes[node];
  if (s.updates < 2) {
    throw Error(ErrorCode::kInsufficientData,
                fmt::format("node {} has {} updates; age needs at least two",
                            node + 1, s.updates));
  }
  return s.sum_area / static_cast<double>(s.sum_z);
}

ReplicationSummary replicate(const SimConfig& cfg, int replications,
                             std::uint64_t base_seed) {
  if (replications < 1) {
    throw Error(ErrorCode::kInvalidArgument, "replications must be >= 1");
  }
  const auto reps = static_cast<std::size_t>(replications);
  std::vector<SimResult> runs(reps);
  parallel_for(reps, [&](std::size_t k) {
    SimConfig local = cfg;
    local.seed = base_seed + k;
    local.keep_trace = false;
    local.keep_turns = false;
    runs[k] = simulate(local);
  });

  const std::size_t m = node_count(cfg);
  ReplicationSummary out;
  out.replications = replications;
  out.nodes.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<double> mean_z;
    std::vector<double> second_z;
    auto& node = out.nodes[i];
    for (const SimResult& run : runs) {
      const NodeSimStats& s = run.nodes[i];
      node.replicate_ages.push_back(s.age.slots());
      mean_z.push_back(s.mean_z.value);
      second_z.push_back(s.second_moment_z.value);
    }
    node.age = mean_with_se(node.replicate_ages);
    node.mean_z = mean_with_se(mean_z);
    node.second_moment_z = mean_with_se(second_z);
  }
  return out;
}

void write_trace_csv(std::ostream& out, const SimResult& result) {
  struct Cursor {
    std::uint64_t slot;
    std::size_t node;
    std::size_t index;
    bool operator>(const Cursor& o) const {
      return slot != o.slot ? slot > o.slot : node > o.node;
    }
  };
  std::priority_queue<Cursor, std::vector<Cursor>, std::greater<>> heads;
  for (std::size_t i = 0; i < result.nodes.size(); ++i) {
    const auto& s = result.nodes[i];
    if (s.updates > 0 && s.timestamps.empty()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "trace export needs a simulation run with keep_trace");
    }
    if (!s.timestamps.empty()) heads.push({s.timestamps[0], i, 0});
  }
  out << "node,slot,z\n";
  while (!heads.empty()) {
    const Cursor c = heads.top();
    heads.pop();
    const auto& ts = result.nodes[c.node].timestamps;
    if (c.index == 0) {
      out << fmt::format("{},{},\n", c.node + 1, c.slot);
    } else {
      out << fmt::format("{},{},{}\n", c.node + 1, c.slot,
                         c.slot - ts[c.index - 1]);
    }
    if (c.index + 1 < ts.size()) {
      heads.push({ts[c.index + 1], c.node, c.index + 1});
    }
  }
  if (!out) throw Error(ErrorCode::kIo, "failed writing trace");
}

}  // namespace aoi
