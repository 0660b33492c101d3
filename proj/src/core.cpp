#include "aoi/core.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

namespace aoi {

ErrorKind kind_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNoConvergence:
    case ErrorCode::kBoundViolation:
      return ErrorKind::kNumerical;
    case ErrorCode::kIo:
      return ErrorKind::kIo;
    default:
      return ErrorKind::kValidation;
  }
}

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyProfile: return "empty_profile";
    case ErrorCode::kProbabilityNotPositive: return "probability_not_positive";
    case ErrorCode::kProbabilityAboveOne: return "probability_above_one";
    case ErrorCode::kInvalidTurnCap: return "invalid_turn_cap";
    case ErrorCode::kInvalidAttempt: return "invalid_attempt";
    case ErrorCode::kLengthMismatch: return "length_mismatch";
    case ErrorCode::kNodeIndex: return "node_index";
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kSingleNode: return "single_node";
    case ErrorCode::kInsufficientData: return "insufficient_data";
    case ErrorCode::kNoConvergence: return "no_convergence";
    case ErrorCode::kBoundViolation: return "bound_violation";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

ChannelProfile::ChannelProfile(std::vector<double> probs)
    : probs_(std::move(probs)) {
  if (probs_.empty()) {
    throw Error(ErrorCode::kEmptyProfile, "channel profile has no nodes");
  }
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    const double p = probs_[i];
    // NaN fails the first comparison as well.
    if (!(p > 0.0)) {
      throw Error(ErrorCode::kProbabilityNotPositive,
                  fmt::format("p[{}] = {} must be > 0", i + 1, p));
    }
    if (p > 1.0) {
      throw Error(ErrorCode::kProbabilityAboveOne,
                  fmt::format("p[{}] = {} must be <= 1", i + 1, p));
    }
  }
  auto [lo, hi] = std::minmax_element(probs_.begin(), probs_.end());
  p_min_ = *lo;
  p_max_ = *hi;
}

void ChannelProfile::check_node(std::size_t node) const {
  if (node >= probs_.size()) {
    throw Error(ErrorCode::kNodeIndex,
                fmt::format("node {} out of range for {} nodes", node + 1,
                            probs_.size()));
  }
}

SfConfig::SfConfig(ChannelProfile profile_in, int turn_cap_in)
    : profile(std::move(profile_in)), turn_cap(turn_cap_in) {
  if (turn_cap < 1) {
    throw Error(ErrorCode::kInvalidTurnCap,
                fmt::format("turn cap S = {} must be >= 1", turn_cap));
  }
}

AlohaConfig::AlohaConfig(ChannelProfile profile_in,
                         std::vector<double> attempts_in)
    : profile(std::move(profile_in)), attempts(std::move(attempts_in)) {
  if (attempts.size() != profile.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                fmt::format("{} attempt probabilities for {} nodes",
                            attempts.size(), profile.size()));
  }
  for (std::size_t i = 0; i < attempts.size(); ++i) {
    const double tau = attempts[i];
    if (!(tau >= 0.0 && tau <= 1.0)) {
      throw Error(ErrorCode::kInvalidAttempt,
                  fmt::format("tau[{}] = {} outside [0, 1]", i + 1, tau));
    }
  }
}

double age_from_moments(const InterUpdateMoments& m) {
  if (!(m.mean > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("inter-update mean {} must be > 0", m.mean));
  }
  return m.second_moment / (2.0 * m.mean) + 1.0;
}

AgeReport network_age(std::span<const Age> per_node) {
  if (per_node.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "network age of zero nodes");
  }
  AgeReport report;
  report.per_node.assign(per_node.begin(), per_node.end());
  double sum = 0.0;
  for (Age a : per_node) {
    if (a.is_unbounded()) {
      report.network = Age::unbounded();
      return report;
    }
    sum += a.slots();
  }
  report.network = Age::finite(sum / static_cast<double>(per_node.size()));
  return report;
}

AgeReport network_age(std::span<const double> per_node) {
  std::vector<Age> ages;
  ages.reserve(per_node.size());
  for (double a : per_node) {
    ages.push_back(std::isinf(a) ? Age::unbounded() : Age::finite(a));
  }
  return network_age(ages);
}

}  // namespace aoi
