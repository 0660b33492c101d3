// Shared domain types for age-of-information analysis over a slotted
// multiaccess channel.
//
// Node indices are 0-based throughout the library. The CLI converts to and
// from 1-based indices at its boundary.

#ifndef AOI_CORE_HPP
#define AOI_CORE_HPP

#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace aoi {

enum class ErrorCode {
  kEmptyProfile,
  kProbabilityNotPositive,
  kProbabilityAboveOne,
  kInvalidTurnCap,
  kInvalidAttempt,
  kLengthMismatch,
  kNodeIndex,
  kInvalidArgument,
  kSingleNode,
  kInsufficientData,
  kNoConvergence,
  kBoundViolation,
  kIo,
};

/// Coarse classification used for process exit codes.
enum class ErrorKind { kValidation, kNumerical, kIo };

ErrorKind kind_of(ErrorCode code);
const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// An age in slots, or the "unbounded" sentinel for a node that never
/// updates. Unbounded ages are values, never errors.
class Age {
 public:
  constexpr Age() = default;

  static constexpr Age finite(double slots) { return Age(slots); }
  static constexpr Age unbounded() {
    return Age(std::numeric_limits<double>::infinity());
  }

  constexpr bool is_unbounded() const {
    return slots_ == std::numeric_limits<double>::infinity();
  }
  constexpr bool is_finite() const { return !is_unbounded(); }

  /// Slot count; +infinity when unbounded.
  constexpr double slots() const { return slots_; }

  friend constexpr bool operator==(Age, Age) = default;

 private:
  constexpr explicit Age(double slots) : slots_(slots) {}

  double slots_ = 0.0;
};

/// Per-node decode-success probabilities. Every p_i lies in (0, 1].
class ChannelProfile {
 public:
  explicit ChannelProfile(std::vector<double> probs);

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::span<const double> probs() const { return probs_; }

  double p_min() const { return p_min_; }
  double p_max() const { return p_max_; }
  /// p_max / p_min.
  double rho() const { return p_max_ / p_min_; }

  /// Throws kNodeIndex when node is out of range.
  void check_node(std::size_t node) const;

 private:
  std::vector<double> probs_;
  double p_min_ = 0.0;
  double p_max_ = 0.0;
};

/// Scheduled access with feedback: round-robin turns of at most turn_cap
/// transmission slots each.
struct SfConfig {
  SfConfig(ChannelProfile profile, int turn_cap);

  ChannelProfile profile;
  int turn_cap;
};

/// Slotted ALOHA-like access: node i attempts in each slot with
/// probability attempts[i].
struct AlohaConfig {
  AlohaConfig(ChannelProfile profile, std::vector<double> attempts);

  ChannelProfile profile;
  std::vector<double> attempts;
};

/// First and second moments of a node's inter-update time, in slots.
struct InterUpdateMoments {
  double mean = 0.0;
  double second_moment = 0.0;

  double variance() const { return second_moment - mean * mean; }
};

struct AgeReport {
  std::vector<Age> per_node;
  Age network;
};

/// Time-average age of a renewal update process: E[Z^2] / (2 E[Z]) + 1.
/// The +1 accounts for the age being reset to one slot at each update.
double age_from_moments(const InterUpdateMoments& m);

/// Network age is the arithmetic mean of the node ages. Any unbounded node
/// age makes the network age unbounded.
AgeReport network_age(std::span<const Age> per_node);
AgeReport network_age(std::span<const double> per_node);

}  // namespace aoi

#endif  // AOI_CORE_HPP
