#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "autopeer/digest.hpp"
#include "autopeer/identity.hpp"

namespace autopeer {

// A score is the dyadic rational raw / 2^64 in [0,1). Comparisons use the
// integer numerator and are therefore exact.
class Score {
 public:
  constexpr Score() = default;
  static constexpr Score from_raw(std::uint64_t raw) { return Score(raw); }
  /// Largest score not exceeding `value` (value clamped to [0,1)).
  static Score floor_of(double value);

  constexpr std::uint64_t raw() const { return raw_; }
  /// Truncated to 53 bits so the result is strictly below 1.
  constexpr double value() const { return static_cast<double>(raw_ >> 11) * 0x1.0p-53; }

  friend constexpr bool operator==(Score, Score) = default;
  friend constexpr auto operator<=>(Score, Score) = default;

 private:
  constexpr explicit Score(std::uint64_t raw) : raw_(raw) {}
  std::uint64_t raw_ = 0;
};

/// First 8 digest bytes read big-endian, over 2^64.
Score normalize(const Bytes32& digest);

/// S_out(requester, candidate) = H(requester || candidate || public salt of requester).
/// Throws SelfScore when requester == candidate.
Score outbound_score(const NodeId& requester, const NodeId& candidate, const Salt& requester_public_salt);

/// S_in(target, requester) = H(target || requester || private salt of target).
/// Throws SelfScore when target == requester.
Score inbound_score(const NodeId& target, const NodeId& requester, const Salt& target_private_salt);

/// Inclusive: passes iff score <= theta. Throws InvalidParameter for theta outside [0,1].
bool theta_test(Score score, double theta);

struct RankedCandidate {
  NodeId id;
  Score score;
};

/// Candidates sorted by ascending outbound score, ties by NodeId.
/// Throws SelfScore if `self` appears among the candidates.
std::vector<RankedCandidate> rank_candidates(const NodeId& self, const Salt& public_salt,
                                             std::span<const NodeId> candidates);

}  // namespace autopeer
