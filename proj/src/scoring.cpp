#include "autopeer/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "autopeer/errors.hpp"

namespace autopeer {

Score Score::floor_of(double value) {
  if (!(value > 0.0)) return Score(0);
  if (value >= 1.0) return Score(std::numeric_limits<std::uint64_t>::max());
  // value * 2^64 is exact (power-of-two scaling) and below 2^64.
  return Score(static_cast<std::uint64_t>(std::floor(std::ldexp(value, 64))));
}

Score normalize(const Bytes32& digest) {
  std::uint64_t raw = 0;
  for (int i = 0; i < 8; ++i) raw = (raw << 8) | digest[i];
  return Score::from_raw(raw);
}

Score outbound_score(const NodeId& requester, const NodeId& candidate, const Salt& requester_public_salt) {
  if (requester == candidate) throw SelfScore();
  return normalize(sha256_concat(requester.bytes, candidate.bytes, requester_public_salt.bytes));
}

Score inbound_score(const NodeId& target, const NodeId& requester, const Salt& target_private_salt) {
  if (target == requester) throw SelfScore();
  return normalize(sha256_concat(target.bytes, requester.bytes, target_private_salt.bytes));
}

bool theta_test(Score score, double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw InvalidParameter("theta must lie in [0,1]");
  if (theta >= 1.0) return true;
  return score <= Score::floor_of(theta);
}

std::vector<RankedCandidate> rank_candidates(const NodeId& self, const Salt& public_salt,
                                             std::span<const NodeId> candidates) {
  std::vector<RankedCandidate> ranked;
  ranked.reserve(candidates.size());
  for (const NodeId& c : candidates) ranked.push_back({c, outbound_score(self, c, public_salt)});
  std::sort(ranked.begin(), ranked.end(), [](const RankedCandidate& a, const RankedCandidate& b) {
    return a.score != b.score ? a.score < b.score : a.id < b.id;
  });
  return ranked;
}

}  // namespace autopeer
