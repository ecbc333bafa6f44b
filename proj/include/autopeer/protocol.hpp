#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "autopeer/identity.hpp"
#include "autopeer/scoring.hpp"

namespace autopeer {

using Tick = std::int64_t;

struct ProtocolParams {
  std::size_t k = 4;  ///< cap per direction
  std::uint32_t max_verified_updates = kDefaultMaxVerifiedUpdates;
  std::size_t chain_length = kDefaultChainLength;
};

enum class Direction : std::uint8_t { Outbound, Inbound };

const char* to_string(Direction d);

struct NeighborEntry {
  NodeId peer;
  Score score;  ///< under the owner's current salt for this direction
  Direction direction = Direction::Outbound;
  Tick established_at = 0;
};

struct PeeringRequest {
  NodeId from;
  NodeId to;
  Salt requester_public_salt;
  std::uint32_t updates_since_last = 0;  ///< salt updates since the last request from->to
  std::uint32_t chain_generation = 0;    ///< bumped whenever the requester provisions a new chain
};

struct PeeringResponse {
  NodeId from;
  NodeId to;
  bool accepted = false;
};

struct PeeringDrop {
  NodeId from;
  NodeId to;
};

using Message = std::variant<PeeringRequest, PeeringResponse, PeeringDrop>;

const NodeId& message_sender(const Message& msg);
const NodeId& message_recipient(const Message& msg);

enum class RequestVerdict : std::uint8_t {
  Accepted,
  Unverified,           ///< salt does not hash to the last one we saw
  VerificationRefused,  ///< too many updates to check
  ThetaFailed,
  AlreadyNeighbor,      ///< either direction, or we are requesting them ourselves
  ScoreTooHigh,         ///< inbound full and not better than the worst
};

const char* to_string(RequestVerdict v);

struct RequestOutcome {
  PeeringResponse response;
  std::optional<PeeringDrop> drop;  ///< eviction of the worst inbound neighbor
  RequestVerdict verdict = RequestVerdict::Unverified;
  bool eligible = false;  ///< passed salt verification and the theta-test
};

struct PeeringCounters {
  std::uint64_t requests_sent = 0;
  std::uint64_t requests_received = 0;
  std::uint64_t accepted = 0;
  std::uint64_t rejected_unverified = 0;
  std::uint64_t rejected_refused = 0;
  std::uint64_t rejected_theta = 0;
  std::uint64_t rejected_neighbor = 0;
  std::uint64_t rejected_score = 0;
  std::uint64_t inbound_evictions = 0;
  std::uint64_t outbound_replacements = 0;
  std::uint64_t responses_accepted = 0;
  std::uint64_t responses_rejected = 0;
  std::uint64_t unmatched_responses = 0;
  std::uint64_t drops_received = 0;
  std::uint64_t noop_drops = 0;
  std::uint64_t public_salt_updates = 0;
  std::uint64_t private_salt_updates = 0;
  std::uint64_t chain_renewals = 0;
};

// Neighbor-selection state of a single node.
//
// Outbound: candidates are requested one at a time in ascending outbound
// score, starting at the request cursor. A rejection moves the cursor past
// the rejecting candidate, so nobody is asked twice after refusing within
// one public-salt epoch. Once k outbound neighbors are held
// the node stops, until a public-salt update turns on replacement seeking:
// then only candidates strictly better than the current worst outbound
// neighbor are requested, and an acceptance evicts that worst neighbor.
//
// Inbound: a request is accepted if it passes salt verification and the
// theta-test, the requester is not already a neighbor, and either a slot is
// free or its inbound score beats the worst current inbound neighbor (which
// is then dropped).
//
// Inbound and outbound peer sets are disjoint; the node never peers with itself.
class PeeringState {
 public:
  PeeringState(NodeId id, std::span<const NodeId> known_peers, const ProtocolParams& params, Rng& rng);

  const NodeId& id() const { return id_; }
  const ProtocolParams& params() const { return params_; }
  const HashChain& chain() const { return chain_; }
  std::uint32_t chain_generation() const { return generation_; }
  const Salt& public_salt() const { return public_salt_; }
  const Salt& private_salt() const { return private_salt_; }

  std::span<const NeighborEntry> outbound() const { return outbound_; }
  std::span<const NeighborEntry> inbound() const { return inbound_; }
  std::size_t degree() const { return outbound_.size() + inbound_.size(); }
  bool is_neighbor(const NodeId& peer) const;
  std::optional<Direction> direction_of(const NodeId& peer) const;

  const std::vector<RankedCandidate>& ranked_candidates() const { return ranked_; }
  std::size_t request_cursor() const { return cursor_; }
  bool replacement_seeking() const { return replacement_seeking_; }
  std::optional<NodeId> pending_target() const;
  const PeeringCounters& counters() const { return counters_; }

  /// Next peer to ask, or nothing when saturated, exhausted or a request is in flight.
  std::optional<NodeId> next_outbound_target() const;

  /// Builds a request to `target` carrying the number of public-salt updates
  /// since our last request to it, and records this communication. Does not
  /// mark the request pending.
  PeeringRequest build_request(const NodeId& target);

  /// Issues a request to next_outbound_target(), if any, and marks it pending.
  std::optional<PeeringRequest> poll(Tick now);

  /// Throws ProtocolError for a request not addressed to us or sent by us.
  RequestOutcome handle_request(const PeeringRequest& req, double theta, Tick now);

  /// Returns a drop for the evicted outbound neighbor when the accept made
  /// the outbound set overflow. Responses without a matching pending request
  /// are ignored and counted.
  std::optional<PeeringDrop> handle_response(const PeeringResponse& resp, Tick now);

  /// Removes the sender from whichever set holds it. Returns false (and
  /// counts) when the sender was not a neighbor.
  bool handle_drop(const PeeringDrop& drop);

  /// Reveals the previous chain element (or provisions a new chain when the
  /// current one is exhausted), re-ranks candidates and re-scores outbound
  /// neighbors. Existing neighbors are kept.
  void update_public_salt(Rng& rng);

  /// Draws a fresh private salt and re-scores current inbound neighbors.
  void update_private_salt(Rng& rng);

  /// Empty when all structural invariants hold, else a description.
  std::string check_invariants() const;

 private:
  struct Pending {
    NodeId target;
    std::size_t rank_index;
    std::uint64_t ranking_epoch;
  };
  struct HeardSalt {
    Salt salt;
    std::uint32_t generation;
  };
  struct ToldSalt {
    std::uint32_t generation;
    std::size_t cursor;
  };

  std::optional<std::size_t> find_target_index() const;
  void rerank();
  bool verify_requester(const PeeringRequest& req, RequestVerdict& verdict);

  NodeId id_;
  ProtocolParams params_;
  std::vector<NodeId> known_;
  HashChain chain_;
  std::uint32_t generation_ = 0;
  Salt public_salt_;
  Salt private_salt_;

  std::vector<NeighborEntry> outbound_;
  std::vector<NeighborEntry> inbound_;

  std::vector<RankedCandidate> ranked_;
  std::uint64_t ranking_epoch_ = 0;
  std::size_t cursor_ = 0;
  bool replacement_seeking_ = false;
  std::optional<Pending> pending_;

  std::unordered_map<NodeId, HeardSalt, NodeIdHash> heard_;
  std::unordered_map<NodeId, ToldSalt, NodeIdHash> told_;

  PeeringCounters counters_;
};

/// Canonical byte layout:
///   request:  0x01 | from(32) | to(32) | salt(32) | varint m | varint generation
///   response: 0x02 | from(32) | to(32) | accepted(1)
///   drop:     0x03 | from(32) | to(32)
/// Varints are unsigned LEB128.
std::vector<std::uint8_t> encode_message(const Message& msg);

/// Throws ProtocolError on an unknown tag, truncation, trailing bytes or an
/// over-long varint.
Message decode_message(std::span<const std::uint8_t> bytes);

}  // namespace autopeer
