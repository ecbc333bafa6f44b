#include "autopeer/protocol.hpp"

#include <algorithm>
#include <cassert>

#include "autopeer/errors.hpp"

namespace autopeer {

namespace {

HashChain fresh_chain(Rng& rng, std::size_t length) {
  Bytes32 seed{};
  rng.fill(seed);
  return HashChain::create(seed, length);
}

// Worst = highest score; ties go to the larger id so the choice is total.
std::vector<NeighborEntry>::iterator worst_of(std::vector<NeighborEntry>& entries) {
  return std::max_element(entries.begin(), entries.end(), [](const NeighborEntry& a, const NeighborEntry& b) {
    return a.score != b.score ? a.score < b.score : a.peer < b.peer;
  });
}

std::vector<NeighborEntry>::iterator find_peer(std::vector<NeighborEntry>& entries, const NodeId& peer) {
  return std::find_if(entries.begin(), entries.end(), [&](const NeighborEntry& e) { return e.peer == peer; });
}

bool contains_peer(std::span<const NeighborEntry> entries, const NodeId& peer) {
  return std::any_of(entries.begin(), entries.end(), [&](const NeighborEntry& e) { return e.peer == peer; });
}

}  // namespace

const char* to_string(Direction d) { return d == Direction::Outbound ? "outbound" : "inbound"; }

const char* to_string(RequestVerdict v) {
  switch (v) {
    case RequestVerdict::Accepted: return "accepted";
    case RequestVerdict::Unverified: return "unverified";
    case RequestVerdict::VerificationRefused: return "verification-refused";
    case RequestVerdict::ThetaFailed: return "theta-failed";
    case RequestVerdict::AlreadyNeighbor: return "already-neighbor";
    case RequestVerdict::ScoreTooHigh: return "score-too-high";
  }
  return "unknown";
}

const NodeId& message_sender(const Message& msg) {
  return std::visit([](const auto& m) -> const NodeId& { return m.from; }, msg);
}

const NodeId& message_recipient(const Message& msg) {
  return std::visit([](const auto& m) -> const NodeId& { return m.to; }, msg);
}

PeeringState::PeeringState(NodeId id, std::span<const NodeId> known_peers, const ProtocolParams& params, Rng& rng)
    : id_(id),
      params_(params),
      chain_(fresh_chain(rng, params.chain_length)),
      public_salt_(chain_.current()),
      private_salt_(new_private_salt(rng)) {
  if (params_.k < 1) throw InvalidParameter("k must be at least 1");
  known_.reserve(known_peers.size());
  for (const NodeId& p : known_peers) {
    if (p != id_) known_.push_back(p);
  }
  rerank();
}

bool PeeringState::is_neighbor(const NodeId& peer) const {
  return contains_peer(outbound_, peer) || contains_peer(inbound_, peer);
}

std::optional<Direction> PeeringState::direction_of(const NodeId& peer) const {
  if (contains_peer(outbound_, peer)) return Direction::Outbound;
  if (contains_peer(inbound_, peer)) return Direction::Inbound;
  return std::nullopt;
}

std::optional<NodeId> PeeringState::pending_target() const {
  if (!pending_) return std::nullopt;
  return pending_->target;
}

void PeeringState::rerank() {
  ranked_ = rank_candidates(id_, public_salt_, known_);
  ++ranking_epoch_;
  cursor_ = 0;
}

std::optional<std::size_t> PeeringState::find_target_index() const {
  if (pending_) return std::nullopt;
  const bool full = outbound_.size() >= params_.k;
  if (full && !replacement_seeking_) return std::nullopt;
  for (std::size_t i = cursor_; i < ranked_.size(); ++i) {
    if (is_neighbor(ranked_[i].id)) continue;
    if (!full) return i;
    const auto worst = std::max_element(outbound_.begin(), outbound_.end(),
                                        [](const NeighborEntry& a, const NeighborEntry& b) { return a.score < b.score; });
    if (ranked_[i].score < worst->score) return i;
    return std::nullopt;
  }
  return std::nullopt;
}

std::optional<NodeId> PeeringState::next_outbound_target() const {
  const auto index = find_target_index();
  if (!index) return std::nullopt;
  return ranked_[*index].id;
}

PeeringRequest PeeringState::build_request(const NodeId& target) {
  if (target == id_) throw InvalidParameter("cannot request a peering with ourselves");
  std::uint32_t m = 0;
  const auto it = told_.find(target);
  if (it != told_.end() && it->second.generation == generation_) {
    m = static_cast<std::uint32_t>(it->second.cursor - chain_.cursor());
  }
  // The verifier only remembers salts it could check; mirror that.
  if (m <= params_.max_verified_updates) told_[target] = ToldSalt{generation_, chain_.cursor()};
  ++counters_.requests_sent;
  return PeeringRequest{id_, target, public_salt_, m, generation_};
}

std::optional<PeeringRequest> PeeringState::poll(Tick /*now*/) {
  const auto index = find_target_index();
  if (!index) return std::nullopt;
  const NodeId target = ranked_[*index].id;
  pending_ = Pending{target, *index, ranking_epoch_};
  return build_request(target);
}

bool PeeringState::verify_requester(const PeeringRequest& req, RequestVerdict& verdict) {
  const auto it = heard_.find(req.from);
  if (it == heard_.end() || req.chain_generation > it->second.generation) {
    // First contact with this chain: trust on first use.
    heard_[req.from] = HeardSalt{req.requester_public_salt, req.chain_generation};
    return true;
  }
  if (req.chain_generation < it->second.generation) {
    verdict = RequestVerdict::Unverified;
    return false;
  }
  try {
    if (!verify_salt(req.requester_public_salt, it->second.salt, req.updates_since_last,
                     params_.max_verified_updates)) {
      verdict = RequestVerdict::Unverified;
      return false;
    }
  } catch (const VerificationRefused&) {
    verdict = RequestVerdict::VerificationRefused;
    return false;
  }
  it->second.salt = req.requester_public_salt;
  return true;
}

RequestOutcome PeeringState::handle_request(const PeeringRequest& req, double theta, Tick now) {
  if (req.to != id_) throw ProtocolError("request addressed to another node");
  if (req.from == id_) throw ProtocolError("request from ourselves");
  ++counters_.requests_received;

  RequestOutcome out;
  out.response = PeeringResponse{id_, req.from, false};

  if (!verify_requester(req, out.verdict)) {
    ++(out.verdict == RequestVerdict::VerificationRefused ? counters_.rejected_refused : counters_.rejected_unverified);
    return out;
  }
  const Score eligibility = outbound_score(req.from, id_, req.requester_public_salt);
  if (!theta_test(eligibility, theta)) {
    out.verdict = RequestVerdict::ThetaFailed;
    ++counters_.rejected_theta;
    return out;
  }
  out.eligible = true;
  if (is_neighbor(req.from) || (pending_ && pending_->target == req.from)) {
    out.verdict = RequestVerdict::AlreadyNeighbor;
    ++counters_.rejected_neighbor;
    return out;
  }

  const Score score = inbound_score(id_, req.from, private_salt_);
  if (inbound_.size() >= params_.k) {
    const auto worst = worst_of(inbound_);
    if (!(score < worst->score)) {
      out.verdict = RequestVerdict::ScoreTooHigh;
      ++counters_.rejected_score;
      return out;
    }
    out.drop = PeeringDrop{id_, worst->peer};
    inbound_.erase(worst);
    ++counters_.inbound_evictions;
  }
  inbound_.push_back(NeighborEntry{req.from, score, Direction::Inbound, now});
  assert(theta_test(eligibility, theta));
  out.response.accepted = true;
  out.verdict = RequestVerdict::Accepted;
  ++counters_.accepted;
  return out;
}

std::optional<PeeringDrop> PeeringState::handle_response(const PeeringResponse& resp, Tick now) {
  if (resp.to != id_ || !pending_ || pending_->target != resp.from) {
    ++counters_.unmatched_responses;
    return std::nullopt;
  }
  const Pending done = *pending_;
  pending_.reset();
  if (!resp.accepted) {
    if (done.ranking_epoch == ranking_epoch_) cursor_ = std::max(cursor_, done.rank_index + 1);
    ++counters_.responses_rejected;
    return std::nullopt;
  }
  ++counters_.responses_accepted;
  outbound_.push_back(NeighborEntry{resp.from, outbound_score(id_, resp.from, public_salt_), Direction::Outbound, now});
  if (outbound_.size() <= params_.k) return std::nullopt;

  const auto worst = worst_of(outbound_);
  PeeringDrop drop{id_, worst->peer};
  outbound_.erase(worst);
  ++counters_.outbound_replacements;
  return drop;
}

bool PeeringState::handle_drop(const PeeringDrop& drop) {
  if (drop.to != id_) throw ProtocolError("drop addressed to another node");
  ++counters_.drops_received;
  if (auto it = find_peer(outbound_, drop.from); it != outbound_.end()) {
    outbound_.erase(it);
    return true;
  }
  if (auto it = find_peer(inbound_, drop.from); it != inbound_.end()) {
    inbound_.erase(it);
    return true;
  }
  ++counters_.noop_drops;
  return false;
}

void PeeringState::update_public_salt(Rng& rng) {
  if (chain_.exhausted()) {
    chain_ = fresh_chain(rng, params_.chain_length);
    ++generation_;
    ++counters_.chain_renewals;
  } else {
    chain_.advance();
  }
  public_salt_ = chain_.current();
  for (NeighborEntry& e : outbound_) e.score = outbound_score(id_, e.peer, public_salt_);
  rerank();
  replacement_seeking_ = true;
  ++counters_.public_salt_updates;
}

void PeeringState::update_private_salt(Rng& rng) {
  private_salt_ = new_private_salt(rng);
  for (NeighborEntry& e : inbound_) e.score = inbound_score(id_, e.peer, private_salt_);
  ++counters_.private_salt_updates;
}

std::string PeeringState::check_invariants() const {
  if (outbound_.size() > params_.k) return "outbound set exceeds k";
  if (inbound_.size() > params_.k) return "inbound set exceeds k";
  std::vector<NodeId> peers;
  for (const auto& e : outbound_) peers.push_back(e.peer);
  for (const auto& e : inbound_) peers.push_back(e.peer);
  if (std::find(peers.begin(), peers.end(), id_) != peers.end()) return "self edge";
  std::sort(peers.begin(), peers.end());
  if (std::adjacent_find(peers.begin(), peers.end()) != peers.end()) return "peer appears twice";
  for (const auto& e : outbound_) {
    if (e.direction != Direction::Outbound) return "direction tag mismatch in outbound set";
    if (e.score != outbound_score(id_, e.peer, public_salt_)) return "stale outbound score";
  }
  for (const auto& e : inbound_) {
    if (e.direction != Direction::Inbound) return "direction tag mismatch in inbound set";
    if (e.score != inbound_score(id_, e.peer, private_salt_)) return "stale inbound score";
  }
  return {};
}

}  // namespace autopeer
