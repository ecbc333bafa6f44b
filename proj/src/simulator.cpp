#include "autopeer/simulator.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "autopeer/errors.hpp"

namespace autopeer {

const char* to_string(SaltPhase p) { return p == SaltPhase::Random ? "random" : "synchronized"; }

void SimConfig::validate() const {
  if (nodes < 2) throw ConfigError("nodes must be at least 2, got " + std::to_string(nodes));
  if (k < 1) throw ConfigError("k must be at least 1");
  if (query_delay < 1) throw ConfigError("query delay must be at least 1 tick");
  if (salt_interval < query_delay) throw ConfigError("salt interval must be at least the query delay");
  if (!(theta >= 0.0 && theta <= 1.0)) throw ConfigError("theta must lie in [0,1]");
  if (latency < 0) throw ConfigError("latency must be non-negative");
  if (max_ticks < 0) throw ConfigError("max ticks must be non-negative");
  if (chain_length < 2) throw ConfigError("chain length must be at least 2");
  if (max_verified_updates < 1) throw ConfigError("verification cap must be at least 1");
}

Simulation::Simulation(const SimConfig& config, const AttackPlan& attack)
    : config_(config), attack_(attack), rng_(config.seed) {
  config_.validate();
  if (attack_.attackers > 0 && attack_.victim >= config_.nodes) {
    throw ConfigError("victim must be an honest node index");
  }
  const std::size_t total = config_.nodes + attack_.attackers;
  if (total > std::numeric_limits<std::uint32_t>::max()) throw ConfigError("too many nodes");

  IdentityPool pool;
  std::vector<NodeId> ids;
  ids.reserve(total);
  for (std::size_t i = 0; i < total; ++i) ids.push_back(pool.draw(rng_));

  const ProtocolParams params = config_.protocol_params();
  nodes_.reserve(total);
  for (std::size_t i = 0; i < total; ++i) {
    nodes_.emplace_back(ids[i], ids, params, rng_);
    index_.emplace(ids[i], i);
  }
  seen_public_update_.assign(total, false);
  seen_private_update_.assign(total, false);

  const Tick period = config_.salt_interval;
  for (std::size_t i = 0; i < total; ++i) {
    const auto node = static_cast<std::uint32_t>(i);
    const Tick query_phase = static_cast<Tick>(rng_.below(static_cast<std::uint64_t>(config_.query_delay)));
    Tick public_phase = period;
    Tick private_phase = period;
    if (config_.salt_phase == SaltPhase::Random) {
      public_phase = static_cast<Tick>(rng_.below(static_cast<std::uint64_t>(period)));
      private_phase = static_cast<Tick>(rng_.below(static_cast<std::uint64_t>(period)));
    }
    schedule(query_phase, EventKind::Query, node);
    schedule(public_phase, EventKind::PublicSalt, node);
    schedule(private_phase, EventKind::PrivateSalt, node);
  }
}

void Simulation::schedule(Tick at, EventKind kind, std::uint32_t node, Message msg) {
  queue_.push(Event{at, next_seq_++, kind, node, std::move(msg)});
}

void Simulation::send(Message msg) {
  if (std::holds_alternative<PeeringDrop>(msg)) ++drops_this_tick_;
  const auto it = index_.find(message_recipient(msg));
  if (it == index_.end()) {
    ++metrics_.malformed_messages;
    return;
  }
  schedule(now_ + config_.latency, EventKind::Deliver, static_cast<std::uint32_t>(it->second), std::move(msg));
}

void Simulation::step() {
  while (!queue_.empty() && queue_.top().at <= now_) {
    Event ev = queue_.top();
    queue_.pop();
    dispatch(ev);
  }
  record_tick();
  ++now_;
}

void Simulation::run_until(Tick tick) {
  const Tick end = std::min(tick, config_.max_ticks);
  while (now_ < end) step();
}

void Simulation::dispatch(const Event& ev) {
  PeeringState& node = nodes_[ev.node];
  switch (ev.kind) {
    case EventKind::Query: {
      const auto req = node.poll(now_);
      if (req) send(*req);
      if (attack_.spam_victim && is_attacker(ev.node)) {
        // Every attacker request reaching the victim counts as spam; the
        // regular poll may already have targeted it this tick.
        const NodeId& victim = nodes_[attack_.victim].id();
        if (!req || req->to != victim) send(node.build_request(victim));
        ++attack_counters_.spam_sent;
      }
      schedule(now_ + config_.query_delay, EventKind::Query, ev.node);
      break;
    }
    case EventKind::PublicSalt:
      record_minimum(ev.node, Direction::Outbound);
      node.update_public_salt(rng_);
      if (!is_attacker(ev.node)) ++salt_updates_this_tick_;
      schedule(now_ + config_.salt_interval, EventKind::PublicSalt, ev.node);
      break;
    case EventKind::PrivateSalt:
      record_minimum(ev.node, Direction::Inbound);
      node.update_private_salt(rng_);
      if (!is_attacker(ev.node)) ++salt_updates_this_tick_;
      schedule(now_ + config_.salt_interval, EventKind::PrivateSalt, ev.node);
      break;
    case EventKind::Deliver:
      deliver(ev.message);
      break;
  }
}

void Simulation::deliver(const Message& msg) {
  PeeringState& node = nodes_[index_.at(message_recipient(msg))];
  try {
    if (const auto* req = std::get_if<PeeringRequest>(&msg)) {
      RequestOutcome outcome = node.handle_request(*req, config_.theta, now_);
      if (attack_.spam_victim && node.id() == nodes_[attack_.victim].id()) {
        const auto from = index_.find(req->from);
        if (from != index_.end() && is_attacker(from->second)) {
          attack_counters_.spam_eligible += outcome.eligible ? 1 : 0;
          attack_counters_.spam_accepted += outcome.response.accepted ? 1 : 0;
        }
      }
      send(outcome.response);
      if (outcome.drop) send(*outcome.drop);
    } else if (const auto* resp = std::get_if<PeeringResponse>(&msg)) {
      if (auto drop = node.handle_response(*resp, now_)) send(*drop);
    } else {
      node.handle_drop(std::get<PeeringDrop>(msg));
    }
  } catch (const ProtocolError&) {
    ++metrics_.malformed_messages;
  }
}

void Simulation::record_minimum(std::size_t node, Direction dir) {
  if (is_attacker(node)) return;
  auto& seen = dir == Direction::Outbound ? seen_public_update_ : seen_private_update_;
  // The epoch before a node's first update is truncated by its random phase.
  if (!seen[node]) {
    seen[node] = true;
    return;
  }
  const PeeringState& state = nodes_[node];
  const auto entries = dir == Direction::Outbound ? state.outbound() : state.inbound();
  if (entries.empty()) return;
  const auto best = std::min_element(entries.begin(), entries.end(),
                                     [](const NeighborEntry& a, const NeighborEntry& b) { return a.score < b.score; });
  const double score = best->score.value();
  auto& out = dir == Direction::Outbound ? metrics_.min_outbound : metrics_.min_inbound;
  out.push_back(EpochRecord{now_, node, score, score * static_cast<double>(config_.nodes)});
}

void Simulation::record_tick() {
  TickRecord rec;
  rec.tick = now_;
  std::size_t total_degree = 0;
  const std::size_t full = 2 * config_.k;
  for (std::size_t i = 0; i < config_.nodes; ++i) {
    const std::size_t d = nodes_[i].degree();
    total_degree += d;
    if (d == full) ++rec.nodes_with_2k;
  }
  rec.avg_neighbors = static_cast<double>(total_degree) / static_cast<double>(config_.nodes);
  rec.drops = drops_this_tick_;
  rec.salt_updates = salt_updates_this_tick_;
  metrics_.ticks.push_back(rec);
  drops_this_tick_ = 0;
  salt_updates_this_tick_ = 0;
}

std::vector<Edge> Simulation::topology() const {
  std::vector<Edge> edges;
  for (const PeeringState& node : nodes_) {
    for (const auto& e : node.outbound()) edges.push_back({node.id(), e.peer, Direction::Outbound, e.score});
    for (const auto& e : node.inbound()) edges.push_back({node.id(), e.peer, Direction::Inbound, e.score});
  }
  return edges;
}

MetricsSeries run(const SimConfig& config) {
  Simulation sim(config);
  sim.run_to_end();
  return sim.metrics();
}

std::vector<Edge> snapshot_topology(const SimConfig& config, Tick tick) {
  Simulation sim(config);
  sim.run_until(tick);
  return sim.topology();
}

}  // namespace autopeer
