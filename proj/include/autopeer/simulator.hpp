#pragma once

#include <cstddef>
#include <cstdint>
#include <queue>
#include <unordered_map>
#include <vector>

#include "autopeer/protocol.hpp"

namespace autopeer {

enum class SaltPhase : std::uint8_t { Random, Synchronized };

const char* to_string(SaltPhase p);

struct SimConfig {
  std::size_t nodes = 100;   ///< honest node count N
  std::size_t k = 4;
  Tick salt_interval = 100;  ///< T, in ticks
  Tick query_delay = 1;      ///< d, in ticks
  double theta = 1.0;
  Tick latency = 1;
  Tick max_ticks = 5000;
  std::uint64_t seed = 1;
  SaltPhase salt_phase = SaltPhase::Random;
  std::size_t chain_length = kDefaultChainLength;
  std::uint32_t max_verified_updates = kDefaultMaxVerifiedUpdates;

  /// Throws ConfigError describing the first violated constraint.
  void validate() const;
  ProtocolParams protocol_params() const { return {k, max_verified_updates, chain_length}; }
};

struct TickRecord {
  Tick tick = 0;
  double avg_neighbors = 0.0;  ///< mean of |outbound| + |inbound| over honest nodes
  std::size_t nodes_with_2k = 0;
  std::size_t drops = 0;         ///< PeeringDrop messages emitted during the tick
  std::size_t salt_updates = 0;  ///< public and private, honest nodes

  friend bool operator==(const TickRecord&, const TickRecord&) = default;
};

/// Lowest neighbor score of one node, sampled just before one of its salt updates.
struct EpochRecord {
  Tick tick = 0;
  std::size_t node = 0;
  double score = 0.0;
  double scaled = 0.0;  ///< score * N

  friend bool operator==(const EpochRecord&, const EpochRecord&) = default;
};

struct MetricsSeries {
  std::vector<TickRecord> ticks;
  std::vector<EpochRecord> min_inbound;   ///< sampled before private-salt updates
  std::vector<EpochRecord> min_outbound;  ///< sampled before public-salt updates
  std::uint64_t malformed_messages = 0;

  friend bool operator==(const MetricsSeries&, const MetricsSeries&) = default;
};

struct Edge {
  NodeId owner;
  NodeId peer;
  Direction direction = Direction::Outbound;
  Score score;
};

/// Extra adversarial identities appended after the honest nodes.
struct AttackPlan {
  std::size_t attackers = 0;
  bool spam_victim = false;  ///< every attacker requests the victim each query tick
  std::size_t victim = 0;    ///< honest node index
};

struct AttackCounters {
  std::uint64_t spam_sent = 0;
  std::uint64_t spam_eligible = 0;  ///< passed verification and the victim's theta-test
  std::uint64_t spam_accepted = 0;
};

// Discrete-event engine. Integer ticks; events at one tick are processed in
// scheduling order. Every node starts with empty neighbor sets and knows
// every other node. Attack plans add nodes that are indistinguishable from
// honest ones to their peers.
class Simulation {
 public:
  explicit Simulation(const SimConfig& config, const AttackPlan& attack = {});

  /// Processes every event of the current tick, then records its metrics.
  void step();
  /// Processes ticks until `tick` ticks have elapsed (or max_ticks).
  void run_until(Tick tick);
  void run_to_end() { run_until(config_.max_ticks); }

  Tick now() const { return now_; }
  const SimConfig& config() const { return config_; }
  std::size_t honest_count() const { return config_.nodes; }
  std::size_t node_count() const { return nodes_.size(); }
  bool is_attacker(std::size_t index) const { return index >= config_.nodes; }
  const PeeringState& node(std::size_t index) const { return nodes_.at(index); }
  std::size_t index_of(const NodeId& id) const { return index_.at(id); }

  const MetricsSeries& metrics() const { return metrics_; }
  const AttackCounters& attack_counters() const { return attack_counters_; }

  /// Directed edge list, one entry per (owner, neighbor) pair.
  std::vector<Edge> topology() const;

 private:
  enum class EventKind : std::uint8_t { Query, PublicSalt, PrivateSalt, Deliver };
  struct Event {
    Tick at;
    std::uint64_t seq;
    EventKind kind;
    std::uint32_t node;
    Message message;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const { return a.at != b.at ? a.at > b.at : a.seq > b.seq; }
  };

  void schedule(Tick at, EventKind kind, std::uint32_t node, Message msg = PeeringDrop{});
  void send(Message msg);
  void dispatch(const Event& ev);
  void deliver(const Message& msg);
  void record_minimum(std::size_t node, Direction dir);
  void record_tick();

  SimConfig config_;
  AttackPlan attack_;
  Rng rng_;
  std::vector<PeeringState> nodes_;
  std::unordered_map<NodeId, std::size_t, NodeIdHash> index_;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::uint64_t next_seq_ = 0;
  Tick now_ = 0;

  std::vector<bool> seen_public_update_;
  std::vector<bool> seen_private_update_;
  std::size_t drops_this_tick_ = 0;
  std::size_t salt_updates_this_tick_ = 0;

  MetricsSeries metrics_;
  AttackCounters attack_counters_;
};

/// Runs a fresh simulation for config.max_ticks. Throws ConfigError first if invalid.
MetricsSeries run(const SimConfig& config);

/// Topology after `tick` ticks of a fresh simulation.
std::vector<Edge> snapshot_topology(const SimConfig& config, Tick tick);

}  // namespace autopeer
