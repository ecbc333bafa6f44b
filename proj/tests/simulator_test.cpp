#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "autopeer/errors.hpp"
#include "autopeer/score_experiment.hpp"
#include "autopeer/simulator.hpp"

namespace autopeer {
namespace {

SimConfig small(std::size_t nodes, Tick ticks, Tick salt_interval, std::uint64_t seed = 1) {
  SimConfig c;
  c.nodes = nodes;
  c.max_ticks = ticks;
  c.salt_interval = salt_interval;
  c.seed = seed;
  return c;
}

double mean_avg_neighbors(const MetricsSeries& m, Tick from) {
  double sum = 0;
  std::size_t n = 0;
  for (const auto& r : m.ticks) {
    if (r.tick < from) continue;
    sum += r.avg_neighbors;
    ++n;
  }
  return sum / static_cast<double>(n);
}

TEST(SimConfig, Validation) {
  SimConfig c;
  EXPECT_NO_THROW(c.validate());
  auto bad = [](auto mutate) {
    SimConfig c;
    mutate(c);
    EXPECT_THROW(c.validate(), ConfigError);
  };
  bad([](SimConfig& c) { c.nodes = 1; });
  bad([](SimConfig& c) { c.k = 0; });
  bad([](SimConfig& c) { c.query_delay = 0; });
  bad([](SimConfig& c) { c.salt_interval = 0; });
  bad([](SimConfig& c) { c.theta = 1.5; });
  bad([](SimConfig& c) { c.theta = -0.1; });
  bad([](SimConfig& c) { c.latency = -1; });
  bad([](SimConfig& c) { c.max_ticks = -1; });
  bad([](SimConfig& c) { c.chain_length = 1; });
  SimConfig d;
  d.query_delay = 5;
  d.salt_interval = 4;
  EXPECT_THROW(d.validate(), ConfigError);
  EXPECT_THROW(run(d), ConfigError);
}

TEST(Simulator, TwoNodesConnect) {
  SimConfig c = small(2, 200, 50);
  c.k = 1;
  const MetricsSeries m = run(c);
  ASSERT_EQ(m.ticks.size(), 200u);
  // Disjoint in/out sets leave room for one edge: each node ends up with a
  // single neighbor, seen once from each end.
  for (std::size_t t = 10; t < m.ticks.size(); ++t) EXPECT_EQ(m.ticks[t].avg_neighbors, 1.0);
  const auto edges = snapshot_topology(c, 200);
  ASSERT_EQ(edges.size(), 2u);
  EXPECT_EQ(edges[0].owner, edges[1].peer);
  EXPECT_NE(edges[0].direction, edges[1].direction);
}

TEST(Simulator, EmptyAtTickZero) {
  EXPECT_TRUE(snapshot_topology(small(20, 100, 50), 0).empty());
}

TEST(Simulator, Deterministic) {
  const SimConfig c = small(40, 600, 30, 17);
  EXPECT_EQ(run(c), run(c));
  SimConfig other = c;
  other.seed = 18;
  EXPECT_NE(run(c).ticks, run(other).ticks);
}

TEST(Simulator, CapacityAndConsistencyAfterSettling) {
  // With salts effectively frozen the network settles and no messages remain in flight.
  SimConfig c = small(60, 1500, 1000000);
  Simulation sim(c);
  sim.run_to_end();
  for (std::size_t i = 0; i < sim.node_count(); ++i) {
    EXPECT_TRUE(sim.node(i).check_invariants().empty());
  }
  for (const Edge& e : sim.topology()) {
    const auto other = sim.node(sim.index_of(e.peer)).direction_of(e.owner);
    ASSERT_TRUE(other);
    EXPECT_NE(*other, e.direction);
  }
}

TEST(Simulator, CapacityUnderChurn) {
  Simulation sim(small(80, 2000, 10, 3));
  for (int t = 0; t < 2000; ++t) {
    sim.step();
    if (t % 50 == 0) {
      for (std::size_t i = 0; i < sim.node_count(); ++i) {
        ASSERT_TRUE(sim.node(i).check_invariants().empty()) << "tick " << t;
      }
    }
  }
  for (const auto& r : sim.metrics().ticks) {
    EXPECT_GE(r.avg_neighbors, 0.0);
    EXPECT_LE(r.avg_neighbors, 8.0);
    EXPECT_LE(r.nodes_with_2k, 80u);
  }
}

TEST(Simulator, LivenessWithoutSaltUpdates) {
  for (std::size_t n : {20, 200}) {
    Simulation sim(small(n, 3000, 1000000, n));
    sim.run_to_end();
    std::size_t full = 0;
    for (std::size_t i = 0; i < n; ++i) full += sim.node(i).outbound().size() == 4;
    EXPECT_EQ(full, n) << "N=" << n;
  }
}

TEST(Simulator, SaltUpdatesSpreadOut) {
  const SimConfig c = small(100, 3000, 100);
  const MetricsSeries m = run(c);
  std::size_t max_updates = 0, total = 0;
  for (const auto& r : m.ticks) {
    max_updates = std::max(max_updates, r.salt_updates);
    total += r.salt_updates;
  }
  // Two salts per node per T ticks: 2 updates per tick on average.
  EXPECT_NEAR(static_cast<double>(total) / 3000.0, 2.0, 0.1);
  EXPECT_LE(max_updates, 12u);

  SimConfig sync = c;
  sync.salt_phase = SaltPhase::Synchronized;
  std::size_t sync_max = 0;
  for (const auto& r : run(sync).ticks) sync_max = std::max(sync_max, r.salt_updates);
  EXPECT_EQ(sync_max, 200u);
}

TEST(Simulator, FrequentSaltUpdatesCostNeighbors) {
  double prev = 0;
  for (Tick t : {5, 30, 100}) {
    const double avg = mean_avg_neighbors(run(small(100, 2000, t, 5)), 500);
    EXPECT_GT(avg, prev) << "T=" << t;
    prev = avg;
  }
}

TEST(Simulator, EpochRecordsSampleBeforeUpdates) {
  const SimConfig c = small(30, 1000, 100);
  const MetricsSeries m = run(c);
  EXPECT_FALSE(m.min_inbound.empty());
  EXPECT_FALSE(m.min_outbound.empty());
  for (const auto& r : m.min_outbound) {
    EXPECT_GE(r.score, 0.0);
    EXPECT_LT(r.score, 1.0);
    EXPECT_DOUBLE_EQ(r.scaled, r.score * 30);
    EXPECT_GE(r.tick, 100);  // first, phase-truncated epoch skipped
  }
  EXPECT_EQ(m.malformed_messages, 0u);
}

TEST(ScoreExperiment, CdfShape) {
  SimConfig c = small(30, 0, 900);
  const ScoreDistribution d = score_distribution_experiment(c, 2, 50, 20.0);
  ASSERT_EQ(d.inbound_cdf.size(), 50u);
  ASSERT_EQ(d.outbound_cdf.size(), 50u);
  EXPECT_FALSE(d.min_inbound.empty());
  for (const auto* cdf : {&d.inbound_cdf, &d.outbound_cdf}) {
    double prev = 0;
    for (const auto& p : *cdf) {
      EXPECT_GE(p.empirical, prev);
      EXPECT_LE(p.empirical, 1.0);
      for (double a : {p.analytic_l_eq_k, p.analytic_l_eq_4k}) {
        EXPECT_GE(a, 0.0);
        EXPECT_LE(a, 1.0);
      }
      prev = p.empirical;
    }
  }
  // More inbound competitors push the lowest inbound score down; more
  // outbound requests mean a lower acceptance rate and a higher lowest score.
  for (const auto& p : d.inbound_cdf) EXPECT_GE(p.analytic_l_eq_4k + 1e-12, p.analytic_l_eq_k);
  for (const auto& p : d.outbound_cdf) EXPECT_GE(p.analytic_l_eq_k + 1e-12, p.analytic_l_eq_4k);
  EXPECT_DOUBLE_EQ(d.inbound_cdf.back().x, 1.0);
  EXPECT_DOUBLE_EQ(d.inbound_cdf.back().empirical, 1.0);
}

TEST(ScoreExperiment, EmpiricalCdf) {
  const std::vector<double> v{0.1, 0.2, 0.2, 0.7};
  EXPECT_EQ(empirical_cdf(v, 0.0), 0.0);
  EXPECT_EQ(empirical_cdf(v, 0.2), 0.75);
  EXPECT_EQ(empirical_cdf(v, 1.0), 1.0);
  EXPECT_EQ(empirical_cdf({}, 0.5), 0.0);
}

}  // namespace
}  // namespace autopeer
