// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "autopeer/adversary.hpp"
#include "autopeer/analytics.hpp"
#include "autopeer/identity.hpp"
#include "autopeer/oracles.hpp"
#include "autopeer/score_experiment.hpp"
#include "autopeer/scoring.hpp"
#include "autopeer/simulator.hpp"
#include "trace_harness.hpp"

using namespace autopeer;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

SimConfig network(Tick salt_interval, std::uint64_t seed) {
  SimConfig c;
  c.nodes = 100;
  c.k = 4;
  c.theta = 1.0;
  c.salt_interval = salt_interval;
  c.max_ticks = 5000;
  c.seed = seed;
  return c;
}

constexpr Tick kMeasureFrom = 500;
constexpr std::uint64_t kSeeds[] = {1, 2, 3, 4, 5};

Verdict convergence() {
  double avg_sum = 0;
  std::size_t ticks = 0, good = 0, worst_full = 1000;
  for (std::uint64_t seed : kSeeds) {
    const MetricsSeries m = run(network(100, seed));
    for (const auto& r : m.ticks) {
      if (r.tick < kMeasureFrom) continue;
      avg_sum += r.avg_neighbors;
      ++ticks;
      good += r.nodes_with_2k >= 90;
      worst_full = std::min(worst_full, r.nodes_with_2k);
    }
  }
  const double avg = avg_sum / static_cast<double>(ticks);
  const double frac = static_cast<double>(good) / static_cast<double>(ticks);
  return {avg >= 7.5 && frac >= 0.8,
          fmt("avg_neighbors=%.3f (need >=7.5), ticks with >=90 full nodes=%.1f%% (need >=80%%), min full=%zu", avg,
              100 * frac, worst_full)};
}

Verdict salt_frequency() {
  std::vector<double> avgs, drops;
  for (Tick t : {5, 30, 100, 300}) {
    double a = 0, d = 0;
    std::size_t n = 0;
    for (std::uint64_t seed : kSeeds) {
      for (const auto& r : run(network(t, seed)).ticks) {
        if (r.tick < kMeasureFrom) continue;
        a += r.avg_neighbors;
        d += static_cast<double>(r.drops);
        ++n;
      }
    }
    avgs.push_back(a / static_cast<double>(n));
    drops.push_back(d / static_cast<double>(n));
  }
  bool ok = true;
  for (std::size_t i = 1; i < avgs.size(); ++i) ok = ok && avgs[i] >= avgs[i - 1] && drops[i] <= drops[i - 1];
  return {ok, fmt("T=5,30,100,300 avg=%.3f,%.3f,%.3f,%.3f drops/tick=%.3f,%.3f,%.3f,%.3f", avgs[0], avgs[1], avgs[2],
                  avgs[3], drops[0], drops[1], drops[2], drops[3])};
}

Verdict inbound_takeover() {
  Rng rng(31);
  double worst = 0;
  bool ok = true;
  for (std::uint64_t na : {5, 20, 80}) {
    for (std::uint64_t l : {5, 20, 80}) {
      const double p = analytics::inbound_takeover_prob(na, l, 4);
      const McEstimate mc = mc_inbound_takeover(na, l, 4, 1000000, rng);
      const double se = mc.std_err_at(p);
      const double z = se > 0 ? std::fabs(mc.estimate - p) / se : (mc.estimate == p ? 0.0 : 1e9);
      worst = std::max(worst, z);
      ok = ok && z <= 3;
    }
  }
  const auto exact = oracles::enumerate_inbound_takeover(4, 4, 4);
  const bool exact_ok = exact.numerator * 70 == exact.denominator &&
                        std::fabs(analytics::inbound_takeover_prob(4, 4, 4) - 1.0 / 70) < 1e-15;
  return {ok && exact_ok, fmt("max |z|=%.2f over 9 grid points (need <=3), enumeration (4,4,4)=%llu/%llu",
                              worst, static_cast<unsigned long long>(exact.numerator),
                              static_cast<unsigned long long>(exact.denominator))};
}

Verdict outbound_takeover() {
  Rng rng(41);
  std::string detail;
  bool ok = true;
  for (auto [na, n, l, k] : {std::array<std::uint64_t, 4>{20, 50, 10, 4}, {2, 2, 2, 2}}) {
    const double p = analytics::outbound_takeover_prob(na, n, l, k);
    const McEstimate mc = mc_outbound_takeover(na, n, l, k, 1000000, rng);
    const double z = std::fabs(mc.estimate - p) / mc.std_err_at(p);
    ok = ok && z <= 3;
    detail += fmt("(%llu,%llu,%llu,%llu) p=%.6f mc=%.6f |z|=%.2f; ", static_cast<unsigned long long>(na),
                  static_cast<unsigned long long>(n), static_cast<unsigned long long>(l),
                  static_cast<unsigned long long>(k), p, mc.estimate, z);
  }
  const auto exact = oracles::enumerate_outbound_takeover(2, 2, 2, 2);
  const bool exact_ok = exact.numerator * 6 == exact.denominator &&
                        std::fabs(analytics::outbound_takeover_prob(2, 2, 2, 2) - 1.0 / 6) < 1e-15;
  detail += fmt("enumeration (2,2,2,2)=%llu/%llu", static_cast<unsigned long long>(exact.numerator),
                static_cast<unsigned long long>(exact.denominator));
  return {ok && exact_ok, detail};
}

Verdict order_statistics() {
  Rng rng(51);
  double worst_mean = 0, worst_cdf = 0;
  for (std::uint64_t L : {4, 9, 19}) {
    double sum = 0;
    for (int s = 0; s < 100000; ++s) {
      double m = 1.0;
      for (std::uint64_t i = 0; i < L; ++i) m = std::min(m, rng.uniform01());
      sum += m;
    }
    worst_mean = std::max(worst_mean, std::fabs(sum / 100000 - 1.0 / static_cast<double>(L + 1)));
    for (int i = 0; i <= 100; ++i) {
      const double x = i / 100.0;
      const double numeric = oracles::integrate([&](double t) { return analytics::order_stat_pdf(1, L, t); }, 0, x);
      worst_cdf = std::max(worst_cdf, std::fabs(numeric - (1 - std::pow(1 - x, static_cast<double>(L)))));
      worst_cdf = std::max(worst_cdf,
                           std::fabs(analytics::order_stat_cdf(1, L, x) - (1 - std::pow(1 - x, static_cast<double>(L)))));
    }
  }
  return {worst_mean <= 0.005 && worst_cdf <= 1e-8,
          fmt("max mean error=%.5f (need <=0.005), max CDF error=%.2e (need <=1e-8)", worst_mean, worst_cdf)};
}

Verdict limiting_cdf() {
  double worst = 0;
  for (int i = 0; i <= 200; ++i) {
    const double xb = i * 0.1;
    worst = std::max(worst, std::fabs(analytics::finite_outbound_cdf(xb / 1e4, 10000, 4, 16) -
                                      (1 - std::exp(-xb * 4.0 / 16.0))));
  }
  return {worst <= 1e-3, fmt("max deviation=%.2e over 201 points (need <=1e-3)", worst)};
}

Verdict theta_rate() {
  Rng rng(71);
  const NodeId target = new_identity(rng);
  int pass = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    Salt s;
    rng.fill(s.bytes);
    pass += theta_test(outbound_score(new_identity(rng), target, s), 0.1);
  }
  const double frac = static_cast<double>(pass) / n;

  auto eligible = [](double theta) {
    AttackConfig a;
    a.sim.nodes = 50;
    a.sim.salt_interval = 100;
    a.sim.max_ticks = 2000;
    a.sim.theta = theta;
    a.sim.seed = 77;
    a.attackers = 50;
    a.trials = 5;
    a.measure_from = 200;
    return run_eclipse_simulation(a).eligible_rate();
  };
  const double low = eligible(0.1), high = eligible(1.0);
  const double ratio = low / high;
  const bool ok = frac >= 0.097 && frac <= 0.103 && std::fabs(ratio - 0.1) <= 0.015;
  return {ok, fmt("pass fraction=%.4f (need [0.097,0.103]), simulated eligible-rate ratio=%.4f (need 0.1 +-15%%)",
                  frac, ratio)};
}

Verdict score_distribution() {
  std::vector<ScoreDistribution> runs;
  std::string detail;
  bool ok = true;
  for (std::size_t n : {50, 100}) {
    SimConfig c;
    c.nodes = n;
    c.k = 4;
    c.salt_interval = static_cast<Tick>(30 * n);
    c.seed = 81;
    runs.push_back(score_distribution_experiment(c, 5, 100, 20.0));
    const ScoreDistribution& d = runs.back();
    // Band widened by the 95% DKW bound for the sample size.
    const double eps = std::sqrt(std::log(2 / 0.05) / (2.0 * static_cast<double>(d.min_inbound.size())));
    std::size_t inside = 0;
    for (const auto& p : d.inbound_cdf) {
      const double lo = std::min(p.analytic_l_eq_k, p.analytic_l_eq_4k);
      const double hi = std::max(p.analytic_l_eq_k, p.analytic_l_eq_4k);
      inside += p.empirical >= lo - eps && p.empirical <= hi + eps;
    }
    const double frac = static_cast<double>(inside) / static_cast<double>(d.inbound_cdf.size());
    ok = ok && frac >= 0.9;
    detail += fmt("N=%zu inbound in band %.0f%% (n=%zu, eps=%.3f); ", n, 100 * frac, d.min_inbound.size(), eps);
  }
  double sup = 0;
  for (std::size_t i = 0; i < runs[0].outbound_cdf.size(); ++i) {
    sup = std::max(sup, std::fabs(runs[0].outbound_cdf[i].empirical - runs[1].outbound_cdf[i].empirical));
  }
  ok = ok && sup <= 0.1;
  detail += fmt("scaled outbound sup-norm=%.3f (need <=0.1)", sup);
  return {ok, detail};
}

Verdict invariants() {
  std::uint64_t events = 0, accepts = 0, evictions = 0;
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    const test::TraceReport r = test::random_trace(seed);
    if (!r.violation.empty()) return {false, fmt("trace %llu: %s", static_cast<unsigned long long>(seed), r.violation.c_str())};
    events += r.events;
    accepts += r.accepts;
    evictions += r.evictions;
  }
  return {true, fmt("10000 traces, %llu events, %llu accepts, %llu evictions, no violations",
                    static_cast<unsigned long long>(events), static_cast<unsigned long long>(accepts),
                    static_cast<unsigned long long>(evictions))};
}

Verdict hash_chain() {
  std::size_t vectors = 0;
  bool ok = true;
  for (const auto& v : oracles::sha256_vectors()) {
    ok = ok && to_hex(sha256(v.input)) == v.sha256_hex;
    ++vectors;
  }
  HashChain z = HashChain::create(Bytes32{}, 4);
  ok = ok && to_hex(z.current().bytes) == "12771355e46cd47c71ed1721fd5319b383cca3a1f9fce3aa1c8cd3bd37af20d7";
  ok = ok && to_hex(z.advance().bytes) == "2b32db6c2c0a6235fb1397e8225ea85e0f0e6e8c7b126d0016ccbde0e667151e";
  ok = ok && to_hex(z.advance().bytes) == "66687aadf862bd776c8fc18b8e9f8e20089714856ee233b3902a591d0d5f2925";

  Rng rng(101);
  int honest = 0, tamper_caught = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    Bytes32 seed{};
    rng.fill(seed);
    const std::size_t len = 2 + rng.below(30);
    HashChain c = HashChain::create(seed, len);
    const auto m = static_cast<std::uint32_t>(rng.below(len));
    const Salt old = c.current();
    for (std::uint32_t i = 0; i < m; ++i) c.advance();
    Salt now = c.current();
    honest += verify_salt(now, old, m, 64);
    const std::size_t bit = rng.below(256);
    now.bytes[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    tamper_caught += !verify_salt(now, old, m, 64);
  }
  ok = ok && honest == 1000 && tamper_caught == 1000;
  return {ok, fmt("%zu digest vectors + chain goldens, honest %d/1000, tamper rejected %d/1000", vectors, honest,
                  tamper_caught)};
}

Verdict eclipse_baseline() {
  const double h = analytics::all_slots_attacker_prob(1000, 500, 4);
  const double oracle = oracles::hypergeometric_all_attackers(1000, 500, 4);
  const double bound = analytics::eclipse_lower_bound(0.5, 4);
  Rng rng(111);
  const McEstimate mc = mc_random_choice_eclipse(1000, 500, 4, 1000000, rng);
  const double z = std::fabs(mc.estimate - h) / mc.std_err_at(h);
  const bool ok = std::fabs(h / bound - 1) <= 0.1 && std::fabs(h - oracle) <= 1e-12 && z <= 3;
  return {ok, fmt("hypergeometric=%.6f bound=%.6f rel diff=%.2f%%, mc=%.6f |z|=%.2f", h, bound,
                  100 * std::fabs(h / bound - 1), mc.estimate, z)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"convergence", convergence},
      {"salt frequency", salt_frequency},
      {"inbound takeover", inbound_takeover},
      {"outbound takeover", outbound_takeover},
      {"order statistics", order_statistics},
      {"limiting outbound CDF", limiting_cdf},
      {"theta-test rate", theta_rate},
      {"score distribution", score_distribution},
      {"protocol invariants", invariants},
      {"hash chain", hash_chain},
      {"eclipse baseline", eclipse_baseline},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s [%zu] %s: %s (%.1fs)\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, v.detail.c_str(),
                secs);
    std::fflush(stdout);
    failed += !v.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
