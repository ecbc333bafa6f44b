#include "autopeer/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "autopeer/errors.hpp"

namespace autopeer {

namespace {

McEstimate finish(std::uint64_t successes, std::uint64_t trials) {
  McEstimate e;
  e.successes = successes;
  e.trials = trials;
  e.estimate = trials == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(trials);
  e.std_err = e.std_err_at(e.estimate);
  return e;
}

}  // namespace

double McEstimate::std_err_at(double p) const {
  if (trials == 0) return 0.0;
  return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

McEstimate mc_inbound_takeover(std::uint64_t attackers, std::uint64_t honest_requests, std::uint64_t k,
                               std::uint64_t trials, Rng& rng) {
  if (k < 1) throw InvalidParameter("k must be at least 1");
  if (trials == 0) throw InvalidParameter("trials must be positive");
  std::vector<double> attacker_scores(attackers);
  std::uint64_t successes = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    for (double& s : attacker_scores) s = rng.uniform01();
    double honest_min = 1.0;
    for (std::uint64_t i = 0; i < honest_requests; ++i) honest_min = std::min(honest_min, rng.uniform01());
    if (attackers < k) continue;
    // The k smallest are all attackers iff the k-th smallest attacker score
    // beats every honest score.
    std::nth_element(attacker_scores.begin(), attacker_scores.begin() + static_cast<std::ptrdiff_t>(k - 1),
                     attacker_scores.end());
    if (attacker_scores[k - 1] < honest_min) ++successes;
  }
  return finish(successes, trials);
}

McEstimate mc_outbound_takeover(std::uint64_t attackers, std::uint64_t honest, std::uint64_t honest_requests,
                                std::uint64_t k, std::uint64_t trials, Rng& rng) {
  if (k < 2 || honest_requests < k) throw InvalidParameter("outbound takeover requires 2 <= k <= L");
  if (honest_requests > honest) throw InvalidParameter("outbound takeover requires L <= N");
  if (trials == 0) throw InvalidParameter("trials must be positive");

  std::vector<double> attacker_scores(attackers);
  std::vector<double> honest_scores(honest);
  std::vector<std::uint64_t> ranks(honest_requests - 1);
  std::uint64_t successes = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    for (double& s : honest_scores) s = rng.uniform01();
    for (double& s : attacker_scores) s = rng.uniform01();

    // Partial Fisher-Yates: the first k-1 slots become a uniform sample.
    std::iota(ranks.begin(), ranks.end(), std::uint64_t{1});
    std::uint64_t first_accepted = honest_requests;
    for (std::uint64_t i = 0; i + 1 < k; ++i) {
      const std::uint64_t j = i + rng.below(ranks.size() - i);
      std::swap(ranks[i], ranks[j]);
      first_accepted = std::min(first_accepted, ranks[i]);
    }
    if (attackers < k) continue;

    const auto y = static_cast<std::ptrdiff_t>(first_accepted - 1);
    std::nth_element(honest_scores.begin(), honest_scores.begin() + y, honest_scores.end());
    std::nth_element(attacker_scores.begin(), attacker_scores.begin() + static_cast<std::ptrdiff_t>(k - 1),
                     attacker_scores.end());
    if (attacker_scores[k - 1] < honest_scores[static_cast<std::size_t>(y)]) ++successes;
  }
  return finish(successes, trials);
}

McEstimate mc_random_choice_eclipse(std::uint64_t honest, std::uint64_t attackers, std::uint64_t slots,
                                    std::uint64_t trials, Rng& rng) {
  const std::uint64_t total = honest + attackers;
  if (slots > total) throw InvalidParameter("more slots than nodes");
  if (trials == 0) throw InvalidParameter("trials must be positive");
  std::uint64_t successes = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    // Sequential draws without replacement; attackers occupy indices [0, N_A).
    std::uint64_t remaining_attackers = attackers;
    bool all = true;
    for (std::uint64_t s = 0; s < slots; ++s) {
      if (rng.below(total - s) >= remaining_attackers) {
        all = false;
        break;
      }
      --remaining_attackers;
    }
    if (all) ++successes;
  }
  return finish(successes, trials);
}

const char* to_string(AttackStrategy s) {
  return s == AttackStrategy::SpamInbound ? "spam_inbound" : "protocol_following";
}

double EclipseStats::eligible_rate() const {
  return spam_sent == 0 ? 0.0 : static_cast<double>(spam_eligible) / static_cast<double>(spam_sent);
}

EclipseStats run_eclipse_simulation(const AttackConfig& attack) {
  attack.sim.validate();
  if (attack.trials < 1) throw ConfigError("trials must be at least 1");
  if (attack.victim >= attack.sim.nodes) throw ConfigError("victim must be an honest node index");

  EclipseStats stats;
  stats.trials = attack.trials;
  std::uint64_t measured = 0;
  std::uint64_t eclipsed_ticks = 0;
  std::uint64_t inbound_ticks = 0;

  for (std::size_t trial = 0; trial < attack.trials; ++trial) {
    SimConfig cfg = attack.sim;
    cfg.seed = Rng::derive_seed(attack.sim.seed, trial);
    AttackPlan plan{attack.attackers, attack.strategy == AttackStrategy::SpamInbound, attack.victim};
    Simulation sim(cfg, plan);

    const std::size_t k = cfg.k;
    auto all_attackers = [&](std::span<const NeighborEntry> entries) {
      return entries.size() == k && std::all_of(entries.begin(), entries.end(), [&](const NeighborEntry& e) {
               return sim.is_attacker(sim.index_of(e.peer));
             });
    };

    std::optional<Tick> first;
    while (sim.now() < cfg.max_ticks) {
      const Tick tick = sim.now();
      sim.step();
      if (tick < attack.measure_from) continue;
      const PeeringState& victim = sim.node(attack.victim);
      ++measured;
      const bool inbound_taken = all_attackers(victim.inbound());
      if (inbound_taken) ++inbound_ticks;
      if (inbound_taken && all_attackers(victim.outbound())) {
        ++eclipsed_ticks;
        if (!first) first = tick;
      }
    }
    stats.time_to_eclipse.push_back(first);
    if (first) ++stats.eclipsed_trials;
    stats.spam_sent += sim.attack_counters().spam_sent;
    stats.spam_eligible += sim.attack_counters().spam_eligible;
    stats.spam_accepted += sim.attack_counters().spam_accepted;
  }

  stats.eclipse_fraction = static_cast<double>(stats.eclipsed_trials) / static_cast<double>(stats.trials);
  if (measured > 0) {
    stats.eclipsed_tick_fraction = static_cast<double>(eclipsed_ticks) / static_cast<double>(measured);
    stats.inbound_takeover_fraction = static_cast<double>(inbound_ticks) / static_cast<double>(measured);
  }
  return stats;
}

}  // namespace autopeer
