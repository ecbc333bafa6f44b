#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "autopeer/rng.hpp"
#include "autopeer/simulator.hpp"

namespace autopeer {

struct McEstimate {
  double estimate = 0.0;
  double std_err = 0.0;  ///< sqrt(p(1-p)/n) at the estimate
  std::uint64_t successes = 0;
  std::uint64_t trials = 0;

  /// Standard error a Bernoulli(p) estimate over `trials` would have.
  double std_err_at(double p) const;
};

/// Each trial draws N_A attacker and L honest inbound scores, i.i.d. uniform,
/// and succeeds iff the k smallest all belong to the attacker.
McEstimate mc_inbound_takeover(std::uint64_t attackers, std::uint64_t honest_requests, std::uint64_t k,
                               std::uint64_t trials, Rng& rng);

/// Each trial draws N honest and N_A attacker outbound scores. The first
/// accepted honest request sits at rank Y = min of k-1 ranks sampled without
/// replacement from {1..L-1} (the L-th request is the k-th accept). Success
/// iff the attacker's k-th smallest score lies below the honest Y-th smallest.
/// Requires 2 <= k <= L <= N; throws InvalidParameter otherwise.
McEstimate mc_outbound_takeover(std::uint64_t attackers, std::uint64_t honest, std::uint64_t honest_requests,
                                std::uint64_t k, std::uint64_t trials, Rng& rng);

/// `slots` peers chosen uniformly without replacement from N + N_A
/// indistinguishable nodes; success iff all are attackers.
McEstimate mc_random_choice_eclipse(std::uint64_t honest, std::uint64_t attackers, std::uint64_t slots,
                                    std::uint64_t trials, Rng& rng);

enum class AttackStrategy : std::uint8_t { SpamInbound, ProtocolFollowing };

const char* to_string(AttackStrategy s);

struct AttackConfig {
  SimConfig sim;
  std::size_t attackers = 0;
  AttackStrategy strategy = AttackStrategy::SpamInbound;
  std::size_t victim = 0;  ///< honest node index
  std::size_t trials = 1;  ///< trial i runs with seed derive_seed(sim.seed, i)
  Tick measure_from = 0;   ///< first tick at which the victim is inspected
};

struct EclipseStats {
  std::size_t trials = 0;
  std::size_t eclipsed_trials = 0;         ///< eclipsed at one or more measurement ticks
  double eclipse_fraction = 0.0;           ///< eclipsed_trials / trials
  double eclipsed_tick_fraction = 0.0;     ///< over all measurement ticks of all trials
  double inbound_takeover_fraction = 0.0;  ///< ticks with all k inbound slots attacker-held
  std::vector<std::optional<Tick>> time_to_eclipse;
  std::uint64_t spam_sent = 0;
  std::uint64_t spam_eligible = 0;
  std::uint64_t spam_accepted = 0;

  /// spam_eligible / spam_sent, the per-request chance of passing the victim's checks.
  double eligible_rate() const;
};

/// An eclipse is all 2k victim slots held by attacker identities at once.
/// Throws ConfigError for an invalid configuration.
EclipseStats run_eclipse_simulation(const AttackConfig& attack);

}  // namespace autopeer
