#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "autopeer/simulator.hpp"

namespace autopeer {

struct CdfPoint {
  double x = 0.0;
  double empirical = 0.0;
  double analytic_l_eq_k = 0.0;
  double analytic_l_eq_4k = 0.0;
};

struct ScoreDistribution {
  std::vector<double> min_inbound;          ///< one sample per node per complete private-salt epoch
  std::vector<double> min_outbound_scaled;  ///< lowest outbound score times N, per public-salt epoch
  std::vector<CdfPoint> inbound_cdf;        ///< reference: min of L uniforms, L = k and 4k
  std::vector<CdfPoint> outbound_cdf;       ///< reference: limiting outbound CDF, L = k and 4k
};

/// Fraction of samples <= x. `sorted` must be ascending.
double empirical_cdf(std::span<const double> sorted, double x);

/// Runs `config` for epochs + 1 salt intervals and samples each node's
/// lowest neighbor scores just before its salt updates (skipping the first,
/// phase-truncated epoch). The inbound CDF is tabulated at `grid_points`
/// evenly spaced x in (0,1]; the scaled outbound CDF on (0, scaled_max].
ScoreDistribution score_distribution_experiment(const SimConfig& config, std::size_t epochs,
                                                std::size_t grid_points = 100, double scaled_max = 20.0);

}  // namespace autopeer
