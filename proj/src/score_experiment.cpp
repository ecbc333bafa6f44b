#include "autopeer/score_experiment.hpp"

#include <algorithm>

#include "autopeer/analytics.hpp"
#include "autopeer/errors.hpp"

namespace autopeer {

double empirical_cdf(std::span<const double> sorted, double x) {
  if (sorted.empty()) return 0.0;
  const auto upper = std::upper_bound(sorted.begin(), sorted.end(), x);
  return static_cast<double>(upper - sorted.begin()) / static_cast<double>(sorted.size());
}

ScoreDistribution score_distribution_experiment(const SimConfig& config, std::size_t epochs,
                                                std::size_t grid_points, double scaled_max) {
  if (epochs < 1) throw ConfigError("epochs must be at least 1");
  if (grid_points < 1) throw ConfigError("grid must have at least one point");
  SimConfig cfg = config;
  cfg.max_ticks = cfg.salt_interval * static_cast<Tick>(epochs + 1);
  const MetricsSeries metrics = run(cfg);

  ScoreDistribution out;
  for (const auto& r : metrics.min_inbound) out.min_inbound.push_back(r.score);
  for (const auto& r : metrics.min_outbound) out.min_outbound_scaled.push_back(r.scaled);
  std::sort(out.min_inbound.begin(), out.min_inbound.end());
  std::sort(out.min_outbound_scaled.begin(), out.min_outbound_scaled.end());

  const std::uint64_t k = cfg.k;
  for (std::size_t i = 1; i <= grid_points; ++i) {
    const double frac = static_cast<double>(i) / static_cast<double>(grid_points);
    const double x = frac;
    out.inbound_cdf.push_back({x, empirical_cdf(out.min_inbound, x), analytics::order_stat_cdf(1, k, x),
                               analytics::order_stat_cdf(1, 4 * k, x)});
    const double xs = frac * scaled_max;
    out.outbound_cdf.push_back({xs, empirical_cdf(out.min_outbound_scaled, xs),
                                analytics::limiting_outbound_cdf(xs, k, k),
                                analytics::limiting_outbound_cdf(xs, k, 4 * k)});
  }
  return out;
}

}  // namespace autopeer
