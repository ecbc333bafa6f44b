#pragma once

#include <initializer_list>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "autopeer/score_experiment.hpp"
#include "autopeer/simulator.hpp"

namespace autopeer::csv {

/// Shortest round-trip representation, '.' decimal separator regardless of locale.
std::string format(double value);

// Comma-separated rows, LF line endings. Fields are written as given.
class Writer {
 public:
  Writer(std::ostream& out, std::initializer_list<std::string_view> header);
  void row(const std::vector<std::string>& fields);

 private:
  std::ostream& out_;
  std::size_t columns_;
};

/// tick,avg_neighbors,nodes_with_2k,drops
void write_metrics(std::ostream& out, const MetricsSeries& metrics);
/// owner,peer,direction,score
void write_topology(std::ostream& out, std::span<const Edge> edges);
/// score,empirical_cdf,analytic_L_eq_k,analytic_L_eq_4k
void write_cdf(std::ostream& out, std::span<const CdfPoint> points);

}  // namespace autopeer::csv
