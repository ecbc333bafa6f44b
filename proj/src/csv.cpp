#include "autopeer/csv.hpp"

#include <charconv>

#include "autopeer/errors.hpp"

namespace autopeer::csv {

std::string format(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

Writer::Writer(std::ostream& out, std::initializer_list<std::string_view> header) : out_(out), columns_(header.size()) {
  bool first = true;
  for (std::string_view h : header) {
    if (!first) out_ << ',';
    out_ << h;
    first = false;
  }
  out_ << '\n';
}

void Writer::row(const std::vector<std::string>& fields) {
  if (fields.size() != columns_) throw InvalidParameter("CSV row has the wrong number of fields");
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ << ',';
    out_ << fields[i];
  }
  out_ << '\n';
}

void write_metrics(std::ostream& out, const MetricsSeries& metrics) {
  Writer w(out, {"tick", "avg_neighbors", "nodes_with_2k", "drops"});
  for (const TickRecord& r : metrics.ticks) {
    w.row({std::to_string(r.tick), format(r.avg_neighbors), std::to_string(r.nodes_with_2k), std::to_string(r.drops)});
  }
}

void write_topology(std::ostream& out, std::span<const Edge> edges) {
  Writer w(out, {"owner", "peer", "direction", "score"});
  for (const Edge& e : edges) w.row({e.owner.hex(), e.peer.hex(), to_string(e.direction), format(e.score.value())});
}

void write_cdf(std::ostream& out, std::span<const CdfPoint> points) {
  Writer w(out, {"score", "empirical_cdf", "analytic_L_eq_k", "analytic_L_eq_4k"});
  for (const CdfPoint& p : points) {
    w.row({format(p.x), format(p.empirical), format(p.analytic_l_eq_k), format(p.analytic_l_eq_4k)});
  }
}

}  // namespace autopeer::csv
