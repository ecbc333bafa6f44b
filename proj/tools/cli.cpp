#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "autopeer/adversary.hpp"
#include "autopeer/analytics.hpp"
#include "autopeer/csv.hpp"
#include "autopeer/errors.hpp"
#include "autopeer/identity.hpp"
#include "autopeer/oracles.hpp"
#include "autopeer/score_experiment.hpp"
#include "autopeer/scoring.hpp"
#include "autopeer/simulator.hpp"

#ifndef AUTOPEER_VERSION
#define AUTOPEER_VERSION "0.0.0"
#endif

namespace autopeer::cli {

namespace fs = std::filesystem;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

void close_output(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

// Flat key=value manifest listing every resolved option of the subcommand.
void write_manifest(const fs::path& path, const CLI::App& sub, const std::vector<fs::path>& artifacts) {
  std::ofstream out = open_output(path);
  out << "tool=autopeer\n";
  out << "version=" << AUTOPEER_VERSION << "\n";
  out << "subcommand=" << sub.get_name() << "\n";
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || name == "help" || name == "h") continue;
    const std::string value = opt->count() > 0 ? join(opt->results(), ',') : opt->get_default_str();
    out << "arg." << name << "=" << value << "\n";
  }
  for (const fs::path& a : artifacts) out << "artifact=" << a.generic_string() << "\n";
  close_output(out, path);
}

void add_sim_flags(CLI::App* sub, SimConfig& cfg, std::string& phase) {
  sub->add_option("--nodes", cfg.nodes, "Honest node count N");
  sub->add_option("--k", cfg.k, "Neighbor cap per direction");
  sub->add_option("--salt-interval", cfg.salt_interval, "Salt update interval T in ticks");
  sub->add_option("--query-delay", cfg.query_delay, "Ticks between outbound queries d");
  sub->add_option("--theta", cfg.theta, "Theta-test threshold (1 disables)");
  sub->add_option("--latency", cfg.latency, "Message latency in ticks");
  sub->add_option("--ticks", cfg.max_ticks, "Simulated ticks");
  sub->add_option("--seed", cfg.seed, "Random seed");
  sub->add_option("--salt-phase", phase, "random or synchronized")->check(CLI::IsMember({"random", "synchronized"}));
  sub->add_option("--chain-length", cfg.chain_length, "Public-salt hash chain length");
  sub->add_option("--max-verified-updates", cfg.max_verified_updates, "Verifier cap on salt updates");
}

SimConfig resolve_sim(SimConfig cfg, const std::string& phase) {
  cfg.salt_phase = phase == "synchronized" ? SaltPhase::Synchronized : SaltPhase::Random;
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    throw UsageError(std::string("invalid configuration: ") + e.what());
  }
  return cfg;
}

std::vector<std::uint64_t> parse_counts(const std::string& spec, const char* flag) {
  std::vector<std::uint64_t> out;
  for (double v : parse_grid(spec)) {
    if (v < 0 || v != std::floor(v)) throw UsageError(std::string(flag) + " expects non-negative integers");
    out.push_back(static_cast<std::uint64_t>(v));
  }
  return out;
}

std::string fmt(double v) { return csv::format(v); }
std::string fmt(std::uint64_t v) { return std::to_string(v); }

// ---- simulate ---------------------------------------------------------------

struct SimulateArgs {
  SimConfig cfg;
  std::string phase = "random";
  std::string out;
};

int cmd_simulate(const SimulateArgs& a, const CLI::App& sub, std::ostream& out) {
  const SimConfig cfg = resolve_sim(a.cfg, a.phase);
  const fs::path dir(a.out);
  ensure_dir(dir);
  Simulation sim(cfg);
  sim.run_to_end();

  const fs::path metrics_path = dir / "metrics.csv";
  const fs::path topology_path = dir / "topology.csv";
  {
    auto f = open_output(metrics_path);
    csv::write_metrics(f, sim.metrics());
    close_output(f, metrics_path);
  }
  {
    auto f = open_output(topology_path);
    const auto edges = sim.topology();
    csv::write_topology(f, edges);
    close_output(f, topology_path);
  }
  write_manifest(dir / "manifest.txt", sub, {metrics_path, topology_path});
  const auto& last = sim.metrics().ticks;
  if (!last.empty()) {
    out << "ticks=" << last.size() << " final_avg_neighbors=" << fmt(last.back().avg_neighbors)
        << " final_nodes_with_2k=" << last.back().nodes_with_2k << "\n";
  }
  return kExitOk;
}

// ---- score-dist -------------------------------------------------------------

struct ScoreArgs {
  SimConfig cfg;
  std::string phase = "random";
  std::size_t epochs = 5;
  std::size_t grid_points = 100;
  double scaled_max = 20.0;
  std::string out;
};

int cmd_score_dist(ScoreArgs a, const CLI::App& sub, std::ostream& out) {
  if (sub.get_option("--salt-interval")->count() == 0) a.cfg.salt_interval = 30 * static_cast<Tick>(a.cfg.nodes);
  const SimConfig cfg = resolve_sim(a.cfg, a.phase);
  if (a.epochs < 1 || a.grid_points < 1 || !(a.scaled_max > 0)) throw UsageError("epochs, grid points and scaled max must be positive");
  const fs::path dir(a.out);
  ensure_dir(dir);
  const ScoreDistribution dist = score_distribution_experiment(cfg, a.epochs, a.grid_points, a.scaled_max);
  const fs::path in_path = dir / "inbound_cdf.csv";
  const fs::path out_path = dir / "outbound_cdf.csv";
  {
    auto f = open_output(in_path);
    csv::write_cdf(f, dist.inbound_cdf);
    close_output(f, in_path);
  }
  {
    auto f = open_output(out_path);
    csv::write_cdf(f, dist.outbound_cdf);
    close_output(f, out_path);
  }
  write_manifest(dir / "manifest.txt", sub, {in_path, out_path});
  out << "inbound_samples=" << dist.min_inbound.size() << " outbound_samples=" << dist.min_outbound_scaled.size()
      << "\n";
  return kExitOk;
}

// ---- eclipse ----------------------------------------------------------------

struct EclipseArgs {
  std::string model = "inbound";
  std::string attackers = "5,20,80";
  std::string honest_requests = "5,20,80";
  std::string honest = "50";
  std::size_t k = 4;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
  std::string strategy = "spam_inbound";
  std::size_t sim_trials = 5;
  Tick measure_from = 500;
  SimConfig cfg;
  std::string phase = "random";
  std::string out;
};

// Writes to `path`, or to `fallback` when the path is empty.
template <typename Body>
void with_output(const std::string& path, std::ostream& fallback, Body&& body) {
  if (path.empty()) {
    body(fallback);
    return;
  }
  auto f = open_output(path);
  body(f);
  close_output(f, path);
}

int cmd_eclipse(const EclipseArgs& a, const CLI::App& sub, std::ostream& out) {
  const auto attackers = parse_counts(a.attackers, "--attackers");
  const auto requests = parse_counts(a.honest_requests, "--honest-requests");
  const auto honest = parse_counts(a.honest, "--honest");
  if (a.trials < 1) throw UsageError("--trials must be positive");
  std::uint64_t point = 0;

  with_output(a.out, out, [&](std::ostream& os) {
    if (a.model == "inbound") {
      csv::Writer w(os, {"attackers", "honest_requests", "k", "trials", "mc_estimate", "std_err", "closed_form", "abs_diff"});
      for (auto na : attackers) {
        for (auto l : requests) {
          Rng rng(Rng::derive_seed(a.seed, point++));
          const McEstimate mc = mc_inbound_takeover(na, l, a.k, a.trials, rng);
          const double cf = analytics::inbound_takeover_prob(na, l, a.k);
          w.row({fmt(na), fmt(l), fmt(std::uint64_t{a.k}), fmt(a.trials), fmt(mc.estimate), fmt(mc.std_err), fmt(cf),
                 fmt(std::fabs(mc.estimate - cf))});
        }
      }
    } else if (a.model == "outbound") {
      csv::Writer w(os, {"attackers", "honest", "honest_requests", "k", "trials", "mc_estimate", "std_err", "closed_form",
                         "abs_diff"});
      for (auto na : attackers) {
        for (auto n : honest) {
          for (auto l : requests) {
            if (a.k < 2 || l < a.k || l > n) continue;
            Rng rng(Rng::derive_seed(a.seed, point++));
            const McEstimate mc = mc_outbound_takeover(na, n, l, a.k, a.trials, rng);
            const double cf = analytics::outbound_takeover_prob(na, n, l, a.k);
            w.row({fmt(na), fmt(n), fmt(l), fmt(std::uint64_t{a.k}), fmt(a.trials), fmt(mc.estimate), fmt(mc.std_err),
                   fmt(cf), fmt(std::fabs(mc.estimate - cf))});
          }
        }
      }
    } else if (a.model == "random-choice") {
      csv::Writer w(os, {"attackers", "honest", "slots", "trials", "mc_estimate", "std_err", "closed_form", "abs_diff",
                         "eclipse_bound"});
      for (auto na : attackers) {
        for (auto n : honest) {
          if (a.k > n + na) continue;
          Rng rng(Rng::derive_seed(a.seed, point++));
          const McEstimate mc = mc_random_choice_eclipse(n, na, a.k, a.trials, rng);
          const double cf = analytics::all_slots_attacker_prob(n, na, a.k);
          const double bound = n == 0 ? 1.0 : analytics::eclipse_lower_bound(static_cast<double>(na) / static_cast<double>(n), a.k);
          w.row({fmt(na), fmt(n), fmt(std::uint64_t{a.k}), fmt(a.trials), fmt(mc.estimate), fmt(mc.std_err), fmt(cf),
                 fmt(std::fabs(mc.estimate - cf)), fmt(bound)});
        }
      }
    } else {
      SimConfig cfg = a.cfg;
      cfg.k = a.k;
      cfg = resolve_sim(cfg, a.phase);
      const AttackStrategy strategy =
          a.strategy == "protocol_following" ? AttackStrategy::ProtocolFollowing : AttackStrategy::SpamInbound;
      csv::Writer w(os, {"attackers", "strategy", "theta", "trials", "eclipse_fraction", "eclipsed_tick_fraction",
                         "inbound_takeover_fraction", "eligible_rate", "spam_sent", "spam_eligible", "spam_accepted"});
      for (auto na : attackers) {
        AttackConfig attack{cfg, static_cast<std::size_t>(na), strategy, 0, a.sim_trials, a.measure_from};
        attack.sim.seed = Rng::derive_seed(a.seed, point++);
        const EclipseStats s = run_eclipse_simulation(attack);
        w.row({fmt(na), to_string(strategy), fmt(cfg.theta), fmt(std::uint64_t{s.trials}), fmt(s.eclipse_fraction),
               fmt(s.eclipsed_tick_fraction), fmt(s.inbound_takeover_fraction), fmt(s.eligible_rate()), fmt(s.spam_sent),
               fmt(s.spam_eligible), fmt(s.spam_accepted)});
      }
    }
  });
  if (!a.out.empty()) write_manifest(a.out + ".manifest", sub, {fs::path(a.out)});
  return kExitOk;
}

// ---- analytics --------------------------------------------------------------

struct AnalyticsArgs {
  std::string function = "order-stat-mean";
  std::string r = "1";
  std::string L = "9";
  std::string x = "0:1:0.1";
  std::string N = "100";
  std::string attackers = "20";
  std::string k = "4";
  std::string a = "0.5";
  std::string xbar = "0:20:1";
  std::string out;
};

int cmd_analytics(const AnalyticsArgs& a, const CLI::App& sub, std::ostream& out, std::ostream& err) {
  using namespace analytics;
  std::size_t skipped = 0;
  // Rows whose parameters fall outside a formula's domain are skipped.
  auto guarded = [&](auto&& emit) {
    try {
      emit();
    } catch (const InvalidParameter&) {
      ++skipped;
    }
  };

  with_output(a.out, out, [&](std::ostream& os) {
    const std::string& f = a.function;
    if (f == "order-stat-pdf" || f == "order-stat-cdf") {
      csv::Writer w(os, {"r", "L", "x", "value"});
      for (auto r : parse_counts(a.r, "--r"))
        for (auto l : parse_counts(a.L, "--L"))
          for (double x : parse_grid(a.x))
            guarded([&] {
              const double v = f == "order-stat-pdf" ? order_stat_pdf(r, l, x) : order_stat_cdf(r, l, x);
              w.row({fmt(r), fmt(l), fmt(x), fmt(v)});
            });
    } else if (f == "order-stat-mean") {
      csv::Writer w(os, {"r", "L", "value"});
      for (auto r : parse_counts(a.r, "--r"))
        for (auto l : parse_counts(a.L, "--L"))
          guarded([&] { w.row({fmt(r), fmt(l), fmt(order_stat_mean(r, l))}); });
    } else if (f == "inbound-takeover") {
      csv::Writer w(os, {"attackers", "L", "k", "value"});
      for (auto na : parse_counts(a.attackers, "--attackers"))
        for (auto l : parse_counts(a.L, "--L"))
          for (auto k : parse_counts(a.k, "--k"))
            guarded([&] { w.row({fmt(na), fmt(l), fmt(k), fmt(inbound_takeover_prob(na, l, k))}); });
    } else if (f == "outbound-takeover") {
      csv::Writer w(os, {"attackers", "N", "L", "k", "value"});
      for (auto na : parse_counts(a.attackers, "--attackers"))
        for (auto n : parse_counts(a.N, "--N"))
          for (auto l : parse_counts(a.L, "--L"))
            for (auto k : parse_counts(a.k, "--k"))
              guarded([&] { w.row({fmt(na), fmt(n), fmt(l), fmt(k), fmt(outbound_takeover_prob(na, n, l, k))}); });
    } else if (f == "finite-outbound-cdf") {
      csv::Writer w(os, {"x", "N", "k", "L", "value"});
      for (double x : parse_grid(a.x))
        for (auto n : parse_counts(a.N, "--N"))
          for (auto k : parse_counts(a.k, "--k"))
            for (auto l : parse_counts(a.L, "--L"))
              guarded([&] { w.row({fmt(x), fmt(n), fmt(k), fmt(l), fmt(finite_outbound_cdf(x, n, k, l))}); });
    } else if (f == "limiting-outbound-cdf") {
      csv::Writer w(os, {"xbar", "k", "L", "value"});
      for (double xb : parse_grid(a.xbar))
        for (auto k : parse_counts(a.k, "--k"))
          for (auto l : parse_counts(a.L, "--L"))
            guarded([&] { w.row({fmt(xb), fmt(k), fmt(l), fmt(limiting_outbound_cdf(xb, k, l))}); });
    } else {
      csv::Writer w(os, {"a", "k", "value"});
      for (double av : parse_grid(a.a))
        for (auto k : parse_counts(a.k, "--k"))
          guarded([&] { w.row({fmt(av), fmt(k), fmt(eclipse_lower_bound(av, k))}); });
    }
  });
  if (skipped > 0) err << "skipped " << skipped << " grid points outside the formula's domain\n";
  if (!a.out.empty()) write_manifest(a.out + ".manifest", sub, {fs::path(a.out)});
  return kExitOk;
}

// ---- verify -----------------------------------------------------------------

struct VerifyArgs {
  std::uint64_t trials = 200000;
  std::uint64_t seed = 7;
  std::string perturb;
};

struct Check {
  std::string name;
  double observed;
  double expected;
  double tolerance;
  bool pass() const { return std::fabs(observed - expected) <= tolerance; }
};

std::vector<Check> run_checks(const VerifyArgs& a, std::vector<std::string>& names_out) {
  std::vector<Check> checks;
  // A perturbed check has its implementation-side value scaled by 1.25 (or a
  // digest bit flipped) so the report must flag it.
  auto tamper = [&](const std::string& name, double v) { return name == a.perturb ? v * 1.25 + 1e-3 : v; };
  auto digest_check = [&](const std::string& name, Bytes32 actual, const std::string& expected_hex) {
    if (name == a.perturb) actual[0] ^= 0x01;
    checks.push_back({name, to_hex(actual) == expected_hex ? 0.0 : 1.0, 0.0, 0.0});
  };

  for (const auto& v : oracles::sha256_vectors()) digest_check("sha256:" + v.name, sha256(v.input), v.sha256_hex);
  digest_check("chain:zero-seed-M2", HashChain::create(Bytes32{}, 2).current().bytes, oracles::sha256_vectors()[2].sha256_hex);
  {
    NodeId a0, a1;
    a0.bytes.fill(0x00);
    a1.bytes.fill(0x01);
    Salt s;
    s.bytes.fill(0x02);
    std::uint64_t raw = outbound_score(a0, a1, s).raw();
    if (a.perturb == "score:outbound-golden") raw ^= 1;
    checks.push_back({"score:outbound-golden", raw == 10614172606054281434ULL ? 0.0 : 1.0, 0.0, 0.0});
  }

  const auto e444 = oracles::enumerate_inbound_takeover(4, 4, 4);
  checks.push_back({"inbound:exact-4-4-4", tamper("inbound:exact-4-4-4", analytics::inbound_takeover_prob(4, 4, 4)),
                    e444.value(), 1e-12});
  const auto e2222 = oracles::enumerate_outbound_takeover(2, 2, 2, 2);
  checks.push_back({"outbound:exact-2-2-2-2",
                    tamper("outbound:exact-2-2-2-2", analytics::outbound_takeover_prob(2, 2, 2, 2)), e2222.value(), 1e-12});
  const auto e3563 = oracles::enumerate_outbound_takeover(6, 7, 5, 3);
  checks.push_back({"outbound:exact-6-7-5-3",
                    tamper("outbound:exact-6-7-5-3", analytics::outbound_takeover_prob(6, 7, 5, 3)), e3563.value(), 1e-12});

  std::uint64_t stream = 0;
  for (std::uint64_t na : {5, 20, 80}) {
    for (std::uint64_t l : {5, 20, 80}) {
      Rng rng(Rng::derive_seed(a.seed, stream++));
      const McEstimate mc = mc_inbound_takeover(na, l, 4, a.trials, rng);
      const double cf = analytics::inbound_takeover_prob(na, l, 4);
      const std::string name = "inbound:mc-" + std::to_string(na) + "-" + std::to_string(l);
      checks.push_back({name, mc.estimate, tamper(name, cf), std::max(3.0 * mc.std_err_at(cf), 1e-12)});
    }
  }
  {
    Rng rng(Rng::derive_seed(a.seed, stream++));
    const McEstimate mc = mc_outbound_takeover(20, 50, 10, 4, a.trials, rng);
    const double cf = analytics::outbound_takeover_prob(20, 50, 10, 4);
    checks.push_back({"outbound:mc-20-50-10-4", mc.estimate, tamper("outbound:mc-20-50-10-4", cf), 3.0 * mc.std_err_at(cf)});
  }
  for (std::uint64_t l : {4, 9, 19}) {
    double worst = 0.0;
    for (int i = 1; i <= 20; ++i) {
      const double x = i / 20.0;
      const double numeric = oracles::integrate([&](double t) { return analytics::order_stat_pdf(1, l, t); }, 0.0, x);
      worst = std::max(worst, std::fabs(numeric - (1.0 - std::pow(1.0 - x, static_cast<double>(l)))));
    }
    const std::string name = "order-stat:pdf-integral-L" + std::to_string(l);
    checks.push_back({name, tamper(name, worst + 1.0), 1.0, 1e-8});
  }
  {
    double worst = 0.0;
    for (int i = 0; i <= 40; ++i) {
      const double xb = i * 0.5;
      worst = std::max(worst, std::fabs(analytics::finite_outbound_cdf(xb / 1e4, 10000, 4, 16) - (1.0 - std::exp(-xb / 4.0))));
    }
    checks.push_back({"outbound-cdf:limit-N1e4", tamper("outbound-cdf:limit-N1e4", worst + 1.0), 1.0, 1e-3});
  }
  {
    const double hyper = analytics::all_slots_attacker_prob(1000, 500, 4);
    checks.push_back({"eclipse:hypergeometric", tamper("eclipse:hypergeometric", hyper),
                      oracles::hypergeometric_all_attackers(1000, 500, 4), 1e-12});
    const double bound = analytics::eclipse_lower_bound(0.5, 4);
    checks.push_back({"eclipse:bound-within-10pct", tamper("eclipse:bound-within-10pct", hyper / bound), 1.0, 0.1});
  }
  {
    Rng rng(Rng::derive_seed(a.seed, stream++));
    NodeId target = new_identity(rng);
    std::uint64_t pass = 0;
    const std::uint64_t n = 100000;
    for (std::uint64_t i = 0; i < n; ++i) {
      NodeId requester = new_identity(rng);
      Salt salt;
      rng.fill(salt.bytes);
      if (theta_test(outbound_score(requester, target, salt), 0.1)) ++pass;
    }
    const double rate = static_cast<double>(pass) / static_cast<double>(n);
    checks.push_back({"theta:pass-rate-0.1", tamper("theta:pass-rate-0.1", rate), 0.1, 0.003});
  }
  for (const auto& c : checks) names_out.push_back(c.name);
  return checks;
}

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  std::vector<std::string> names;
  const auto checks = run_checks(a, names);
  if (!a.perturb.empty() && std::find(names.begin(), names.end(), a.perturb) == names.end()) {
    throw UsageError("unknown check for --perturb: " + a.perturb);
  }
  bool all = true;
  for (const auto& c : checks) {
    all = all && c.pass();
    out << (c.pass() ? "PASS " : "FAIL ") << c.name << " observed=" << fmt(c.observed) << " expected=" << fmt(c.expected)
        << " tolerance=" << fmt(c.tolerance) << "\n";
  }
  out << (all ? "all checks passed" : "some checks FAILED") << "\n";
  return all ? kExitOk : kExitRuntime;
}

// ---- replay -----------------------------------------------------------------

std::vector<std::string> manifest_args(const std::string& path, const std::string& out_override) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read manifest " + path);
  std::string line;
  std::string subcommand;
  std::vector<std::pair<std::string, std::string>> opts;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    if (key == "subcommand") subcommand = value;
    if (key.rfind("arg.", 0) == 0) opts.emplace_back(key.substr(4), value);
  }
  if (subcommand.empty()) throw UsageError("manifest has no subcommand");
  std::vector<std::string> args{subcommand};
  for (auto& [name, value] : opts) {
    if (name == "out" && !out_override.empty()) value = out_override;
    if (value.empty()) continue;
    args.push_back("--" + name);
    args.push_back(value);
  }
  return args;
}

}  // namespace

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> out;
  std::stringstream ss(spec);
  std::string token;
  auto number = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw UsageError("invalid number in grid: '" + s + "'");
    }
  };
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    const auto c1 = token.find(':');
    if (c1 == std::string::npos) {
      out.push_back(number(token));
      continue;
    }
    const auto c2 = token.find(':', c1 + 1);
    if (c2 == std::string::npos) throw UsageError("range must be start:stop:step");
    const double start = number(token.substr(0, c1));
    const double stop = number(token.substr(c1 + 1, c2 - c1 - 1));
    const double step = number(token.substr(c2 + 1));
    if (!(step > 0)) throw UsageError("range step must be positive");
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9));
    for (long i = 0; i <= count; ++i) out.push_back(start + static_cast<double>(i) * step);
  }
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Salt-based autopeering: simulator, eclipse experiments and closed-form analytics", "autopeer"};
  app.require_subcommand(1);
  app.set_version_flag("--version", AUTOPEER_VERSION);
  app.option_defaults()->always_capture_default();

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Run the peering simulator and write per-tick metrics");
  add_sim_flags(simulate, sim.cfg, sim.phase);
  simulate->add_option("--out", sim.out, "Output directory")->required();

  ScoreArgs score;
  auto* score_cmd = app.add_subcommand("score-dist", "Empirical CDFs of the lowest neighbor scores");
  add_sim_flags(score_cmd, score.cfg, score.phase);
  score_cmd->add_option("--epochs", score.epochs, "Complete salt epochs to sample");
  score_cmd->add_option("--grid-points", score.grid_points, "CDF grid size");
  score_cmd->add_option("--scaled-max", score.scaled_max, "Upper end of the scaled outbound grid");
  score_cmd->add_option("--out", score.out, "Output directory")->required();

  EclipseArgs ecl;
  auto* eclipse = app.add_subcommand("eclipse", "Monte-Carlo eclipse experiments against closed forms");
  eclipse->add_option("--model", ecl.model, "inbound, outbound, random-choice or simulation")
      ->check(CLI::IsMember({"inbound", "outbound", "random-choice", "simulation"}));
  eclipse->add_option("--attackers", ecl.attackers, "Attacker counts N_A (grid)");
  eclipse->add_option("--honest-requests", ecl.honest_requests, "Honest request counts L (grid)");
  eclipse->add_option("--honest", ecl.honest, "Honest node counts N for the MC models (grid)");
  eclipse->add_option("--k", ecl.k, "Neighbor cap (slots for random-choice)");
  eclipse->add_option("--trials", ecl.trials, "Monte-Carlo trials per grid point");
  eclipse->add_option("--seed", ecl.seed, "Random seed");
  eclipse->add_option("--strategy", ecl.strategy, "spam_inbound or protocol_following")
      ->check(CLI::IsMember({"spam_inbound", "protocol_following"}));
  eclipse->add_option("--sim-trials", ecl.sim_trials, "Simulation runs per attacker count");
  eclipse->add_option("--measure-from", ecl.measure_from, "First tick at which the victim is inspected");
  eclipse->add_option("--nodes", ecl.cfg.nodes, "Honest node count for the simulation model");
  eclipse->add_option("--salt-interval", ecl.cfg.salt_interval, "Salt update interval T in ticks");
  eclipse->add_option("--query-delay", ecl.cfg.query_delay, "Ticks between queries d");
  eclipse->add_option("--theta", ecl.cfg.theta, "Theta-test threshold");
  eclipse->add_option("--latency", ecl.cfg.latency, "Message latency in ticks");
  eclipse->add_option("--ticks", ecl.cfg.max_ticks, "Simulated ticks");
  eclipse->add_option("--salt-phase", ecl.phase, "random or synchronized")
      ->check(CLI::IsMember({"random", "synchronized"}));
  eclipse->add_option("--out", ecl.out, "Output CSV (stdout when omitted)");

  AnalyticsArgs an;
  auto* analytics_cmd = app.add_subcommand("analytics", "Tabulate a closed-form formula over a parameter grid");
  analytics_cmd
      ->add_option("--function", an.function,
                   "order-stat-pdf, order-stat-cdf, order-stat-mean, inbound-takeover, outbound-takeover, "
                   "finite-outbound-cdf, limiting-outbound-cdf or eclipse-bound")
      ->check(CLI::IsMember({"order-stat-pdf", "order-stat-cdf", "order-stat-mean", "inbound-takeover",
                             "outbound-takeover", "finite-outbound-cdf", "limiting-outbound-cdf", "eclipse-bound"}));
  analytics_cmd->add_option("--r", an.r, "Ranks (grid)");
  analytics_cmd->add_option("--L", an.L, "Request counts (grid)");
  analytics_cmd->add_option("--x", an.x, "Scores (grid)");
  analytics_cmd->add_option("--N", an.N, "Honest node counts (grid)");
  analytics_cmd->add_option("--attackers", an.attackers, "Attacker counts (grid)");
  analytics_cmd->add_option("--k", an.k, "Neighbor caps (grid)");
  analytics_cmd->add_option("--a", an.a, "Attacker ratios N_A/N (grid)");
  analytics_cmd->add_option("--xbar", an.xbar, "Scaled scores (grid)");
  analytics_cmd->add_option("--out", an.out, "Output CSV (stdout when omitted)");

  VerifyArgs ver;
  auto* verify = app.add_subcommand("verify", "Check closed forms, Monte-Carlo estimators and digests against oracles");
  verify->add_option("--trials", ver.trials, "Monte-Carlo trials per check");
  verify->add_option("--seed", ver.seed, "Random seed");
  verify->add_option("--perturb", ver.perturb, "Deliberately corrupt one named check");

  std::string manifest;
  std::string replay_out;
  auto* replay = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  replay->add_option("--manifest", manifest, "Manifest file")->required();
  replay->add_option("--out", replay_out, "Override the recorded output path");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*simulate) return cmd_simulate(sim, *simulate, out);
    if (*score_cmd) return cmd_score_dist(score, *score_cmd, out);
    if (*eclipse) return cmd_eclipse(ecl, *eclipse, out);
    if (*analytics_cmd) return cmd_analytics(an, *analytics_cmd, out, err);
    if (*verify) return cmd_verify(ver, out);
    if (*replay) return run(manifest_args(manifest, replay_out), out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace autopeer::cli
