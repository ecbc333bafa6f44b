#include "autopeer/analytics.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace autopeer::analytics {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double clamp01(double p) { return p < 0.0 ? 0.0 : (p > 1.0 ? 1.0 : p); }

// (1 - a)^n for a in [0,1] without cancellation.
double pow_one_minus(double a, double n) {
  if (a >= 1.0) return n == 0.0 ? 1.0 : 0.0;
  return std::exp(n * std::log1p(-a));
}

}  // namespace

double log_binomial(double n, double r) {
  if (r < 0.0 || r > n || n < 0.0) return kNegInf;
  return std::lgamma(n + 1.0) - std::lgamma(r + 1.0) - std::lgamma(n - r + 1.0);
}

double binomial(double n, double r) {
  const double lb = log_binomial(n, r);
  return lb == kNegInf ? 0.0 : std::exp(lb);
}

double order_stat_pdf(std::uint64_t r, std::uint64_t L, double x) {
  if (r < 1 || r > L) throw InvalidParameter("order statistic rank must satisfy 1 <= r <= L");
  if (x < 0.0 || x > 1.0) return 0.0;
  const double rd = static_cast<double>(r);
  const double Ld = static_cast<double>(L);
  const double log_coeff = std::lgamma(Ld + 1.0) - std::lgamma(rd) - std::lgamma(Ld - rd + 1.0);
  // std::pow(0, 0) == 1 handles the boundary exponents.
  return std::exp(log_coeff) * std::pow(x, rd - 1.0) * std::pow(1.0 - x, Ld - rd);
}

double order_stat_cdf(std::uint64_t r, std::uint64_t L, double x) {
  if (r < 1 || r > L) throw InvalidParameter("order statistic rank must satisfy 1 <= r <= L");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double Ld = static_cast<double>(L);
  if (r == 1) return -std::expm1(Ld * std::log1p(-x));
  // P(at least r of L uniforms fall below x).
  const double lx = std::log(x);
  const double l1x = std::log1p(-x);
  double sum = 0.0;
  for (std::uint64_t j = r; j <= L; ++j) {
    const double jd = static_cast<double>(j);
    sum += std::exp(log_binomial(Ld, jd) + jd * lx + (Ld - jd) * l1x);
  }
  return clamp01(sum);
}

double order_stat_mean(std::uint64_t r, std::uint64_t L) {
  if (r < 1 || r > L) throw InvalidParameter("order statistic rank must satisfy 1 <= r <= L");
  return static_cast<double>(r) / static_cast<double>(L + 1);
}

double inbound_takeover_prob(std::uint64_t attackers, std::uint64_t honest_requests, std::uint64_t k) {
  if (attackers < k) return 0.0;
  if (honest_requests == 0) return 1.0;
  double log_p = 0.0;
  for (std::uint64_t j = 0; j < k; ++j) {
    log_p += std::log(static_cast<double>(attackers - j)) - std::log(static_cast<double>(attackers + honest_requests - j));
  }
  return clamp01(std::exp(log_p));
}

double inbound_takeover_prob_theta(std::uint64_t attackers, std::uint64_t honest_requests, std::uint64_t k,
                                   double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw InvalidParameter("theta must lie in [0,1]");
  const auto effective = static_cast<std::uint64_t>(std::llround(theta * static_cast<double>(attackers)));
  return inbound_takeover_prob(effective, honest_requests, k);
}

double outbound_takeover_prob(std::uint64_t attackers, std::uint64_t honest, std::uint64_t honest_requests,
                              std::uint64_t k) {
  if (k == 1) throw UnsupportedParameter("outbound takeover closed form is undefined for k = 1");
  if (k < 1 || honest_requests < k) throw InvalidParameter("outbound takeover requires 2 <= k <= L");
  if (honest_requests > honest) throw InvalidParameter("outbound takeover requires L <= N");

  const double NA = static_cast<double>(attackers);
  const double N = static_cast<double>(honest);
  const double L = static_cast<double>(honest_requests);
  const double kd = static_cast<double>(k);
  const double log_denominator = log_binomial(L - 1.0, kd - 1.0);

  double total = 0.0;
  for (std::uint64_t m = 1; m + k <= honest_requests + 1; ++m) {
    const double md = static_cast<double>(m);
    const double log_position = log_binomial(L - 1.0 - md, kd - 2.0) - log_denominator;
    if (log_position == kNegInf) continue;
    // P(at least k attackers among the k+m-1 smallest scores overall).
    const double log_total = log_binomial(NA + N, kd + md - 1.0);
    double beats = 0.0;
    for (std::uint64_t j = 0; j < m; ++j) {
      const double jd = static_cast<double>(j);
      const double lt = log_binomial(NA, kd + jd) + log_binomial(N, md - 1.0 - jd);
      if (lt == kNegInf) continue;
      beats += std::exp(lt - log_total);
    }
    total += beats * std::exp(log_position);
  }
  return clamp01(total);
}

double finite_outbound_cdf(double x, std::uint64_t N, std::uint64_t k, std::uint64_t L) {
  if (N < 1 || k < 1 || k > L) throw InvalidParameter("finite outbound CDF requires N >= 1 and 1 <= k <= L");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double p = static_cast<double>(k) / static_cast<double>(L);
  const double n = static_cast<double>(N);
  const double numerator = 1.0 - pow_one_minus(p * x, n);
  const double denominator = 1.0 - pow_one_minus(p, n);
  return clamp01(numerator / denominator);
}

double limiting_outbound_cdf(double x_bar, std::uint64_t k, std::uint64_t L) {
  if (k < 1 || k > L) throw InvalidParameter("limiting outbound CDF requires 1 <= k <= L");
  if (x_bar <= 0.0) return 0.0;
  return -std::expm1(-x_bar * static_cast<double>(k) / static_cast<double>(L));
}

double eclipse_lower_bound(double a, std::uint64_t k) {
  if (!(a >= 0.0) || k < 1) throw InvalidParameter("eclipse bound requires a >= 0 and k >= 1");
  if (std::isinf(a)) return 1.0;
  return std::pow(a / (1.0 + a), static_cast<double>(k));
}

double all_slots_attacker_prob(std::uint64_t honest, std::uint64_t attackers, std::uint64_t slots) {
  if (slots > honest + attackers) throw InvalidParameter("more slots than nodes");
  if (attackers < slots) return 0.0;
  const double lp = log_binomial(static_cast<double>(attackers), static_cast<double>(slots)) -
                    log_binomial(static_cast<double>(honest + attackers), static_cast<double>(slots));
  return clamp01(std::exp(lp));
}

}  // namespace autopeer::analytics
