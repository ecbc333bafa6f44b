#pragma once

#include <cstdint>

#include "autopeer/errors.hpp"

// Closed-form eclipse and order-statistics results for salted neighbor
// selection. Combinatorial terms are evaluated in the log-gamma domain and
// exponentiated last, so counts up to ~1e7 stay finite.
namespace autopeer::analytics {

class UnsupportedParameter : public InvalidParameter {
 public:
  using InvalidParameter::InvalidParameter;
};

/// log C(n, r); -infinity when r < 0 or r > n.
double log_binomial(double n, double r);
double binomial(double n, double r);

/// Density of the r-th smallest of L i.i.d. Uniform[0,1] variables:
///   L! / ((r-1)! (L-r)!) x^{r-1} (1-x)^{L-r}, zero outside [0,1].
/// Throws InvalidParameter unless 1 <= r <= L.
double order_stat_pdf(std::uint64_t r, std::uint64_t L, double x);

/// P(r-th smallest of L uniforms <= x).
double order_stat_cdf(std::uint64_t r, std::uint64_t L, double x);

/// r / (L+1).
double order_stat_mean(std::uint64_t r, std::uint64_t L);

/// Probability that N_A attacker requests take all k inbound slots against
/// L honest competitors when every inbound score is i.i.d. uniform:
///   prod_{j<k} (N_A - j) / (N_A + L - j).
/// Total: 0 when N_A < k, 1 when L = 0 and N_A >= k.
double inbound_takeover_prob(std::uint64_t attackers, std::uint64_t honest_requests, std::uint64_t k);

/// inbound_takeover_prob with the attacker count thinned by the theta-test,
/// round(theta * N_A) (half away from zero).
double inbound_takeover_prob_theta(std::uint64_t attackers, std::uint64_t honest_requests, std::uint64_t k,
                                   double theta);

/// P(the attacker's k-th smallest outbound score lies below the lowest
/// accepted honest one) for a node whose L-th honest request completed its
/// k outbound slots:
///   sum_{m=1}^{L-k+1} [sum_{j=0}^{m-1} C(N_A,k+j) C(N,m-1-j) / C(N_A+N,k+m-1)]
///                     * C(L-1-m,k-2) / C(L-1,k-1)
/// Requires 2 <= k <= L <= N; k = 1 throws UnsupportedParameter.
double outbound_takeover_prob(std::uint64_t attackers, std::uint64_t honest, std::uint64_t honest_requests,
                              std::uint64_t k);

/// CDF of the lowest accepted outbound score under the geometric-acceptance
/// heuristic with acceptance probability k/L:
///   (1 - (1 - kx/L)^N) / (1 - (1 - k/L)^N).
double finite_outbound_cdf(double x, std::uint64_t N, std::uint64_t k, std::uint64_t L);

/// N -> infinity limit of finite_outbound_cdf at x = x_bar / N: 1 - exp(-x_bar k / L).
double limiting_outbound_cdf(double x_bar, std::uint64_t k, std::uint64_t L);

/// (a / (1+a))^k, the eclipse probability when N_A = aN attacker nodes are
/// indistinguishable from N honest ones. a = +inf gives 1.
double eclipse_lower_bound(double a, std::uint64_t k);

/// C(N_A, slots) / C(N + N_A, slots): every one of `slots` uniformly chosen
/// peers is an attacker.
double all_slots_attacker_prob(std::uint64_t honest, std::uint64_t attackers, std::uint64_t slots);

}  // namespace autopeer::analytics
