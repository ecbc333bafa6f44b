#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

// Reference computations used to check the library: exhaustive
// enumerations, numeric quadrature, and published digest vectors. Nothing
// here calls into the library's own formulas.
namespace autopeer::oracles {

struct Fraction {
  std::uint64_t numerator = 0;
  std::uint64_t denominator = 1;
  double value() const { return static_cast<double>(numerator) / static_cast<double>(denominator); }
};

/// Enumerates every placement of N_A attacker ranks among N_A + L
/// positions and counts those where ranks 1..k are all attackers.
/// Practical for N_A + L <= ~24.
Fraction enumerate_inbound_takeover(unsigned attackers, unsigned honest_requests, unsigned k);

/// Enumerates every interleaving of N_A attacker and N honest scores, and
/// every (k-1)-subset of {1..L-1} giving the rank Y of the first accepted
/// honest neighbor. Counts cases where the k-th attacker precedes the Y-th
/// honest score. Practical for N_A + N <= ~20.
Fraction enumerate_outbound_takeover(unsigned attackers, unsigned honest, unsigned honest_requests, unsigned k);

/// C(N_A, s) / C(N + N_A, s) as a plain running product.
double hypergeometric_all_attackers(std::uint64_t honest, std::uint64_t attackers, std::uint64_t slots);

/// Adaptive Simpson quadrature of f over [a, b].
double integrate(const std::function<double(double)>& f, double a, double b, double tolerance = 1e-12);

struct DigestVector {
  std::string name;
  std::vector<std::uint8_t> input;
  std::string sha256_hex;
};

/// SHA-256 vectors computed with an independent implementation.
const std::vector<DigestVector>& sha256_vectors();

}  // namespace autopeer::oracles
