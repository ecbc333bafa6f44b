#include "autopeer/oracles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace autopeer::oracles {

namespace {

// Visits every bitmask over `width` bits with exactly `ones` bits set.
template <typename F>
void for_each_combination(unsigned width, unsigned ones, F&& visit) {
  if (width > 62) throw std::invalid_argument("enumeration too wide");
  if (ones > width) return;
  if (ones == 0) {
    visit(std::uint64_t{0});
    return;
  }
  std::uint64_t mask = (std::uint64_t{1} << ones) - 1;
  const std::uint64_t limit = std::uint64_t{1} << width;
  while (mask < limit) {
    visit(mask);
    // Gosper's hack: next mask with the same popcount.
    const std::uint64_t c = mask & (~mask + 1);
    const std::uint64_t r = mask + c;
    mask = (((r ^ mask) >> 2) / c) | r;
  }
}

double simpson(const std::function<double(double)>& f, double a, double fa, double b, double fb, double m, double fm,
               double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1) +
         simpson(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1);
}

}  // namespace

Fraction enumerate_inbound_takeover(unsigned attackers, unsigned honest_requests, unsigned k) {
  Fraction f{0, 0};
  const unsigned width = attackers + honest_requests;
  const std::uint64_t top_k = k >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << k) - 1;
  // Bit i set means rank i+1 is held by an attacker.
  for_each_combination(width, attackers, [&](std::uint64_t mask) {
    ++f.denominator;
    if (k <= width && (mask & top_k) == top_k) ++f.numerator;
  });
  return f;
}

Fraction enumerate_outbound_takeover(unsigned attackers, unsigned honest, unsigned honest_requests, unsigned k) {
  if (k < 2 || honest_requests < k || honest_requests > honest) throw std::invalid_argument("bad parameters");
  Fraction f{0, 0};
  const unsigned width = attackers + honest;
  for_each_combination(width, attackers, [&](std::uint64_t mask) {
    // Overall rank (0-based) of the k-th attacker and of every honest score.
    int kth_attacker = -1;
    std::vector<int> honest_rank;
    unsigned seen = 0;
    for (unsigned pos = 0; pos < width; ++pos) {
      if (mask >> pos & 1) {
        if (++seen == k) kth_attacker = static_cast<int>(pos);
      } else {
        honest_rank.push_back(static_cast<int>(pos));
      }
    }
    // Subsets of {1..L-1} of size k-1, encoded as masks over L-1 bits.
    for_each_combination(honest_requests - 1, k - 1, [&](std::uint64_t chosen) {
      ++f.denominator;
      const unsigned y = static_cast<unsigned>(std::countr_zero(chosen)) + 1;
      if (kth_attacker >= 0 && kth_attacker < honest_rank[y - 1]) ++f.numerator;
    });
  });
  return f;
}

double hypergeometric_all_attackers(std::uint64_t honest, std::uint64_t attackers, std::uint64_t slots) {
  double p = 1.0;
  for (std::uint64_t j = 0; j < slots; ++j) {
    if (attackers < j + 1) return 0.0;
    p *= static_cast<double>(attackers - j) / static_cast<double>(honest + attackers - j);
  }
  return p;
}

double integrate(const std::function<double(double)>& f, double a, double b, double tolerance) {
  const double fa = f(a);
  const double fb = f(b);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson(f, a, fa, b, fb, m, fm, whole, tolerance, 50);
}

const std::vector<DigestVector>& sha256_vectors() {
  static const std::vector<DigestVector> vectors = [] {
    std::vector<DigestVector> v;
    v.push_back({"empty", {}, "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"});
    v.push_back({"abc", {'a', 'b', 'c'}, "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"});
    v.push_back({"32 zero bytes", std::vector<std::uint8_t>(32, 0),
                 "66687aadf862bd776c8fc18b8e9f8e20089714856ee233b3902a591d0d5f2925"});
    std::vector<std::uint8_t> triple;
    for (std::uint8_t b : {0x00, 0x01, 0x02}) triple.insert(triple.end(), 32, b);
    v.push_back({"00^32 01^32 02^32", triple, "934d1dbfb88c30da48404c96d98e39955ff1586d9382c2ceb15264cb23ea1710"});
    return v;
  }();
  return vectors;
}

}  // namespace autopeer::oracles
