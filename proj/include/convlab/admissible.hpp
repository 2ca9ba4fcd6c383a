#pragma once

// Admissible pairs (N, B) and their certifying spectrum sets L: the
// unitarity check for the normalized exponential matrix, exhaustive search
// for the lexicographically smallest L, and the gcd rescaling B -> B/d.

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

#include "numeric.hpp"

namespace convlab {

// A scale N >= 2 with a digit set B of distinct nonnegative integers,
// 0 in B, #B >= 2, and optionally a certified spectrum set L (#L = #B,
// 0 in L). Digits may exceed N - 1; nothing here assumes B fits one digit.
struct AdmissiblePair {
  BigInt N;
  std::vector<BigInt> B;               // sorted ascending
  std::optional<std::vector<BigInt>> L;  // sorted ascending when present

  AdmissiblePair(BigInt N_, std::vector<BigInt> B_,
                 std::optional<std::vector<BigInt>> L_ = std::nullopt)
      : N(std::move(N_)), B(std::move(B_)), L(std::move(L_)) {
    if (N < 2) throw std::invalid_argument("AdmissiblePair: N must be >= 2");
    std::sort(B.begin(), B.end());
    if (B.size() < 2) throw std::invalid_argument("AdmissiblePair: #B must be >= 2");
    if (B.front() != 0) throw std::invalid_argument("AdmissiblePair: 0 must belong to B");
    if (std::adjacent_find(B.begin(), B.end()) != B.end())
      throw std::invalid_argument("AdmissiblePair: duplicate digits");
    for (const auto& b : B)
      if (b < 0) throw std::invalid_argument("AdmissiblePair: digits must be nonnegative");
    if (L) {
      std::sort(L->begin(), L->end());
      if (L->size() != B.size())
        throw std::invalid_argument("AdmissiblePair: #L must equal #B");
      if (std::adjacent_find(L->begin(), L->end()) != L->end())
        throw std::invalid_argument("AdmissiblePair: duplicate L elements");
      if (std::find(L->begin(), L->end(), BigInt(0)) == L->end())
        throw std::invalid_argument("AdmissiblePair: 0 must belong to L");
    }
  }
};

struct HadamardReport {
  bool unitary = false;
  double max_violation = 0.0;  // max over l != l' of |(1/#B) sum_b e^{-2 pi i b (l-l')/N}|
};

namespace detail {

// |(1/#B) sum_{b in B} e^{-2 pi i b d / N}| with the angle reduced exactly
// mod N before going to floating point, so huge digits stay accurate.
inline double normalized_exp_sum_abs(const std::vector<BigInt>& B, const BigInt& d,
                                     const BigInt& N) {
  std::complex<double> s(0.0, 0.0);
  for (const auto& b : B) {
    BigInt r = (b * d) % N;
    if (r < 0) r += N;
    const double theta = -2.0 * M_PI * to_double(Rational(r, N));
    s += std::complex<double>(std::cos(theta), std::sin(theta));
  }
  return std::abs(s) / static_cast<double>(B.size());
}

}  // namespace detail

// Checks that [ (1/sqrt(#B)) e^{-2 pi i b l / N} ]_{b in B, l in L} is unitary,
// i.e. every off-diagonal column pair is orthogonal. Tolerance applies to the
// normalized sums; the maximum over pairs is reported.
inline HadamardReport verify_hadamard(const AdmissiblePair& pair,
                                      const std::vector<BigInt>& L, double tol = 1e-12) {
  if (L.size() != pair.B.size())
    throw std::invalid_argument("verify_hadamard: #L must equal #B");
  HadamardReport rep;
  for (std::size_t i = 0; i < L.size(); ++i)
    for (std::size_t j = 0; j < L.size(); ++j) {
      if (i == j) continue;
      const double v = detail::normalized_exp_sum_abs(pair.B, L[i] - L[j], pair.N);
      rep.max_violation = std::max(rep.max_violation, v);
    }
  rep.unitary = rep.max_violation <= tol;
  return rep;
}

// Exhaustive search for the lexicographically smallest L subset of
// {0,...,N-1} with 0 in L and #L = #B passing the unitarity check.
// Returns nullopt if no such set exists. Guard: N <= 64.
inline std::optional<std::vector<BigInt>> find_spectrum_set(const AdmissiblePair& pair,
                                                            double tol = 1e-12) {
  if (pair.N > 64)
    throw std::invalid_argument("find_spectrum_set: search too large (N > 64)");
  const int n = pair.N.convert_to<int>();
  const int k = static_cast<int>(pair.B.size());
  if (k > n) return std::nullopt;  // cannot pick #B distinct residues

  // Enumerate k-subsets of {0,...,n-1} containing 0 in lexicographic order:
  // fix element 0, choose the remaining k-1 from {1,...,n-1}.
  std::vector<int> idx(static_cast<std::size_t>(k - 1));
  for (int i = 0; i < k - 1; ++i) idx[static_cast<std::size_t>(i)] = i + 1;
  if (k == 1) {  // unreachable with #B >= 2, kept for completeness
    return std::vector<BigInt>{0};
  }
  while (true) {
    std::vector<BigInt> cand;
    cand.reserve(static_cast<std::size_t>(k));
    cand.emplace_back(0);
    for (int v : idx) cand.emplace_back(v);
    if (verify_hadamard(pair, cand, tol).unitary) return cand;
    // next combination from {1,...,n-1}
    int i = k - 2;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - (k - 1) + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k - 1; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  return std::nullopt;
}

struct RescaleResult {
  BigInt d;              // gcd of the nonzero digits
  AdmissiblePair pair;   // (N, B/d), L dropped (it certifies the original B)
};

// Factors out d = gcd(B \ {0}). Requires 0 in B (guaranteed by the type)
// and at least one nonzero digit.
inline RescaleResult rescale_pair(const AdmissiblePair& pair) {
  BigInt d = 0;
  for (const auto& b : pair.B)
    if (b != 0) d = gcd_big(d, b);
  if (d == 0) throw std::invalid_argument("rescale_pair: B has no nonzero digit");
  std::vector<BigInt> scaled;
  scaled.reserve(pair.B.size());
  for (const auto& b : pair.B) scaled.push_back(b / d);
  return RescaleResult{d, AdmissiblePair(pair.N, std::move(scaled))};
}

}  // namespace convlab
