#pragma once

// Dimension bookkeeping for random truncation towers: the frequency-weighted
// ratio sum_k p_k log #B_k / sum_k p_k log N_k, its empirical running
// version along a symbol sequence, the inverse problem (choose p to hit a
// target value), and the intermediate-value family construction.

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "admissible.hpp"
#include "numeric.hpp"
#include "sequence.hpp"
#include "transform.hpp"

namespace convlab {

struct DimensionValue {
  double value = 0.0;
  std::optional<Rational> exact;  // present when all scales share a common log base
};

namespace detail {

// Integer nth root: largest r with r^n <= x (x >= 1, n >= 1).
inline BigInt nth_root_big(const BigInt& x, unsigned n) {
  if (x < 1) throw std::domain_error("nth_root_big: x must be >= 1");
  if (n == 1 || x == 1) return n == 1 ? x : BigInt(1);
  BigInt lo = 1, hi = BigInt(1) << (msb(x) / n + 1);
  while (lo < hi) {
    const BigInt mid = (lo + hi + 1) / 2;
    if (pow_big(mid, n) <= x)
      lo = mid;
    else
      hi = mid - 1;
  }
  return lo;
}

// Writes v >= 2 as r^e with e maximal (r is then not a perfect power).
inline std::pair<BigInt, unsigned> primitive_root(const BigInt& v) {
  if (v < 2) throw std::domain_error("primitive_root: v must be >= 2");
  const unsigned max_e = msb(v) == 0 ? 1 : static_cast<unsigned>(msb(v));
  for (unsigned e = std::max(1u, max_e); e >= 2; --e) {
    const BigInt r = nth_root_big(v, e);
    if (r >= 2 && pow_big(r, e) == v) return {r, e};
  }
  return {v, 1};
}

// If every value is a power of one common base, returns that base and the
// exponents; otherwise nullopt.
inline std::optional<std::pair<BigInt, std::vector<unsigned>>> common_base(
    const std::vector<BigInt>& values) {
  if (values.empty()) return std::nullopt;
  BigInt base = 0;
  for (const auto& v : values) {
    const auto [r, e] = primitive_root(v);
    (void)e;
    if (base == 0)
      base = r;
    else if (base != r)
      return std::nullopt;
  }
  std::vector<unsigned> exps;
  exps.reserve(values.size());
  for (const auto& v : values) {
    // v = base^e; recover e by repeated division (values are exact powers)
    unsigned e = 0;
    BigInt t = v;
    while (t > 1) {
      t /= base;
      ++e;
    }
    exps.push_back(e);
  }
  return std::make_pair(base, std::move(exps));
}

}  // namespace detail

// sum_k p_k log #B_k / sum_k p_k log N_k. Exact in rational arithmetic when
// all #B_k and N_k are powers of a common integer base; double otherwise.
inline DimensionValue dim_formula(const std::vector<AdmissiblePair>& pairs,
                                  const ProbabilityVector& p) {
  if (pairs.empty()) throw std::invalid_argument("dim_formula: no pairs");
  if (p.size() != pairs.size())
    throw std::invalid_argument("dim_formula: probability vector length must match pair count");

  std::vector<BigInt> values;
  for (const auto& pr : pairs) {
    values.emplace_back(pr.B.size());
    values.push_back(pr.N);
  }
  DimensionValue out;
  if (const auto cb = detail::common_base(values)) {
    const auto& exps = cb->second;
    Rational num(0), den(0);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      num += p.entries[i] * Rational(exps[2 * i]);      // exponent of #B_i
      den += p.entries[i] * Rational(exps[2 * i + 1]);  // exponent of N_i
    }
    if (den == 0) throw std::logic_error("dim_formula: zero denominator");
    out.exact = num / den;
    out.value = to_double(*out.exact);
    return out;
  }
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const double w = to_double(p.entries[i]);
    num += w * log_big(BigInt(pairs[i].B.size()));
    den += w * log_big(pairs[i].N);
  }
  out.value = num / den;
  return out;
}

// Running ratios sum_{j<=i} log #B_{w_j} / sum_{j<=i} log N_{w_j} for
// i = 1..k. Only defined for exponent sequence identically 1; refuses
// otherwise (the level weights would need the exponents folded in).
inline std::vector<double> empirical_dimension(const PairSystem& sys, long k) {
  if (k < 1) throw std::invalid_argument("empirical_dimension: need k >= 1");
  if (sys.exponents.kind != ExponentSequence::Kind::constant_one)
    for (long j = 1; j <= k; ++j)
      if (sys.exponents.at(j) != 1)
        throw std::invalid_argument(
            "empirical_dimension: only the constant-one exponent sequence is supported");
  std::vector<double> logB(sys.pairs.size()), logN(sys.pairs.size());
  for (std::size_t i = 0; i < sys.pairs.size(); ++i) {
    logB[i] = log_big(BigInt(sys.pairs[i].B.size()));
    logN[i] = log_big(sys.pairs[i].N);
  }
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(k));
  double num = 0.0, den = 0.0;
  for (long j = 1; j <= k; ++j) {
    const auto s = static_cast<std::size_t>(symbol_at(sys.model, j) - 1);
    num += logB[s];
    den += logN[s];
    out.push_back(num / den);
  }
  return out;
}

struct SolveResult {
  ProbabilityVector p;
  DimensionValue achieved;  // dim_formula(pairs, p); equals s exactly in exact mode
};

// Chooses p supported on the extreme-ratio pairs so the dimension formula
// hits s: with i = argmin and j = argmax of log #B / log N, the segment
// p = t e_i + (1-t) e_j sweeps [min ratio, max ratio], and
//   t = (a_j - s b_j) / ((s b_i - a_i) + (a_j - s b_j))
// solves f(p) = s. Exact rational arithmetic when the scales share a common
// base; double arithmetic (with an exact dyadic t) otherwise.
inline SolveResult solve_dimension(const std::vector<AdmissiblePair>& pairs, const Rational& s) {
  if (pairs.empty()) throw std::invalid_argument("solve_dimension: no pairs");

  std::vector<BigInt> values;
  for (const auto& pr : pairs) {
    values.emplace_back(pr.B.size());
    values.push_back(pr.N);
  }
  const auto cb = detail::common_base(values);

  const std::size_t n = pairs.size();
  std::size_t imin = 0, imax = 0;

  auto make_p = [&](const Rational& t, std::size_t i, std::size_t j) {
    std::vector<Rational> entries(n, Rational(0));
    entries[i] += t;
    entries[j] += Rational(1) - t;
    return ProbabilityVector(std::move(entries));
  };

  if (cb) {
    const auto& exps = cb->second;
    std::vector<Rational> ratio(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (exps[2 * i + 1] == 0) throw std::logic_error("solve_dimension: scale exponent 0");
      ratio[i] = Rational(exps[2 * i], exps[2 * i + 1]);
      if (ratio[i] < ratio[imin]) imin = i;
      if (ratio[i] > ratio[imax]) imax = i;
    }
    if (s < ratio[imin] || s > ratio[imax])
      throw std::invalid_argument("solve_dimension: target outside [min ratio, max ratio]");
    // a_i = alpha_i log base, b_i = beta_i log base: the log base cancels.
    const Rational ai(exps[2 * imin]), bi(exps[2 * imin + 1]);
    const Rational aj(exps[2 * imax]), bj(exps[2 * imax + 1]);
    Rational t;
    if (s == ratio[imin])
      t = 1;
    else if (s == ratio[imax])
      t = 0;
    else
      t = (aj - s * bj) / ((s * bi - ai) + (aj - s * bj));
    SolveResult res{make_p(t, imin, imax), {}};
    res.achieved.exact = s;
    res.achieved.value = to_double(s);
    return res;
  }

  std::vector<double> a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = log_big(BigInt(pairs[i].B.size()));
    b[i] = log_big(pairs[i].N);
    if (a[i] / b[i] < a[imin] / b[imin]) imin = i;
    if (a[i] / b[i] > a[imax] / b[imax]) imax = i;
  }
  const double sd = to_double(s);
  const double rmin = a[imin] / b[imin], rmax = a[imax] / b[imax];
  if (sd < rmin - 1e-12 || sd > rmax + 1e-12)
    throw std::invalid_argument("solve_dimension: target outside [min ratio, max ratio]");
  double td;
  if (sd <= rmin)
    td = 1.0;
  else if (sd >= rmax)
    td = 0.0;
  else
    td = (a[imax] - sd * b[imax]) / ((sd * b[imin] - a[imin]) + (a[imax] - sd * b[imax]));
  td = std::min(1.0, std::max(0.0, td));
  const Rational t = rational_from_double(td);  // exact dyadic, so p sums to exactly 1
  SolveResult res{make_p(t, imin, imax), {}};
  res.achieved.value = (td * a[imin] + (1 - td) * a[imax]) / (td * b[imin] + (1 - td) * b[imax]);
  return res;
}

struct IvpFamily {
  long n0 = 0;                        // exponent on the first scale
  std::vector<AdmissiblePair> pairs;  // [(N^n0, {0..N-1}, L), (N, {0..N-1}, L), ...]
};

// Family whose dimension range [1/n0, 1] contains the target s in (0, 1]:
// the first pair dilutes a full digit set inside the larger scale N^n0
// (certified by L = N^(n0-1) {0..N-1}), the remaining M-1 pairs are plain
// full digit sets. n0 is the smallest integer with 1/n0 < s (n0 = 1 at the
// endpoint s = 1).
inline IvpFamily build_ivp_family(const Rational& s, long N = 2, long M = 2) {
  if (s <= 0 || s > 1) throw std::invalid_argument("build_ivp_family: need 0 < s <= 1");
  if (N < 2) throw std::invalid_argument("build_ivp_family: need N >= 2");
  if (M < 1) throw std::invalid_argument("build_ivp_family: need M >= 1");
  long n0 = 1;
  if (s < 1) n0 = (floor_big(Rational(1) / s) + 1).convert_to<long>();

  std::vector<BigInt> full;
  for (long b = 0; b < N; ++b) full.emplace_back(b);

  IvpFamily fam;
  fam.n0 = n0;
  const BigInt stride = pow_big(N, static_cast<unsigned long>(n0 - 1));
  std::vector<BigInt> L0;
  for (long l = 0; l < N; ++l) L0.push_back(stride * l);
  fam.pairs.emplace_back(pow_big(N, static_cast<unsigned long>(n0)), full, L0);
  for (long i = 1; i < M; ++i) fam.pairs.emplace_back(BigInt(N), full, full);
  return fam;
}

}  // namespace convlab
