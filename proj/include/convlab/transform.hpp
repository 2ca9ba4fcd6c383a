#pragma once

// The truncation tower: a pair system (pairs + symbol model + exponent
// sequence) determines level-k measures
//   mu_k = *_{j<=k} (uniform on B_{w_j} / D_j),   D_j = prod_{i<=j} N_{w_i}^{n_i},
// their Fourier transforms as mask products, and the tail measures obtained
// by shifting the system. Atoms and scales are exact; Fourier evaluation is
// double precision with exact mod-1 reduction of rational arguments.

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "admissible.hpp"
#include "measure.hpp"
#include "numeric.hpp"
#include "sequence.hpp"

namespace convlab {

inline constexpr std::size_t kDefaultAtomCap = std::size_t(1) << 22;

struct ExponentSequence {
  enum class Kind { constant_one, explicit_list, affine };

  Kind kind = Kind::constant_one;
  std::vector<long> values;  // explicit_list
  long a = 0, c = 1;         // affine: n_k = a*k + c

  static ExponentSequence constant_one() { return ExponentSequence{}; }

  static ExponentSequence explicit_list(std::vector<long> v) {
    for (long n : v)
      if (n < 1) throw std::invalid_argument("ExponentSequence: exponents must be >= 1");
    if (v.empty()) throw std::invalid_argument("ExponentSequence: empty list");
    return ExponentSequence{Kind::explicit_list, std::move(v), 0, 1};
  }

  static ExponentSequence affine(long a, long c) {
    if (a < 0 || a + c < 1)
      throw std::invalid_argument("ExponentSequence: affine rule must keep n_k >= 1");
    return ExponentSequence{Kind::affine, {}, a, c};
  }

  long at(long k) const {  // n_k, 1-based
    if (k < 1) throw std::out_of_range("ExponentSequence: k is 1-based");
    switch (kind) {
      case Kind::constant_one:
        return 1;
      case Kind::explicit_list:
        if (static_cast<std::size_t>(k) > values.size())
          throw std::out_of_range("ExponentSequence: index beyond explicit list");
        return values[static_cast<std::size_t>(k - 1)];
      case Kind::affine:
        return a * k + c;
    }
    throw std::logic_error("ExponentSequence: unreachable");
  }

  // The sequence k |-> n_{k+steps}, for tail systems.
  ExponentSequence shifted(long steps) const {
    if (steps < 0) throw std::invalid_argument("ExponentSequence: negative shift");
    switch (kind) {
      case Kind::constant_one:
        return *this;
      case Kind::explicit_list: {
        if (static_cast<std::size_t>(steps) >= values.size())
          throw std::out_of_range("ExponentSequence: shift exhausts explicit list");
        return explicit_list({values.begin() + steps, values.end()});
      }
      case Kind::affine:
        return affine(a, a * steps + c);
    }
    throw std::logic_error("ExponentSequence: unreachable");
  }
};

struct PairSystem {
  std::vector<AdmissiblePair> pairs;  // symbol k (1-based) -> pairs[k-1]
  SequenceModel model;
  ExponentSequence exponents;

  PairSystem(std::vector<AdmissiblePair> pairs_, SequenceModel model_,
             ExponentSequence exponents_ = ExponentSequence::constant_one())
      : pairs(std::move(pairs_)), model(std::move(model_)), exponents(std::move(exponents_)) {
    if (pairs.empty()) throw std::invalid_argument("PairSystem: no pairs");
    if (model.kind != SequenceModel::Kind::iid_bernoulli &&
        model.alphabet_size() > static_cast<int>(pairs.size()))
      throw std::invalid_argument("PairSystem: model symbol exceeds pair count");
    if (model.kind == SequenceModel::Kind::iid_bernoulli &&
        model.prob->size() > pairs.size())
      throw std::invalid_argument("PairSystem: probability vector longer than pair list");
  }

  const AdmissiblePair& pair_at_level(long k) const {
    return pairs[static_cast<std::size_t>(symbol_at(model, k) - 1)];
  }

  // The system whose level j is this system's level j + k.
  PairSystem tail_system(long k) const {
    return PairSystem(pairs, shift(model, k), exponents.shifted(k));
  }
};

// D_k = prod_{j<=k} N_{w_j}^{n_j}; D_0 = 1.
inline BigInt cumulative_scale(const PairSystem& sys, long k) {
  BigInt d = 1;
  for (long j = 1; j <= k; ++j)
    d *= pow_big(sys.pair_at_level(j).N,
                 static_cast<unsigned long>(sys.exponents.at(j)));
  return d;
}

// mu_k: convolution of the k scaled digit measures. Throws AtomCapExceeded
// when an intermediate atom count would exceed the cap.
inline DiscreteMeasure truncate(const PairSystem& sys, long k,
                                std::size_t atom_cap = kDefaultAtomCap) {
  if (k < 1) throw std::invalid_argument("truncate: level must be >= 1");
  BigInt D = 1;
  DiscreteMeasure mu = DiscreteMeasure::dirac(Rational(0));
  for (long j = 1; j <= k; ++j) {
    const AdmissiblePair& p = sys.pair_at_level(j);
    D *= pow_big(p.N, static_cast<unsigned long>(sys.exponents.at(j)));
    mu = convolve(mu, dirac_uniform(p.B, Rational(D)), atom_cap);
  }
  return mu;
}

// mask(B, xi) = (1/#B) sum_{b in B} e^{-2 pi i b xi}.
inline std::complex<double> mask_eval(const std::vector<BigInt>& digits, double xi) {
  std::complex<double> s(0.0, 0.0);
  for (const auto& b : digits) {
    const double theta = -2.0 * M_PI * to_double(b) * xi;
    s += std::complex<double>(std::cos(theta), std::sin(theta));
  }
  return s / static_cast<double>(digits.size());
}

// Exact-argument entry point: b*xi is reduced mod 1 in rational arithmetic
// before evaluation, so huge rational arguments keep full precision.
inline std::complex<double> mask_eval(const std::vector<BigInt>& digits, const Rational& xi) {
  std::complex<double> s(0.0, 0.0);
  for (const auto& b : digits) {
    const double theta = -2.0 * M_PI * to_double(frac(Rational(b) * xi));
    s += std::complex<double>(std::cos(theta), std::sin(theta));
  }
  return s / static_cast<double>(digits.size());
}

// FT of mu_k as the mask product prod_{j<=k} mask(B_{w_j}, xi / D_j).
inline std::complex<double> ft_truncated(const PairSystem& sys, long k, double xi) {
  std::complex<double> prod(1.0, 0.0);
  BigInt D = 1;
  for (long j = 1; j <= k; ++j) {
    const AdmissiblePair& p = sys.pair_at_level(j);
    D *= pow_big(p.N, static_cast<unsigned long>(sys.exponents.at(j)));
    prod *= mask_eval(p.B, xi / to_double(D));
  }
  return prod;
}

inline std::complex<double> ft_truncated(const PairSystem& sys, long k, const Rational& xi) {
  std::complex<double> prod(1.0, 0.0);
  BigInt D = 1;
  for (long j = 1; j <= k; ++j) {
    const AdmissiblePair& p = sys.pair_at_level(j);
    D *= pow_big(p.N, static_cast<unsigned long>(sys.exponents.at(j)));
    prod *= mask_eval(p.B, Rational(xi / Rational(D)));
  }
  return prod;
}

// Tail measure nu_{>k} truncated at depth m: the level-m truncation of the
// shifted system (levels k+1, ..., k+m of the original).
inline DiscreteMeasure tail_measure(const PairSystem& sys, long k, long m,
                                    std::size_t atom_cap = kDefaultAtomCap) {
  return truncate(sys.tail_system(k), m, atom_cap);
}

struct TailDiagnosticRow {
  long k = 0;
  std::complex<double> value;   // FT of the depth-m tail truncation at xi
  double dist_to_one = 0.0;     // |value - 1|
};

// Watches nu_{>k}^ (xi) as k grows: convergence to 1 signals the tails
// collapsing to the point mass at 0, the mechanism behind sequences whose
// random measure degenerates.
inline std::vector<TailDiagnosticRow> tail_delta0_diagnostic(const PairSystem& sys, double xi,
                                                             long k_max, long m) {
  std::vector<TailDiagnosticRow> rows;
  rows.reserve(static_cast<std::size_t>(k_max));
  for (long k = 1; k <= k_max; ++k) {
    const auto v = ft_truncated(sys.tail_system(k), m, xi);
    rows.push_back({k, v, std::abs(v - std::complex<double>(1.0, 0.0))});
  }
  return rows;
}

}  // namespace convlab
