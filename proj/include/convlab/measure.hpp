#pragma once

// Finitely supported probability measures on the line with exact rational
// atoms and weights, plus the two operations the truncation tower needs:
// convolution and affine pushforward. Everything here is exact; floating
// point enters only in the Fourier layer.

#include <algorithm>
#include <complex>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "numeric.hpp"

namespace convlab {

// x -> a*x + b with a != 0.
struct ScaleMap {
  Rational a;
  Rational b;

  ScaleMap(Rational a_, Rational b_) : a(std::move(a_)), b(std::move(b_)) {
    if (a == 0) throw std::invalid_argument("ScaleMap: a must be nonzero");
  }
};

class DiscreteMeasure {
 public:
  // Builds from (atom, weight) pairs: sorts, merges duplicate atoms exactly,
  // and checks weights are positive with total mass exactly 1.
  static DiscreteMeasure from_atoms(std::vector<std::pair<Rational, Rational>> pairs) {
    std::map<Rational, Rational> acc;
    for (auto& [x, w] : pairs) acc[x] += w;
    DiscreteMeasure m;
    Rational mass(0);
    m.atoms_.reserve(acc.size());
    m.weights_.reserve(acc.size());
    for (auto& [x, w] : acc) {
      if (w == 0) continue;  // exact cancellation is allowed to drop an atom
      if (w < 0) throw std::invalid_argument("DiscreteMeasure: negative weight");
      mass += w;
      m.atoms_.push_back(x);
      m.weights_.push_back(w);
    }
    if (mass != 1) throw std::invalid_argument("DiscreteMeasure: total mass must be exactly 1");
    return m;
  }

  static DiscreteMeasure dirac(const Rational& position) {
    return from_atoms({{position, Rational(1)}});
  }

  const std::vector<Rational>& atoms() const { return atoms_; }
  const std::vector<Rational>& weights() const { return weights_; }
  std::size_t size() const { return atoms_.size(); }

  Rational weight_at(const Rational& x) const {
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), x);
    if (it == atoms_.end() || *it != x) return Rational(0);
    return weights_[static_cast<std::size_t>(it - atoms_.begin())];
  }

  bool operator==(const DiscreteMeasure& o) const {
    return atoms_ == o.atoms_ && weights_ == o.weights_;
  }

  // Direct Fourier transform: sum_j w_j e^{-2 pi i x_j xi}. The independent
  // cross-check for the mask-product evaluation path.
  std::complex<double> fourier(double xi) const {
    std::complex<double> s(0.0, 0.0);
    for (std::size_t j = 0; j < atoms_.size(); ++j) {
      const double theta = -2.0 * M_PI * to_double(atoms_[j]) * xi;
      s += to_double(weights_[j]) * std::complex<double>(std::cos(theta), std::sin(theta));
    }
    return s;
  }

 private:
  DiscreteMeasure() = default;
  std::vector<Rational> atoms_;    // sorted ascending, distinct
  std::vector<Rational> weights_;  // positive, sum exactly 1
};

// Uniform measure on {d / denom : d in digits}. Digits need not be distinct-
// free of collisions after scaling only if they were distinct to begin with;
// duplicates are rejected.
inline DiscreteMeasure dirac_uniform(const std::vector<BigInt>& digits, const Rational& denom) {
  if (digits.empty()) throw std::invalid_argument("dirac_uniform: empty digit set");
  if (denom == 0) throw std::invalid_argument("dirac_uniform: zero denominator");
  std::vector<std::pair<Rational, Rational>> pairs;
  pairs.reserve(digits.size());
  const Rational w(1, BigInt(digits.size()));
  for (const auto& d : digits) pairs.emplace_back(Rational(d) / denom, w);
  auto m = DiscreteMeasure::from_atoms(std::move(pairs));
  if (m.size() != digits.size())
    throw std::invalid_argument("dirac_uniform: duplicate digits");
  return m;
}

struct AtomCapExceeded : std::runtime_error {
  explicit AtomCapExceeded(const std::string& what) : std::runtime_error(what) {}
};

// Exact convolution; atoms are all pairwise sums with merged weights.
// cap, when nonzero, bounds the pre-merge product size so memory stays
// bounded; the truncation driver uses it.
inline DiscreteMeasure convolve(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                std::size_t cap = 0) {
  if (cap != 0 && mu.size() * nu.size() > cap)
    throw AtomCapExceeded("convolve: atom count " + std::to_string(mu.size() * nu.size()) +
                          " exceeds cap " + std::to_string(cap));
  std::map<Rational, Rational> acc;
  for (std::size_t i = 0; i < mu.size(); ++i)
    for (std::size_t j = 0; j < nu.size(); ++j)
      acc[mu.atoms()[i] + nu.atoms()[j]] += mu.weights()[i] * nu.weights()[j];
  std::vector<std::pair<Rational, Rational>> pairs(acc.begin(), acc.end());
  return DiscreteMeasure::from_atoms(std::move(pairs));
}

// Pushforward under x -> a x + b; a bijection on atoms, weights unchanged.
inline DiscreteMeasure pushforward(const DiscreteMeasure& mu, const ScaleMap& map) {
  std::vector<std::pair<Rational, Rational>> pairs;
  pairs.reserve(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i)
    pairs.emplace_back(map.a * mu.atoms()[i] + map.b, mu.weights()[i]);
  return DiscreteMeasure::from_atoms(std::move(pairs));
}

// CSV: one header line, then atom_numerator,atom_denominator,weight_numerator,weight_denominator.
inline std::string to_csv(const DiscreteMeasure& mu) {
  std::string out = "atom_numerator,atom_denominator,weight_numerator,weight_denominator\n";
  for (std::size_t i = 0; i < mu.size(); ++i) {
    out += numerator(mu.atoms()[i]).str() + "," + denominator(mu.atoms()[i]).str() + ",";
    out += numerator(mu.weights()[i]).str() + "," + denominator(mu.weights()[i]).str() + "\n";
  }
  return out;
}

inline DiscreteMeasure measure_from_csv(const std::string& csv) {
  std::vector<std::pair<Rational, Rational>> pairs;
  std::size_t pos = 0;
  bool header_skipped = false;
  while (pos < csv.size()) {
    auto eol = csv.find('\n', pos);
    if (eol == std::string::npos) eol = csv.size();
    const std::string line = csv.substr(pos, eol - pos);
    pos = eol + 1;
    if (line.empty() || line[0] == '#') continue;
    if (!header_skipped) {  // first non-comment line is the header
      header_skipped = true;
      continue;
    }
    std::vector<std::string> cells;
    std::size_t c = 0;
    while (true) {
      auto comma = line.find(',', c);
      if (comma == std::string::npos) {
        cells.push_back(line.substr(c));
        break;
      }
      cells.push_back(line.substr(c, comma - c));
      c = comma + 1;
    }
    if (cells.size() != 4) throw std::invalid_argument("measure_from_csv: malformed row: " + line);
    pairs.emplace_back(Rational(BigInt(cells[0]), BigInt(cells[1])),
                       Rational(BigInt(cells[2]), BigInt(cells[3])));
  }
  return DiscreteMeasure::from_atoms(std::move(pairs));
}

}  // namespace convlab
