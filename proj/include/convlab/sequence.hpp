#pragma once

// Symbol sequences: the index space for which pair gets used at which level.
// Three model kinds (explicit prefix, periodic word, seeded i.i.d. draws),
// the 2^{-common prefix} metric, the shift, and exact cylinder probabilities.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "numeric.hpp"

namespace convlab {

// Finite list of nonnegative rationals summing to exactly 1.
struct ProbabilityVector {
  std::vector<Rational> entries;

  explicit ProbabilityVector(std::vector<Rational> e) : entries(std::move(e)) {
    if (entries.empty()) throw std::invalid_argument("ProbabilityVector: empty");
    Rational mass(0);
    for (const auto& p : entries) {
      if (p < 0) throw std::invalid_argument("ProbabilityVector: negative entry");
      mass += p;
    }
    if (mass != 1) throw std::invalid_argument("ProbabilityVector: entries must sum to 1");
  }

  std::size_t size() const { return entries.size(); }
};

// Truncated geometric distribution p_j proportional to r^(j-1): entries are
// emitted until cumulative mass reaches 1 - 1e-12, and the remaining tail
// mass is folded into the last entry so the total stays exactly 1.
inline ProbabilityVector geometric_tail_vector(const Rational& r) {
  if (r <= 0 || r >= 1)
    throw std::invalid_argument("geometric_tail_vector: need 0 < r < 1");
  const Rational cutoff = Rational(1) - Rational(1, BigInt("1000000000000"));
  std::vector<Rational> entries;
  Rational mass(0), term = Rational(1) - r;  // p_1 = (1-r) r^0
  while (mass + term < cutoff) {
    entries.push_back(term);
    mass += term;
    term *= r;
  }
  entries.push_back(Rational(1) - mass);  // lump the tail
  return ProbabilityVector(std::move(entries));
}

namespace detail {

// Counter-based generator: one 64-bit mix per (seed, index), so draws are
// reproducible and independent of evaluation order.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t draw_u64(std::uint64_t seed, std::uint64_t index) {
  return mix64(mix64(seed) ^ mix64(index * 0xD1342543DE82EF95ULL + 0x2545F4914F6CDD1DULL));
}

}  // namespace detail

struct SequenceModel {
  enum class Kind { explicit_prefix, periodic_word, iid_bernoulli };

  Kind kind;
  std::vector<int> word;                  // prefix (explicit) or repeating word (periodic)
  std::optional<ProbabilityVector> prob;  // iid only
  std::optional<std::uint64_t> seed;      // iid only
  long iid_offset = 0;                    // shift state for iid models

  static SequenceModel explicit_prefix(std::vector<int> prefix) {
    validate_word(prefix, /*allow_empty=*/false);
    return SequenceModel{Kind::explicit_prefix, std::move(prefix), std::nullopt, std::nullopt, 0};
  }

  static SequenceModel periodic_word(std::vector<int> w) {
    validate_word(w, /*allow_empty=*/false);
    return SequenceModel{Kind::periodic_word, std::move(w), std::nullopt, std::nullopt, 0};
  }

  static SequenceModel iid_bernoulli(ProbabilityVector p, std::uint64_t seed) {
    return SequenceModel{Kind::iid_bernoulli, {}, std::move(p), seed, 0};
  }

  // Largest symbol this model can produce (symbols are 1-based).
  int alphabet_size() const {
    if (kind == Kind::iid_bernoulli) return static_cast<int>(prob->size());
    return *std::max_element(word.begin(), word.end());
  }

 private:
  static void validate_word(const std::vector<int>& w, bool allow_empty) {
    if (!allow_empty && w.empty()) throw std::invalid_argument("SequenceModel: empty word");
    for (int s : w)
      if (s < 1) throw std::invalid_argument("SequenceModel: symbols are 1-based positive");
  }
};

// k-th symbol (1-based). Explicit prefixes error past their end; periodic
// words wrap; iid models draw by hashing (seed, k) and inverting the exact
// cumulative distribution.
inline int symbol_at(const SequenceModel& m, long k) {
  if (k < 1) throw std::out_of_range("symbol_at: k is 1-based");
  switch (m.kind) {
    case SequenceModel::Kind::explicit_prefix:
      if (static_cast<std::size_t>(k) > m.word.size())
        throw std::out_of_range("symbol_at: index beyond explicit prefix");
      return m.word[static_cast<std::size_t>(k - 1)];
    case SequenceModel::Kind::periodic_word:
      return m.word[static_cast<std::size_t>((k - 1) % static_cast<long>(m.word.size()))];
    case SequenceModel::Kind::iid_bernoulli: {
      const std::uint64_t u =
          detail::draw_u64(*m.seed, static_cast<std::uint64_t>(k + m.iid_offset));
      // u / 2^64 < cumulative(p_1..p_j)  <=>  u * den < num << 64 (exact)
      const Rational uq(BigInt(u), pow_big(2, 64));
      Rational cum(0);
      for (std::size_t j = 0; j < m.prob->size(); ++j) {
        cum += m.prob->entries[j];
        if (uq < cum) return static_cast<int>(j + 1);
      }
      return static_cast<int>(m.prob->size());  // guard against rounding at the top end
    }
  }
  throw std::logic_error("symbol_at: unreachable");
}

// First k symbols as an explicit word.
inline std::vector<int> prefix_of(const SequenceModel& m, long k) {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(k));
  for (long j = 1; j <= k; ++j) out.push_back(symbol_at(m, j));
  return out;
}

// d(u, v) = 2^{-(length of common prefix)}; identical through their shared
// length gives 2^{-min length}, and equal-length identical words give
// 2^{-length} (the data exhausted floor). d(u, u) is 0 only in the limit.
inline double common_prefix_metric(const std::vector<int>& u, const std::vector<int>& v) {
  const std::size_t n = std::min(u.size(), v.size());
  std::size_t lcp = 0;
  while (lcp < n && u[lcp] == v[lcp]) ++lcp;
  return std::ldexp(1.0, -static_cast<int>(lcp));
}

// Left shift by `steps` symbols: sigma^steps. Explicit prefixes drop symbols
// (error if the prefix is exhausted), periodic words rotate, iid models
// reindex their draws so shift composes additively and is reproducible.
inline SequenceModel shift(const SequenceModel& m, long steps) {
  if (steps < 0) throw std::invalid_argument("shift: negative step");
  SequenceModel out = m;
  switch (m.kind) {
    case SequenceModel::Kind::explicit_prefix: {
      if (static_cast<std::size_t>(steps) >= m.word.size())
        throw std::out_of_range("shift: explicit prefix exhausted");
      out.word.assign(m.word.begin() + steps, m.word.end());
      return out;
    }
    case SequenceModel::Kind::periodic_word: {
      const long n = static_cast<long>(m.word.size());
      const long r = steps % n;
      std::rotate(out.word.begin(), out.word.begin() + r, out.word.end());
      return out;
    }
    case SequenceModel::Kind::iid_bernoulli:
      out.iid_offset += steps;
      return out;
  }
  throw std::logic_error("shift: unreachable");
}

// Probability of the cylinder [w_1 ... w_m] under the product measure with
// marginal p. Symbols outside the support contribute factor 0; the empty
// word has probability 1.
inline Rational cylinder_probability(const ProbabilityVector& p, const std::vector<int>& word) {
  Rational q(1);
  for (int s : word) {
    if (s < 1) throw std::invalid_argument("cylinder_probability: symbols are 1-based");
    if (static_cast<std::size_t>(s) > p.size()) return Rational(0);
    q *= p.entries[static_cast<std::size_t>(s - 1)];
    if (q == 0) return q;
  }
  return q;
}

}  // namespace convlab
