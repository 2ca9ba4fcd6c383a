#pragma once

// Convergence / spectrality side conditions evaluated on digit families:
// the existence series, the restricted-bound-count sum, the two growth
// functionals, the digit gcd dichotomy, and the support-radius series.
//
// Families are sequences k |-> (N_k, B_k) of raw digit data. Levels of the
// named double-exponential family are far too large to enumerate, so each
// level is exposed as a descriptor (scale, counts, max digit, digit gcd)
// with the full digit list attached only when it is small enough to
// materialize. Exact partial sums are computed from enumerable levels;
// verdicts beyond the computed depth come from the family's structure, and
// families without recognized structure stay inconclusive-at-depth.

#include <algorithm>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "admissible.hpp"
#include "numeric.hpp"
#include "transform.hpp"

namespace convlab {

inline constexpr long kDefaultConditionDepth = 64;
inline constexpr std::size_t kEnumerationCap = 1024;  // digits per level, for exact term sums

enum class Verdict { holds, fails, inconclusive };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::fails: return "fails";
    case Verdict::inconclusive: return "inconclusive-at-depth";
  }
  return "?";
}

struct ConditionReport {
  std::string condition;
  Verdict verdict = Verdict::inconclusive;
  long depth = 0;                       // levels examined
  std::vector<Rational> partial_sums;   // running exact sums, where the op sums
  std::vector<Rational> exact_ratios;   // running exact ratios, where the op compares
  std::vector<double> ratios;           // per-level ratios for the log functionals
  std::string witness;                  // how the verdict was reached
  std::optional<BigInt> gcd_value;      // gcd dichotomy: the global d when > 1
  std::vector<long> unit_gcd_prefix;    // gcd dichotomy: the index prefix with gcd 1
};

// One level of a digit family, without insisting the digits fit in memory.
struct LevelStats {
  BigInt N;
  BigInt digit_count;     // #B_k
  BigInt overflow_count;  // #(B_k \ {0,...,N_k - 1})
  BigInt max_digit;
  BigInt digit_gcd;       // gcd over all digits; 0 when B = {0}
  std::optional<std::vector<BigInt>> digits;  // present when enumerable
};

inline LevelStats level_stats_from_digits(const BigInt& N, std::vector<BigInt> digits) {
  if (digits.empty()) throw std::invalid_argument("level_stats_from_digits: empty digit set");
  std::sort(digits.begin(), digits.end());
  LevelStats s;
  s.N = N;
  s.digit_count = digits.size();
  s.max_digit = digits.back();
  BigInt g = 0, overflow = 0;
  for (const auto& b : digits) {
    g = gcd_big(g, b);
    if (b >= N) ++overflow;
  }
  s.digit_gcd = g;
  s.overflow_count = overflow;
  s.digits = std::move(digits);
  return s;
}

// A family of levels with enough structure to close verdicts:
//  - finite_list: exactly M levels; every sum/sup over the family is finite data
//  - periodic: an infinite cyclic repetition of the given levels
//  - double_exponential: N_k = 4^(2^(k-1)), B_k = {0,...,2^(2^(k-1))-2} u {4^(2^k)-1}
//  - power_digits: fixed N, B_k = {0, m^k}
//  - custom: arbitrary generator, no structure assumed
class PairFamily {
 public:
  enum class Kind { finite_list, periodic, double_exponential, power_digits, custom };

  static PairFamily finite_list(std::vector<std::pair<BigInt, std::vector<BigInt>>> levels) {
    return from_levels(Kind::finite_list, std::move(levels));
  }

  static PairFamily periodic(std::vector<std::pair<BigInt, std::vector<BigInt>>> levels) {
    return from_levels(Kind::periodic, std::move(levels));
  }

  static PairFamily finite_list(const std::vector<AdmissiblePair>& pairs) {
    return from_pairs(Kind::finite_list, pairs);
  }

  static PairFamily periodic(const std::vector<AdmissiblePair>& pairs) {
    return from_pairs(Kind::periodic, pairs);
  }

  static PairFamily double_exponential() {
    PairFamily f;
    f.kind_ = Kind::double_exponential;
    return f;
  }

  static PairFamily power_digits(BigInt N, BigInt m) {
    if (N < 2 || m < 2) throw std::invalid_argument("power_digits: need N >= 2 and m >= 2");
    PairFamily f;
    f.kind_ = Kind::power_digits;
    f.N_fixed_ = std::move(N);
    f.m_ = std::move(m);
    return f;
  }

  static PairFamily custom(std::function<LevelStats(long)> gen) {
    PairFamily f;
    f.kind_ = Kind::custom;
    f.gen_ = std::move(gen);
    return f;
  }

  Kind kind() const { return kind_; }

  // Number of levels that exist (finite_list) or LONG_MAX-ish for infinite kinds.
  long known_length() const {
    return kind_ == Kind::finite_list ? static_cast<long>(levels_.size()) : -1;
  }

  bool is_infinite() const { return kind_ != Kind::finite_list; }

  LevelStats level(long k) const {
    if (k < 1) throw std::out_of_range("PairFamily::level: k is 1-based");
    switch (kind_) {
      case Kind::finite_list:
        if (static_cast<std::size_t>(k) > levels_.size())
          throw std::out_of_range("PairFamily::level: beyond finite family");
        return levels_[static_cast<std::size_t>(k - 1)];
      case Kind::periodic:
        return levels_[static_cast<std::size_t>((k - 1) % static_cast<long>(levels_.size()))];
      case Kind::double_exponential:
        return tnc_level(k);
      case Kind::power_digits: {
        const BigInt big = pow_big(m_, static_cast<unsigned long>(k));
        return level_stats_from_digits(N_fixed_, {BigInt(0), big});
      }
      case Kind::custom:
        return gen_(k);
    }
    throw std::logic_error("PairFamily::level: unreachable");
  }

  const std::vector<LevelStats>& listed_levels() const { return levels_; }
  const BigInt& fixed_scale() const { return N_fixed_; }
  const BigInt& power_base() const { return m_; }

 private:
  PairFamily() = default;

  static PairFamily from_levels(Kind kind,
                                std::vector<std::pair<BigInt, std::vector<BigInt>>> levels) {
    if (levels.empty()) throw std::invalid_argument("PairFamily: empty level list");
    PairFamily f;
    f.kind_ = kind;
    for (auto& [N, digits] : levels) {
      if (N < 2) throw std::invalid_argument("PairFamily: scale must be >= 2");
      f.levels_.push_back(level_stats_from_digits(N, std::move(digits)));
    }
    return f;
  }

  static PairFamily from_pairs(Kind kind, const std::vector<AdmissiblePair>& pairs) {
    std::vector<std::pair<BigInt, std::vector<BigInt>>> levels;
    levels.reserve(pairs.size());
    for (const auto& p : pairs) levels.emplace_back(p.N, p.B);
    return from_levels(kind, std::move(levels));
  }

  // N_k = 4^(2^(k-1)); B_k = {0, ..., 2^(2^(k-1)) - 2} plus the single
  // overflow digit 4^(2^k) - 1 = N_k^2 - 1. Digits are enumerated only
  // while the count stays under the cap.
  static LevelStats tnc_level(long k) {
    if (k > 62) throw std::out_of_range("double_exponential family: level too deep to represent");
    const unsigned long half = 1UL << (k - 1);  // 2^(k-1)
    LevelStats s;
    s.N = pow_big(4, half);
    s.digit_count = pow_big(2, half);
    s.overflow_count = 1;
    s.max_digit = s.N * s.N - 1;
    s.digit_gcd = (k == 1) ? s.max_digit : BigInt(1);  // {0,15} at k=1; 1 is a digit from k=2 on
    if (s.digit_count <= kEnumerationCap) {
      std::vector<BigInt> digits;
      const long cnt = s.digit_count.convert_to<long>();
      digits.reserve(static_cast<std::size_t>(cnt));
      for (long b = 0; b + 1 < cnt; ++b) digits.emplace_back(b);
      digits.push_back(s.max_digit);
      s.digits = std::move(digits);
    }
    return s;
  }

  Kind kind_ = Kind::custom;
  std::vector<LevelStats> levels_;
  BigInt N_fixed_ = 0, m_ = 0;
  std::function<LevelStats(long)> gen_;
};

namespace detail {

// Depth actually iterated: finite lists stop at their length.
inline long effective_depth(const PairFamily& fam, long K) {
  if (fam.kind() == PairFamily::Kind::finite_list)
    return std::min(K, fam.known_length());
  return K;
}

// Explicit exponent lists and explicit symbol prefixes only reach so far.
inline long exponent_depth_limit(const ExponentSequence& e, long K) {
  if (e.kind == ExponentSequence::Kind::explicit_list)
    return std::min(K, static_cast<long>(e.values.size()));
  return K;
}

inline long model_depth_limit(const SequenceModel& m, long K) {
  if (m.kind == SequenceModel::Kind::explicit_prefix)
    return std::min(K, static_cast<long>(m.word.size()));
  return K;
}

inline Rational level_term_existence(const LevelStats& lv, const BigInt& D) {
  Rational t(0);
  for (const auto& b : *lv.digits) t += Rational(b, D + b);
  return t / Rational(lv.digit_count);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Existence series: sum_k (1/#B_k) sum_{b in B_k} b / (D_k + b), realized
// along a symbol sequence. Finiteness of the sum is the existence criterion
// for the infinite convolution.
// ---------------------------------------------------------------------------

// Core driver over realized levels. `provider(j)` returns the level used at
// position j; `D` accumulates the realized cumulative scale.
inline ConditionReport existence_series_driver(const std::function<LevelStats(long)>& provider,
                                               const ExponentSequence& exponents, long K,
                                               const std::string& structure_witness,
                                               Verdict structural_verdict) {
  ConditionReport rep;
  rep.condition = "existence-series";
  BigInt D = 1;
  Rational sum(0);
  long j = 1;
  bool truncated_by_enumeration = false;
  for (; j <= K; ++j) {
    LevelStats lv = provider(j);
    D *= pow_big(lv.N, static_cast<unsigned long>(exponents.at(j)));
    if (!lv.digits || lv.digit_count > BigInt(kEnumerationCap)) {
      truncated_by_enumeration = true;
      break;
    }
    sum += detail::level_term_existence(lv, D);
    rep.partial_sums.push_back(sum);
  }
  rep.depth = static_cast<long>(rep.partial_sums.size());
  rep.verdict = structural_verdict;
  rep.witness = structure_witness;
  if (truncated_by_enumeration)
    rep.witness += "; exact terms summed through level " + std::to_string(rep.depth) +
                   " (enumeration cap), verdict from family structure";
  return rep;
}

// Realized along the system's model: the pair list is finite, so the series
// is dominated termwise by max(B) * 2^{-j} and always converges.
inline ConditionReport existence_series(const PairSystem& sys, long K = kDefaultConditionDepth) {
  BigInt max_digit = 0;
  for (const auto& p : sys.pairs) max_digit = std::max(max_digit, p.B.back());
  const std::string witness =
      "finite pair list: terms are bounded by max(B)/D_j <= " + max_digit.str() +
      " * 2^-j, a convergent geometric tail, for every symbol sequence";
  const long depth = detail::model_depth_limit(
      sys.model, detail::exponent_depth_limit(sys.exponents, K));
  return existence_series_driver(
      [&sys](long j) {
        const AdmissiblePair& p = sys.pair_at_level(j);
        return level_stats_from_digits(p.N, p.B);
      },
      sys.exponents, depth, witness, Verdict::holds);
}

// Realized along the family's own index order (w = 1, 2, 3, ...).
inline ConditionReport existence_series(const PairFamily& fam, const ExponentSequence& exponents,
                                        long K = kDefaultConditionDepth) {
  Verdict v = Verdict::inconclusive;
  std::string witness;
  switch (fam.kind()) {
    case PairFamily::Kind::finite_list:
      v = Verdict::holds;
      witness = "finite family: the series is a finite sum";
      break;
    case PairFamily::Kind::periodic: {
      BigInt max_digit = 0;
      for (const auto& lv : fam.listed_levels()) max_digit = std::max(max_digit, lv.max_digit);
      v = Verdict::holds;
      witness = "periodic family: terms bounded by max(B)/D_j <= " + max_digit.str() +
                " * 2^-j, convergent geometric tail";
      break;
    }
    case PairFamily::Kind::double_exponential:
      v = Verdict::holds;
      witness =
          "double-exponential family: restricted-bound-count sum converges and "
          "log max(B_k) / log N_k < 2, which together bound the series (tight route)";
      break;
    case PairFamily::Kind::power_digits: {
      // term_k = (1/2) m^k / (N^k + m^k): geometric when m < N, bounded
      // below by a positive constant otherwise.
      if (fam.power_base() < fam.fixed_scale()) {
        v = Verdict::holds;
        witness = "power-digit family with m < N: terms <= (m/N)^k, convergent";
      } else {
        v = Verdict::fails;
        witness = "power-digit family with m >= N: terms are bounded below by 1/4, divergent";
      }
      break;
    }
    case PairFamily::Kind::custom:
      v = Verdict::inconclusive;
      witness = "no recognized structure beyond the computed partial sums";
      break;
  }
  const long max_k =
      detail::exponent_depth_limit(exponents, detail::effective_depth(fam, K));
  return existence_series_driver([&fam](long j) { return fam.level(j); }, exponents, max_k,
                                 witness, v);
}

// ---------------------------------------------------------------------------
// Restricted-bound-count sum: sum_k #B_{k,2} / #B_k, where B_{k,2} is the
// overflow part of the digit set (digits >= N_k).
// ---------------------------------------------------------------------------

inline ConditionReport rbc_sum(const PairFamily& fam, long K = kDefaultConditionDepth) {
  ConditionReport rep;
  rep.condition = "restricted-bound-count-sum";
  const long depth = detail::effective_depth(fam, K);
  Rational sum(0);
  for (long k = 1; k <= depth; ++k) {
    const LevelStats lv = fam.level(k);
    sum += Rational(lv.overflow_count, lv.digit_count);
    rep.partial_sums.push_back(sum);
  }
  rep.depth = depth;
  switch (fam.kind()) {
    case PairFamily::Kind::finite_list:
      rep.verdict = Verdict::holds;
      rep.witness = "finite family: the sum is finite";
      break;
    case PairFamily::Kind::periodic: {
      // re-scan one full period so the verdict does not depend on K
      bool positive = false;
      for (const auto& lv : fam.listed_levels())
        if (lv.overflow_count > 0) positive = true;
      rep.verdict = positive ? Verdict::fails : Verdict::holds;
      rep.witness = positive
                        ? "periodic family repeats a positive term infinitely often: divergent"
                        : "every digit set lies inside {0,...,N_k - 1}: all terms vanish";
      break;
    }
    case PairFamily::Kind::double_exponential:
      rep.verdict = Verdict::holds;
      rep.witness =
          "terms are 2^-(2^(k-1)); each term is the square of the previous, dominated by "
          "the geometric series from 1/2";
      break;
    case PairFamily::Kind::power_digits:
      rep.verdict = Verdict::fails;
      rep.witness = "the single digit m^k eventually exceeds N - 1 forever: terms are "
                    "eventually the constant 1/2, divergent";
      break;
    case PairFamily::Kind::custom:
      rep.verdict = Verdict::inconclusive;
      rep.witness = "no recognized structure beyond the computed partial sums";
      break;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Growth functional: sup_k log(max B_k) / log(N_k).
// ---------------------------------------------------------------------------

inline ConditionReport growth_sup(const PairFamily& fam, long K = kDefaultConditionDepth) {
  ConditionReport rep;
  rep.condition = "growth-sup";
  const long depth = detail::effective_depth(fam, K);
  double sup = 0.0;
  for (long k = 1; k <= depth; ++k) {
    const LevelStats lv = fam.level(k);
    const double r = lv.max_digit <= 1 ? 0.0 : log2_big(lv.max_digit) / log2_big(lv.N);
    rep.ratios.push_back(r);
    sup = std::max(sup, r);
  }
  rep.depth = depth;
  switch (fam.kind()) {
    case PairFamily::Kind::finite_list:
      rep.verdict = Verdict::holds;
      rep.witness = "finite family: sup over all levels is attained at depth";
      break;
    case PairFamily::Kind::periodic:
      rep.verdict = Verdict::holds;
      rep.witness = "periodic family: sup over one period bounds all levels";
      break;
    case PairFamily::Kind::double_exponential:
      rep.verdict = Verdict::holds;
      rep.witness = "max B_k = N_k^2 - 1 < N_k^2 exactly, so every ratio is below 2";
      break;
    case PairFamily::Kind::power_digits:
      rep.verdict = Verdict::fails;
      rep.witness = "ratio log(m^k)/log(N) = k log(m)/log(N) grows without bound";
      break;
    case PairFamily::Kind::custom:
      rep.verdict = Verdict::inconclusive;
      rep.witness = "running sup only; no structure to close the bound";
      break;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Uniform bound: sup_k max(B_k) / N_k (finite iff the digits stay within a
// fixed multiple of the scale).
// ---------------------------------------------------------------------------

inline ConditionReport uniform_bound(const PairFamily& fam, long K = kDefaultConditionDepth) {
  ConditionReport rep;
  rep.condition = "uniform-bound";
  const long depth = detail::effective_depth(fam, K);
  Rational sup(0);
  for (long k = 1; k <= depth; ++k) {
    const LevelStats lv = fam.level(k);
    const Rational r(lv.max_digit, lv.N);
    rep.exact_ratios.push_back(r);
    sup = std::max(sup, r);
  }
  rep.depth = depth;
  switch (fam.kind()) {
    case PairFamily::Kind::finite_list:
    case PairFamily::Kind::periodic:
      rep.verdict = Verdict::holds;
      rep.witness = "sup over the listed levels bounds the whole family: sup = " +
                    to_string_rat(sup);
      break;
    case PairFamily::Kind::double_exponential:
      rep.verdict = Verdict::fails;
      rep.witness = "max(B_k)/N_k = N_k - 1/N_k >= N_k - 1 grows without bound";
      break;
    case PairFamily::Kind::power_digits:
      rep.verdict = Verdict::fails;
      rep.witness = "max(B_k)/N = m^k/N grows without bound";
      break;
    case PairFamily::Kind::custom:
      rep.verdict = Verdict::inconclusive;
      rep.witness = "running sup only; no structure to close the bound";
      break;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Digit gcd dichotomy: either some finite index prefix has digit gcd 1
// (the zero-set machinery applies directly), or a global common divisor
// d > 1 calls for the rescale route B -> B/d.
// ---------------------------------------------------------------------------

inline ConditionReport gcd_analysis(const PairFamily& fam, long K = kDefaultConditionDepth) {
  ConditionReport rep;
  rep.condition = "gcd-analysis";
  const long depth = detail::effective_depth(fam, K);
  BigInt g = 0;
  for (long k = 1; k <= depth; ++k) {
    const LevelStats lv = fam.level(k);
    g = gcd_big(g, lv.digit_gcd);
    rep.depth = k;
    if (g == 1) {
      rep.verdict = Verdict::holds;
      for (long j = 1; j <= k; ++j) rep.unit_gcd_prefix.push_back(j);
      rep.witness = "digits of levels 1..." + std::to_string(k) +
                    " have gcd 1: the finite-prefix route applies";
      return rep;
    }
  }
  // gcd stayed above 1 through the examined depth
  const bool whole_family_seen =
      fam.kind() == PairFamily::Kind::finite_list
          ? depth >= fam.known_length()
          : (fam.kind() == PairFamily::Kind::periodic &&
             depth >= static_cast<long>(fam.listed_levels().size()));
  if (whole_family_seen || fam.kind() == PairFamily::Kind::power_digits) {
    rep.verdict = Verdict::holds;  // the dichotomy is resolved, on the rescale branch
    rep.gcd_value = g;
    rep.witness = "every digit is divisible by d = " + g.str() +
                  ": rescale the digit sets by d and scale the spectrum by 1/d";
  } else {
    rep.verdict = Verdict::inconclusive;
    rep.gcd_value = g;
    rep.witness = "gcd stayed at " + g.str() + " through depth " + std::to_string(depth) +
                  "; no structure rules out a later level dropping it to 1";
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Support-radius series: sum_k max(B_k)/D_k along the family order. A finite
// sum bounds the support of every truncation; divergence is the signature of
// unbounded support growth.
// ---------------------------------------------------------------------------

inline ConditionReport support_radius_series(const PairFamily& fam,
                                             const ExponentSequence& exponents,
                                             long K = kDefaultConditionDepth) {
  ConditionReport rep;
  rep.condition = "support-radius-series";
  const long depth = detail::exponent_depth_limit(exponents, detail::effective_depth(fam, K));
  BigInt D = 1;
  Rational sum(0);
  long k = 1;
  for (; k <= depth; ++k) {
    const LevelStats lv = fam.level(k);
    D *= pow_big(lv.N, static_cast<unsigned long>(exponents.at(k)));
    sum += Rational(lv.max_digit, D);
    rep.partial_sums.push_back(sum);
  }
  rep.depth = static_cast<long>(rep.partial_sums.size());
  switch (fam.kind()) {
    case PairFamily::Kind::finite_list:
      rep.verdict = Verdict::holds;
      rep.witness = "finite family: finite sum";
      break;
    case PairFamily::Kind::periodic: {
      BigInt max_digit = 0;
      for (const auto& lv : fam.listed_levels()) max_digit = std::max(max_digit, lv.max_digit);
      rep.verdict = Verdict::holds;
      rep.witness = "terms bounded by " + max_digit.str() + " * 2^-k, convergent";
      break;
    }
    case PairFamily::Kind::double_exponential:
      rep.verdict = Verdict::fails;
      rep.witness =
          "terms (N_k^2 - 1)/D_k exceed 3 at every level: the series diverges and the "
          "truncation supports grow without bound";
      break;
    case PairFamily::Kind::power_digits:
      rep.verdict = fam.power_base() < fam.fixed_scale() ? Verdict::holds : Verdict::fails;
      rep.witness = fam.power_base() < fam.fixed_scale()
                        ? "terms (m/N)^k form a convergent geometric series"
                        : "terms m^k/N^k do not tend to zero: divergent";
      break;
    case PairFamily::Kind::custom:
      rep.verdict = Verdict::inconclusive;
      rep.witness = "partial sums only";
      break;
  }
  return rep;
}

// Convenience: every condition on one family, in a fixed order.
inline std::vector<ConditionReport> all_conditions(const PairFamily& fam,
                                                   const ExponentSequence& exponents,
                                                   long K = kDefaultConditionDepth) {
  return {existence_series(fam, exponents, K), rbc_sum(fam, K), growth_sup(fam, K),
          uniform_bound(fam, K), gcd_analysis(fam, K), support_radius_series(fam, exponents, K)};
}

}  // namespace convlab
