#include <catch2/catch_amalgamated.hpp>

#include <convlab/criteria.hpp>

#include <vector>

using namespace convlab;

namespace {

std::vector<BigInt> big(std::initializer_list<long> xs) {
  std::vector<BigInt> out;
  for (long x : xs) out.emplace_back(x);
  return out;
}

PairSystem quarter_system() {
  return PairSystem({AdmissiblePair(BigInt(4), big({0, 2}), big({0, 1}))},
                    SequenceModel::periodic_word({1}));
}

PairFamily tnc() { return PairFamily::double_exponential(); }

using RawLevels = std::vector<std::pair<BigInt, std::vector<BigInt>>>;
PairFamily fam_list(RawLevels lv) { return PairFamily::finite_list(std::move(lv)); }
PairFamily fam_periodic(RawLevels lv) { return PairFamily::periodic(std::move(lv)); }

}  // namespace

TEST_CASE("level stats", "[criteria]") {
  const auto s = level_stats_from_digits(BigInt(4), big({0, 2, 9}));
  CHECK(s.digit_count == BigInt(3));
  CHECK(s.overflow_count == BigInt(1));  // only 9 >= 4
  CHECK(s.max_digit == BigInt(9));
  CHECK(s.digit_gcd == BigInt(1));
  REQUIRE(s.digits.has_value());
  CHECK(*s.digits == big({0, 2, 9}));

  const auto z = level_stats_from_digits(BigInt(4), big({0}));
  CHECK(z.digit_gcd == BigInt(0));
  CHECK(z.overflow_count == BigInt(0));
}

TEST_CASE("double-exponential family levels", "[criteria]") {
  const auto fam = tnc();
  const auto l1 = fam.level(1);
  CHECK(l1.N == BigInt(4));
  CHECK(l1.digit_count == BigInt(2));
  CHECK(l1.max_digit == BigInt(15));
  CHECK(l1.digit_gcd == BigInt(15));
  REQUIRE(l1.digits.has_value());
  CHECK(*l1.digits == big({0, 15}));

  const auto l2 = fam.level(2);
  CHECK(l2.N == BigInt(16));
  CHECK(l2.digit_count == BigInt(4));
  CHECK(l2.max_digit == BigInt(255));
  CHECK(l2.digit_gcd == BigInt(1));
  CHECK(*l2.digits == big({0, 1, 2, 255}));

  // level 5 has 2^16 digits: described but not enumerated
  const auto l5 = fam.level(5);
  CHECK(l5.digit_count == pow_big(2, 16));
  CHECK(l5.overflow_count == BigInt(1));
  CHECK(l5.max_digit == l5.N * l5.N - 1);
  CHECK_FALSE(l5.digits.has_value());

  CHECK_THROWS(fam.level(63));
}

TEST_CASE("existence series along a periodic system", "[criteria]") {
  // terms (1/2) * 2/(4^k + 2) = 1/(4^k + 2)
  const auto rep = existence_series(quarter_system(), 3);
  CHECK(rep.condition == "existence-series");
  CHECK(rep.verdict == Verdict::holds);
  REQUIRE(rep.depth == 3);
  CHECK(rep.partial_sums[0] == Rational(1, 6));
  CHECK(rep.partial_sums[1] == Rational(2, 9));
  CHECK(rep.partial_sums[2] == Rational(47, 198));
}

TEST_CASE("existence series respects explicit prefixes and lists", "[criteria]") {
  PairSystem sys({AdmissiblePair(BigInt(4), big({0, 2}))},
                 SequenceModel::explicit_prefix({1, 1}));
  CHECK(existence_series(sys, 64).depth == 2);  // clamped, no throw

  PairSystem lim({AdmissiblePair(BigInt(4), big({0, 2}))}, SequenceModel::periodic_word({1}),
                 ExponentSequence::explicit_list({1, 1, 1}));
  CHECK(existence_series(lim, 64).depth == 3);
}

TEST_CASE("existence series over families", "[criteria]") {
  // power digits with m >= N diverge: terms are exactly 1/4 when m = N = 2
  const auto bad = existence_series(PairFamily::power_digits(BigInt(2), BigInt(2)),
                                    ExponentSequence::constant_one(), 3);
  CHECK(bad.verdict == Verdict::fails);
  CHECK(bad.partial_sums[2] == Rational(3, 4));

  const auto good = existence_series(PairFamily::power_digits(BigInt(3), BigInt(2)),
                                     ExponentSequence::constant_one(), 8);
  CHECK(good.verdict == Verdict::holds);

  // the degenerate digit set {0} contributes zero terms
  const auto zero = existence_series(fam_list({{BigInt(2), big({0})}}),
                                     ExponentSequence::constant_one(), 5);
  CHECK(zero.verdict == Verdict::holds);
  CHECK(zero.partial_sums == std::vector<Rational>{Rational(0)});

  // double-exponential: exact sums stop at the enumeration cap, the verdict
  // comes from the family structure
  const auto de = existence_series(tnc(), ExponentSequence::constant_one(), 8);
  CHECK(de.verdict == Verdict::holds);
  CHECK(de.depth == 4);  // level 5 has 2^16 digits, beyond the cap
  CHECK(de.witness.find("enumeration cap") != std::string::npos);

  const auto inc = existence_series(
      PairFamily::custom([](long) { return level_stats_from_digits(BigInt(4), big({0, 2})); }),
      ExponentSequence::constant_one(), 4);
  CHECK(inc.verdict == Verdict::inconclusive);
}

TEST_CASE("restricted-bound-count sum on the double-exponential family", "[criteria]") {
  const auto rep = rbc_sum(tnc(), 5);
  CHECK(rep.verdict == Verdict::holds);
  REQUIRE(rep.depth == 5);
  // partial sums of 1/2 + 1/4 + 1/16 + 1/256 + 1/65536, exactly
  const std::vector<Rational> expect = {
      Rational(1, 2), Rational(3, 4), Rational(13, 16), Rational(209, 256),
      Rational(53505, 65536)};
  CHECK(rep.partial_sums == expect);
  // each term is the square of the previous one
  Rational prev = rep.partial_sums[0];
  for (std::size_t k = 1; k < rep.partial_sums.size(); ++k) {
    const Rational term = rep.partial_sums[k] - rep.partial_sums[k - 1];
    const Rational prev_term =
        k == 1 ? rep.partial_sums[0] : rep.partial_sums[k - 1] - rep.partial_sums[k - 2];
    CHECK(term == prev_term * prev_term);
    prev = term;
  }
}

TEST_CASE("restricted-bound-count sum dichotomies", "[criteria]") {
  // all digits in range: every term vanishes
  const auto ok = rbc_sum(fam_periodic({{BigInt(4), big({0, 2})}}), 6);
  CHECK(ok.verdict == Verdict::holds);
  CHECK(ok.partial_sums.back() == Rational(0));

  // a periodic family with an overflow digit repeats a positive term
  const auto bad = rbc_sum(fam_periodic({{BigInt(2), big({0, 3})}}), 4);
  CHECK(bad.verdict == Verdict::fails);
  CHECK(bad.partial_sums == std::vector<Rational>{Rational(1, 2), Rational(1), Rational(3, 2),
                                                  Rational(2)});

  CHECK(rbc_sum(PairFamily::power_digits(BigInt(2), BigInt(2)), 4).verdict == Verdict::fails);

  const auto inc = rbc_sum(
      PairFamily::custom([](long) { return level_stats_from_digits(BigInt(4), big({0, 2})); }),
      4);
  CHECK(inc.verdict == Verdict::inconclusive);
}

TEST_CASE("growth sup", "[criteria]") {
  const auto de = growth_sup(tnc(), 6);
  CHECK(de.verdict == Verdict::holds);
  // deep levels round to exactly 2 in doubles (log2(2^64 - 1) -> 64.0); the
  // strict bound is structural, not numerical
  for (double r : de.ratios) CHECK(r <= 2.0);
  // early ratios approach 2 from below: log(N_k^2 - 1)/log(N_k)
  CHECK(de.ratios[0] == Catch::Approx(std::log2(15.0) / 2.0));
  CHECK(de.ratios[1] < 2.0);
  CHECK(de.ratios[5] > 1.999);

  const auto fin = growth_sup(
      fam_list({{BigInt(4), big({0, 2})}, {BigInt(2), big({0, 1})}}), 64);
  CHECK(fin.verdict == Verdict::holds);
  CHECK(fin.depth == 2);
  CHECK(fin.ratios[0] == Catch::Approx(0.5));
  CHECK(fin.ratios[1] == 0.0);  // max digit 1 contributes log 0 -> ratio 0 by convention

  CHECK(growth_sup(PairFamily::power_digits(BigInt(2), BigInt(2)), 8).verdict == Verdict::fails);
}

TEST_CASE("uniform bound", "[criteria]") {
  const auto fin = uniform_bound(
      fam_list({{BigInt(4), big({0, 2})}, {BigInt(2), big({0, 1})}}), 64);
  CHECK(fin.verdict == Verdict::holds);
  CHECK(fin.exact_ratios == std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
  CHECK(fin.witness.find("1/2") != std::string::npos);

  const auto de = uniform_bound(tnc(), 4);
  CHECK(de.verdict == Verdict::fails);
  // ratio at level k is N_k - 1/N_k, already over 3 at level 1
  CHECK(de.exact_ratios[0] == Rational(15, 4));

  CHECK(uniform_bound(PairFamily::power_digits(BigInt(2), BigInt(3)), 8).verdict ==
        Verdict::fails);
}

TEST_CASE("gcd dichotomy", "[criteria]") {
  // unit gcd reached within a finite prefix
  const auto mixed = gcd_analysis(
      fam_periodic({{BigInt(4), big({0, 2})}, {BigInt(4), big({0, 3})}}), 8);
  CHECK(mixed.verdict == Verdict::holds);
  CHECK(mixed.unit_gcd_prefix == std::vector<long>{1, 2});
  CHECK_FALSE(mixed.gcd_value.has_value());

  const auto quick = gcd_analysis(fam_periodic({{BigInt(2), big({0, 1})}}), 8);
  CHECK(quick.unit_gcd_prefix == std::vector<long>{1});

  // global divisor: the whole (periodic) family shares d = 2
  const auto two = gcd_analysis(fam_periodic({{BigInt(4), big({0, 2})}}), 8);
  CHECK(two.verdict == Verdict::holds);
  REQUIRE(two.gcd_value.has_value());
  CHECK(*two.gcd_value == BigInt(2));
  CHECK(two.witness.find("rescale") != std::string::npos);

  // power-digit families have global gcd m
  const auto pw = gcd_analysis(PairFamily::power_digits(BigInt(4), BigInt(2)), 8);
  CHECK(pw.verdict == Verdict::holds);
  CHECK(*pw.gcd_value == BigInt(2));

  // the double-exponential family drops to gcd 1 at level 2
  const auto de = gcd_analysis(tnc(), 8);
  CHECK(de.verdict == Verdict::holds);
  CHECK(de.unit_gcd_prefix == std::vector<long>{1, 2});

  // a custom family that has shown gcd 2 so far proves nothing
  const auto inc = gcd_analysis(
      PairFamily::custom([](long) { return level_stats_from_digits(BigInt(4), big({0, 2})); }),
      6);
  CHECK(inc.verdict == Verdict::inconclusive);
  CHECK(*inc.gcd_value == BigInt(2));
}

TEST_CASE("support radius series", "[criteria]") {
  // quarter system: sum 2/4^k <= 2/3
  const auto q = support_radius_series(fam_periodic({{BigInt(4), big({0, 2})}}),
                                       ExponentSequence::constant_one(), 2);
  CHECK(q.verdict == Verdict::holds);
  CHECK(q.partial_sums == std::vector<Rational>{Rational(1, 2), Rational(5, 8)});

  // double-exponential: terms approach 4; the fifth partial sum passes 15
  const auto de = support_radius_series(tnc(), ExponentSequence::constant_one(), 5);
  CHECK(de.verdict == Verdict::fails);
  REQUIRE(de.depth == 5);
  CHECK(de.partial_sums[0] == Rational(15, 4));
  CHECK(de.partial_sums[4] > Rational(15));
  CHECK(de.partial_sums[4] < Rational(20));

  CHECK(support_radius_series(PairFamily::power_digits(BigInt(3), BigInt(2)),
                              ExponentSequence::constant_one(), 6)
            .verdict == Verdict::holds);
  CHECK(support_radius_series(PairFamily::power_digits(BigInt(2), BigInt(3)),
                              ExponentSequence::constant_one(), 6)
            .verdict == Verdict::fails);
}

TEST_CASE("all conditions returns the full battery", "[criteria]") {
  const auto reps = all_conditions(tnc(), ExponentSequence::constant_one(), 5);
  REQUIRE(reps.size() == 6);
  CHECK(reps[0].condition == "existence-series");
  CHECK(reps[1].condition == "restricted-bound-count-sum");
  CHECK(reps[2].condition == "growth-sup");
  CHECK(reps[3].condition == "uniform-bound");
  CHECK(reps[4].condition == "gcd-analysis");
  CHECK(reps[5].condition == "support-radius-series");
  CHECK(to_string(reps[3].verdict) == "fails");
  CHECK(to_string(reps[2].verdict) == "holds");
}
