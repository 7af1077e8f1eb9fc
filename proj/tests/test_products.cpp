#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "digiprod/identities.hpp"
#include "digiprod/products.hpp"

using namespace digiprod;

namespace {

ProductSpec woods_robbins() { return {Base{2}, {make_factor(1)}, thue_morse_sequence()}; }

// Term-by-term oracle: prod over each factor of ((Bn+k)/(Bn+k+1))^{c u(n)}, as logs
// of the ratio taken directly rather than through log1p.
cplx brute_log(const ProductSpec& spec, std::uint64_t N) {
  cplx s = 0.0;
  const double B = spec.base.value();
  for (const auto& f : spec.factors)
    for (std::uint64_t n = f.start; n < N; ++n) {
      const double x = B * static_cast<double>(n) + f.residue;
      s += f.multiplier * eval(spec.seq, n) * std::log(x / (x + 1.0));
    }
  return s;
}

}  // namespace

TEST(LogTerm, Examples) {
  EXPECT_DOUBLE_EQ(log_term(Base{2}, 1, 0), -0.6931471805599453);
  EXPECT_DOUBLE_EQ(log_term(Base{3}, 0, 1), std::log(0.75));
  EXPECT_THROW(log_term(Base{3}, 0, 0), domain_error);
  for (std::uint32_t B = 2; B <= 9; ++B)
    for (std::uint32_t k = 0; k < B; ++k)
      for (std::uint64_t n = 1; n < 2000; n += 7) {
        const double t = log_term(Base{B}, k, n);
        ASSERT_LT(t, 0.0);
        ASSERT_LT(-t, 1.0 / (B * static_cast<double>(n) + k));
      }
}

TEST(Validate, RejectsMalformedSpecs) {
  const auto tm = thue_morse_sequence();
  EXPECT_THROW(validate(ProductSpec{Base{2}, {}, tm}), validation_error);
  EXPECT_THROW(validate(ProductSpec{Base{3}, {make_factor(1)}, tm}), validation_error);
  EXPECT_THROW(validate(ProductSpec{Base{2}, {make_factor(2)}, tm}), validation_error);
  EXPECT_THROW(validate(ProductSpec{Base{2}, {make_factor(1), make_factor(1)}, tm}), validation_error);
  EXPECT_THROW(validate(ProductSpec{Base{2}, {Factor{0, 1.0, 0}}, tm}), domain_error);
  EXPECT_EQ(make_factor(0).start, 1u);
  EXPECT_EQ(make_factor(3).start, 0u);
}

TEST(EvalNaive, TwoTermsByHand) {
  // Woods-Robbins with N = 2: eps(0) log(1/2) + eps(1) log(3/4).
  const auto r = eval_naive(woods_robbins(), 2);
  EXPECT_NEAR(r.log_value.real(), std::log(0.5) - std::log(0.75), 1e-15);
  EXPECT_EQ(r.log_value.imag(), 0.0);
  EXPECT_EQ(r.method, Method::naive);
}

TEST(EvalNaive, EmptySumAtStart) {
  const ProductSpec spec{Base{3}, {make_factor(0)}, digit_stat_power(Base{3}, -1.0, DigitSum{})};
  EXPECT_EQ(eval_naive(spec, 1).log_value, cplx(0.0));
  EXPECT_EQ(eval_naive(spec, 1).value, cplx(1.0));
}

TEST(EvalNaive, MatchesBruteSum) {
  for (const auto& claim : catalog())
    for (const auto& part : claim.parts) {
      const auto r = eval_naive(part.spec, 5000, {1});
      EXPECT_LE(std::abs(r.log_value - brute_log(part.spec, 5000)), 1e-11) << claim.name;
      EXPECT_LE(std::abs(r.value - std::exp(r.log_value)), 0.0);
    }
}

TEST(EvalNaive, WoodsRobbinsMillion) {
  const auto r = eval_naive(woods_robbins(), 1'000'000);
  EXPECT_LE(std::abs(r.value - std::numbers::sqrt2 / 2.0), 5e-6);
}

TEST(EvalNaive, MonotoneWhenExponentIsOne) {
  const Base b{3};
  const ProductSpec spec{b, {make_factor(2)}, strongly_multiplicative(b, {1.0, 1.0})};
  double last = 0.0;
  for (std::uint64_t N = 1; N < 3000; N += 37) {
    const double v = eval_naive(spec, N).log_value.real();
    ASSERT_LE(v, last);
    last = v;
  }
}

TEST(EvalAbel, WoodsRobbinsTenMillion) {
  const auto r = eval_abel(woods_robbins(), 10'000'000, true);
  EXPECT_LE(std::abs(r.value - std::numbers::sqrt2 / 2.0), 1e-6);
  EXPECT_EQ(r.method, Method::abel_extrapolated);
  EXPECT_EQ(r.terms % 4, 0u);
}

TEST(EvalAbel, HalfPowerDigitSum) {
  const Base b2{2};
  const ProductSpec spec{b2, {make_factor(1)}, digit_stat_power(b2, 0.5, DigitSum{})};
  const auto r = eval_abel(spec, 10'000'000, true);
  EXPECT_LE(std::abs(r.value - 0.25) / 0.25, 5e-4);
}

TEST(EvalAbel, PlainAbelEqualsNaiveOnSameTerms) {
  // Summation by parts is an exact rewrite: with the same truncation it
  // reproduces the direct partial sum.
  for (const auto& claim : catalog()) {
    const auto& spec = claim.parts.front().spec;
    const auto abel = eval_abel(spec, 20000, false, {1});
    const auto naive = eval_naive(spec, abel.terms, {1});
    EXPECT_LE(std::abs(abel.log_value - naive.log_value), 1e-11) << claim.name;
  }
}

TEST(EvalAbel, RoundsTruncationToSquareOfBase) {
  EXPECT_EQ(abel_truncation(Base{3}, 10), 18u);
  EXPECT_EQ(abel_truncation(Base{3}, 9), 9u);
  EXPECT_EQ(abel_truncation(Base{10}, 1), 100u);
}

TEST(EvalAbel, DivergentDigitLengthRejected) {
  for (std::uint32_t B : {2u, 3u, 5u}) {
    std::vector<std::uint32_t> all(B);
    std::iota(all.begin(), all.end(), 0u);
    const ProductSpec spec{Base{B}, {make_factor(1)}, digit_stat_power(Base{B}, -1.0, make_count_set(all))};
    EXPECT_THROW(eval_abel(spec, 1000, true), convergence_hypothesis_violated);
    EXPECT_THROW(eval_naive(spec, 1000), convergence_hypothesis_violated);
    const ProductSpec len{Base{B}, {make_factor(1)}, digit_stat_power(Base{B}, -1.0, Length{})};
    EXPECT_THROW(eval_abel(len, 1000, true), convergence_hypothesis_violated);
  }
}

TEST(EvalAbel, ProfileMismatch) {
  const auto p = hb_profile(digit_stat_power(Base{3}, -1.0, DigitSum{}), 1000);
  EXPECT_THROW(eval_abel(woods_robbins(), p, 1000, true), profile_mismatch);
}

TEST(EvalAbel, ThueMorseIncrementsShrinkLikeOneOverN) {
  const auto spec = woods_robbins();
  double prev = 0.0;
  for (std::uint64_t N = 1 << 12; N <= (1 << 20); N <<= 2) {
    const double d = std::abs(eval_abel(spec, N, false).log_value - eval_abel(spec, 2 * N, false).log_value);
    EXPECT_LE(d * static_cast<double>(N), 2.0) << N;
    if (prev > 0.0) {
      EXPECT_LT(d, prev);
    }
    prev = d;
  }
}

TEST(EvalAbel, AgreesWithNaiveWithinErrorEstimates) {
  for (const auto& claim : catalog())
    for (const auto& part : claim.parts) {
      const auto a = eval_abel(part.spec, 100'000, true);
      const auto n = eval_naive(part.spec, 100'000);
      EXPECT_LE(std::abs(a.log_value - n.log_value), a.err_est + n.err_est) << claim.name;
    }
}

TEST(EvalAbel, ErrorEstimateIsConservativeOnCatalog) {
  for (const auto& claim : catalog()) {
    const auto r = verify(claim, 1'000'000);
    EXPECT_LE(r.log_err, 3.0 * r.err_est) << claim.name;
  }
}

TEST(EvalAbel, ThreadCountDoesNotChangeBits) {
  const auto spec = find_claim("digit_set_sin_b4_J13_q3")->parts.front().spec;
  const auto one = eval_abel(spec, 3'000'000, true, {1});
  for (unsigned t : {2u, 5u, 8u}) {
    const auto r = eval_abel(spec, 3'000'000, true, {t});
    EXPECT_EQ(r.log_value, one.log_value) << t;
    EXPECT_EQ(r.err_est, one.err_est) << t;
  }
  const auto naive1 = eval_naive(spec, 3'000'000, {1});
  EXPECT_EQ(eval_naive(spec, 3'000'000, {6}).log_value, naive1.log_value);
}

TEST(Telescope, HandExamples) {
  const Base b2{2};
  EXPECT_NEAR(log_term(b2, 0, 3) + log_term(b2, 1, 3), std::log(0.75), 1e-15);
  double s = 0.0;
  for (std::uint32_t k = 1; k < 5; ++k) s += log_term(Base{5}, k, 0);
  EXPECT_NEAR(s, -std::log(5.0), 1e-15);
}

TEST(Telescope, RandomSequencesUpToBaseTen) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> r01(0.0, 1.0);
  for (std::uint32_t B = 2; B <= 10; ++B) {
    const cplx w = std::polar(r01(rng), 6.283185307179586 * r01(rng));
    const auto r = telescope_check(digit_stat_power(Base{B}, w, DigitSum{}), 10'000);
    EXPECT_TRUE(r.pass) << B << " " << r.max_term_deviation << " " << r.weighted_deviation;
  }
  EXPECT_THROW(telescope_check(thue_morse_sequence(), 0), domain_error);
}

TEST(SplitResidue, Examples) {
  const auto tm = thue_morse_sequence();
  EXPECT_TRUE(split_residue_check(tm, hb_profile(tm, 1024), 512).pass);
  EXPECT_TRUE(split_residue_check(tm, hb_profile(tm, 1024), 1).pass);
  const auto s3 = digit_stat_power(Base{3}, -1.0, DigitSum{});
  const auto r = split_residue_check(s3, hb_profile(s3, 729), 729);
  EXPECT_TRUE(r.pass) << r.split_deviation << " " << r.substitution_deviation;
  EXPECT_THROW(split_residue_check(s3, hb_profile(tm, 1024), 10), profile_mismatch);
}

TEST(SplitResidue, DetectsWrongProfile) {
  const auto s3 = digit_stat_power(Base{3}, -1.0, DigitSum{});
  auto p = hb_profile(s3, 729);
  p.v[1] = 0.5;
  const auto r = split_residue_check(s3, p, 200);
  EXPECT_FALSE(r.pass);
  EXPECT_LE(r.split_deviation, structural_tolerance);
}
