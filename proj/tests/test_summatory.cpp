#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "digiprod/summatory.hpp"

using namespace digiprod;

namespace {

// Plain running sum of eval(); the oracle for every F(N) below.
cplx brute(const ExponentSeq& seq, std::uint64_t N) {
  cplx s = 0.0;
  for (std::uint64_t n = 0; n < N; ++n) s += eval(seq, n);
  return s;
}

ExponentSeq random_hb_sequence(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> r01(0.0, 1.0);
  auto disk = [&] { return std::polar(r01(rng), 2.0 * std::numbers::pi * r01(rng)); };
  const std::uint32_t B = 2 + rng() % 7;
  const Base base{B};
  switch (rng() % 5) {
    case 0: {
      std::vector<cplx> d(B - 1);
      for (auto& x : d) x = disk();
      return strongly_multiplicative(base, d);
    }
    case 1: return digit_stat_power(base, disk(), DigitSum{});
    case 2: return digit_stat_power(base, disk(), CountDigit{static_cast<std::uint32_t>(rng() % B)});
    case 3: {
      std::vector<std::uint32_t> J;
      for (std::uint32_t j = 0; j < B; ++j)
        if (rng() % 2) J.push_back(j);
      if (J.empty() || J.size() == B) J = {0};
      return digit_stat_power(base, disk(), make_count_set(J));
    }
    default: {
      // omega^n with B = 1 mod q.
      const std::uint32_t q = B - 1 >= 2 ? B - 1 : 2;
      return periodic_power(Base{q + 1}, q, 1 + static_cast<std::uint32_t>(rng() % (q - 1 == 0 ? 1 : q - 1)));
    }
  }
}

}  // namespace

TEST(FBrute, SpecExamples) {
  EXPECT_EQ(f_brute(thue_morse_sequence(), 3), cplx(-1.0));
  EXPECT_EQ(f_brute(thue_morse_sequence(), 0), cplx(0.0));
  EXPECT_EQ(f_brute(periodic_power(Base{5}, 4, 1), 4), cplx(0.0));
}

TEST(FPrefix, DifferencesAreTerms) {
  const auto seq = digit_stat_power(Base{3}, cplx(0.2, 0.7), DigitSum{});
  const auto F = f_prefix(seq, 500);
  EXPECT_EQ(F[0], cplx(0.0));
  for (std::uint64_t n = 0; n < 500; ++n) EXPECT_NEAR(std::abs(F[n + 1] - F[n] - eval(seq, n)), 0.0, 1e-12);
}

TEST(FFast, MatchesBruteOnThueMorseUpTo2To20) {
  const auto tm = thue_morse_sequence();
  const auto profile = hb_profile(tm, 4096);
  const std::uint64_t N = std::uint64_t{1} << 20;
  EXPECT_EQ(f_fast(profile, tm, N), f_brute(tm, N));
  std::mt19937_64 rng(4);
  for (int i = 0; i < 200; ++i) {
    const std::uint64_t M = rng() % N;
    EXPECT_LE(std::abs(f_fast(profile, tm, M) - brute(tm, M)), 1e-9) << M;
  }
}

TEST(FFast, BaseCaseAndHalfPowerSum) {
  const auto seq = digit_stat_power(Base{2}, 0.5, DigitSum{});
  const auto profile = hb_profile(seq, 1 << 12);
  EXPECT_EQ(f_fast(profile, seq, 0), cplx(0.0));
  EXPECT_EQ(f_fast(profile, seq, 1), cplx(1.0));
  EXPECT_LE(std::abs(f_fast(profile, seq, 1'000'000) - f_brute(seq, 1'000'000)), 1e-9);
}

TEST(FFast, RandomFamilyMatchesBrute) {
  std::mt19937_64 rng(2718);
  int used = 0;
  while (used < 30) {
    const auto seq = random_hb_sequence(rng);
    const std::uint32_t B = base_of(seq).value();
    HBProfile profile = [&] {
      try {
        return hb_profile(seq, std::max<std::uint64_t>(B * B, 2000));
      } catch (const convergence_hypothesis_violated&) {
        return HBProfile{Base{2}, {}, 0, {}, 0.0};
      }
    }();
    if (profile.v.empty()) continue;
    ++used;
    const auto F = f_prefix(seq, 20000);
    for (std::uint64_t N = 0; N <= 20000; N += 1 + rng() % 97)
      ASSERT_LE(std::abs(f_fast(profile, seq, N) - F[N]), 1e-9) << "N=" << N;
  }
}

TEST(FFast, DecompositionIdentity) {
  const auto seq = digit_stat_power(Base{4}, cplx(-0.3, 0.8), CountDigit{0});
  const auto p = hb_profile(seq, 4096);
  const auto F = f_prefix(seq, 4 * 2000 + 4);
  const cplx u0 = eval(seq, 0);
  for (std::uint64_t M = 1; M < 2000; ++M)
    for (std::uint64_t b = 0; b < 4; ++b) {
      const cplx rhs = F[4] + (F[M] - u0) * p.G_B() + eval(seq, M) * p.G[b];
      ASSERT_LE(std::abs(F[4 * M + b] - rhs), 1e-12);
    }
}

TEST(FFast, ProfileMismatchIsDetected) {
  const auto tm = thue_morse_sequence();
  const auto p = hb_profile(tm, 1024);
  const auto other = digit_stat_power(Base{2}, 0.5, DigitSum{});
  EXPECT_THROW(f_fast(p, other, 1000), profile_mismatch);
  EXPECT_THROW(f_fast(p, periodic_power(Base{3}, 2, 1), 1000), profile_mismatch);
}

TEST(Growth, ThueMorseIsBounded) {
  const auto tm = thue_morse_sequence();
  const auto p = hb_profile(tm, 4096);
  std::vector<std::uint64_t> cps;
  for (int e = 10; e <= 24; ++e) {
    cps.push_back((std::uint64_t{1} << e) - 1);
    cps.push_back(std::uint64_t{1} << e);
    cps.push_back((std::uint64_t{1} << e) + 1);
  }
  std::sort(cps.begin(), cps.end());
  const auto g = growth_check(p, tm, cps);
  EXPECT_TRUE(g.pass);
  for (const auto& row : g.rows) EXPECT_LE(std::abs(row.F), 1.0);
  ASSERT_TRUE(g.C_log);
}

TEST(Growth, AlphaOfHalfPowerSum) {
  const auto seq = digit_stat_power(Base{2}, 0.5, DigitSum{});
  const auto p = hb_profile(seq, 4096);
  const auto g = growth_check(p, seq, geometric_checkpoints(Base{2}, std::uint64_t{1} << 24));
  EXPECT_NEAR(g.alpha, std::log(1.5) / std::log(2.0), 1e-15);
  EXPECT_TRUE(g.pass);
  EXPECT_FALSE(g.C_log);  // |G(2)| = 3/2 > 1
}

TEST(Growth, UnboundedRatioFails) {
  // u = (1/2)^{N_1}: G(2) = 3/2 gives alpha ~ 0.585, yet F(2^k) = (3/2)^k
  // exactly; forcing alpha = 1/2 makes |F|/N^alpha grow without bound.
  const auto seq = digit_stat_power(Base{2}, 0.5, CountDigit{1});
  auto p = hb_profile(seq, 4096);
  p.alpha = 0.5;
  const auto g = growth_check(p, seq, geometric_checkpoints(Base{2}, std::uint64_t{1} << 30));
  EXPECT_FALSE(g.pass);
}

TEST(Growth, Preconditions) {
  const auto tm = thue_morse_sequence();
  const auto p = hb_profile(tm, 1024);
  EXPECT_THROW(growth_check(p, tm, {}), domain_error);
  EXPECT_THROW(growth_check(p, tm, {10, 5}), domain_error);
}

TEST(Checkpoints, Geometric) {
  EXPECT_EQ(geometric_checkpoints(Base{3}, 100), (std::vector<std::uint64_t>{3, 9, 27, 81, 100}));
  EXPECT_EQ(geometric_checkpoints(Base{2}, 16), (std::vector<std::uint64_t>{2, 4, 8, 16}));
}
