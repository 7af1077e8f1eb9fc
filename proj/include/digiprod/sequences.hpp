#pragma once

// Exponent sequences u(n): constructors, pointwise evaluation, and checks of
// the two structural axioms the product machinery relies on:
//
//   strongly B-multiplicative:  u(0) = 1,  u(Bn+k) = u(n) u(k)   (n >= 0)
//   digit recursion (H_B):      u(Bn+k) = u(n) v(k)              (n >= 1)
//                               with some u(n0) != 0, n0 >= B.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "digiprod/digits.hpp"
#include "digiprod/errors.hpp"
#include "digiprod/summation.hpp"

namespace digiprod {

/// Absolute tolerance for every structural identity checked on sequences.
inline constexpr double structural_tolerance = 1e-12;

/// u(n) = prod over digits d of n of table[d]; table[0] = 1.
struct StronglyMultiplicative {
  Base base;
  std::vector<cplx> table;
  friend bool operator==(const StronglyMultiplicative&, const StronglyMultiplicative&) = default;
};

/// u(n) = w^{stat(n)}, with 0^0 = 1.
struct DigitStatPower {
  Base base;
  cplx w;
  DigitStat stat;
  friend bool operator==(const DigitStatPower&, const DigitStatPower&) = default;
};

/// u(n) = omega^n, omega = exp(2 pi i p / q).
struct PeriodicPower {
  Base base;
  std::uint32_t q;
  std::uint32_t p;
  friend bool operator==(const PeriodicPower&, const PeriodicPower&) = default;
};

/// u(n) = values[n mod values.size()].
struct SignedResidue {
  Base base;
  std::vector<cplx> values;
  friend bool operator==(const SignedResidue&, const SignedResidue&) = default;
};

using ExponentSeq = std::variant<StronglyMultiplicative, DigitStatPower, PeriodicPower, SignedResidue>;

// ---------------------------------------------------------------------------
// Constructors

/// Takes u(1), ..., u(B-1); u(0) = 1 is supplied.
inline ExponentSeq strongly_multiplicative(Base base, std::vector<cplx> digit_values) {
  if (digit_values.size() != base.value() - 1)
    throw validation_error("strongly multiplicative table needs B-1 = " +
                           std::to_string(base.value() - 1) + " values, got " +
                           std::to_string(digit_values.size()));
  digit_values.insert(digit_values.begin(), cplx{1.0, 0.0});
  return StronglyMultiplicative{base, std::move(digit_values)};
}

inline ExponentSeq digit_stat_power(Base base, cplx w, DigitStat stat) {
  if (auto* s = std::get_if<CountSet>(&stat)) *s = make_count_set(std::move(s->digits));
  validate(stat, base);
  return DigitStatPower{base, w, std::move(stat)};
}

inline ExponentSeq periodic_power(Base base, std::uint32_t q, std::uint32_t p) {
  if (q < 2 || p == 0 || p >= q)
    throw validation_error("periodic power needs q > p > 0, got q=" + std::to_string(q) +
                           ", p=" + std::to_string(p));
  return PeriodicPower{base, q, p};
}

inline ExponentSeq signed_residue(Base base, std::vector<cplx> values) {
  if (values.empty()) throw validation_error("residue table must be nonempty");
  return SignedResidue{base, std::move(values)};
}

/// epsilon(n) = (-1)^{N_{1,2}(n)}.
inline ExponentSeq thue_morse_sequence() {
  return DigitStatPower{Base{2}, cplx{-1.0, 0.0}, CountDigit{1}};
}

inline Base base_of(const ExponentSeq& seq) {
  return std::visit([](const auto& s) { return s.base; }, seq);
}

// ---------------------------------------------------------------------------
// Evaluation

/// w^m by repeated squaring.
inline cplx ipow(cplx w, std::uint64_t m) noexcept {
  cplx result{1.0, 0.0};
  while (m != 0) {
    if (m & 1) result *= w;
    w *= w;
    m >>= 1;
  }
  return result;
}

/// exp(2 pi i m / q), exact at multiples of a quarter turn.
inline cplx unit_root(std::uint64_t m, std::uint64_t q) {
  m %= q;
  if ((4 * m) % q == 0) {
    switch ((4 * m) / q) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(q);
  return {std::cos(angle), std::sin(angle)};
}

inline cplx eval(const ExponentSeq& seq, std::uint64_t n) {
  return std::visit(
      [n](const auto& s) -> cplx {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, StronglyMultiplicative>) {
          cplx u{1.0, 0.0};
          for (std::uint64_t m = n; m != 0; m /= s.base.value()) u *= s.table[m % s.base.value()];
          return u;
        } else if constexpr (std::is_same_v<S, DigitStatPower>) {
          return ipow(s.w, digit_stat(n, s.stat, s.base));
        } else if constexpr (std::is_same_v<S, PeriodicPower>) {
          return unit_root(static_cast<std::uint64_t>(s.p) * (n % s.q), s.q);
        } else {
          return s.values[n % s.values.size()];
        }
      },
      seq);
}

/// Precompiled evaluator for hot loops. operator() agrees bit-for-bit with
/// eval(); fill() may differ by rounding for digit products.
class SequenceEvaluator {
 public:
  explicit SequenceEvaluator(const ExponentSeq& seq) : base_(base_of(seq).value()) {
    std::visit(
        [this](const auto& s) {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, StronglyMultiplicative>) {
            kind_ = kind::digit_product;
            table_ = s.table;
            build_chunk_tables();
          } else if constexpr (std::is_same_v<S, DigitStatPower>) {
            kind_ = kind::stat_power;
            weights_ = digit_weights(s.stat, s.base);
            w_ = s.w;
            const std::uint64_t max_stat = max_stat_value(weights_, s.base);
            if (max_stat <= power_table_limit) {
              table_.resize(max_stat + 1);
              for (std::uint64_t m = 0; m <= max_stat; ++m) table_[m] = ipow(w_, m);
            }
            build_chunk_tables();
          } else if constexpr (std::is_same_v<S, PeriodicPower>) {
            kind_ = kind::cyclic;
            table_.resize(s.q);
            for (std::uint32_t r = 0; r < s.q; ++r)
              table_[r] = unit_root(static_cast<std::uint64_t>(s.p) * r, s.q);
          } else {
            kind_ = kind::cyclic;
            table_ = s.values;
          }
        },
        seq);
  }

  cplx operator()(std::uint64_t n) const noexcept {
    switch (kind_) {
      case kind::digit_product: {
        cplx u{1.0, 0.0};
        for (; n != 0; n /= base_) u *= table_[n % base_];
        return u;
      }
      case kind::stat_power: {
        std::uint64_t m = 0;
        for (; n != 0; n /= base_) m += weights_[n % base_];
        return table_.empty() ? ipow(w_, m) : table_[m];
      }
      default:
        return table_[n % table_.size()];
    }
  }

  /// out[i] = u(lo + i).
  ///
  /// Splits n = P m + j with P = B^t and reuses u(m) for P consecutive
  /// terms: for digit products u(n) = u(m) u(j); for digit statistics
  /// stat(n) = stat(m) + stat of j padded to t digits (m >= 1).
  void fill(std::uint64_t lo, std::span<cplx> out) const noexcept {
    if (out.empty()) return;
    if (kind_ == kind::cyclic) {
      std::size_t r = lo % table_.size();
      for (auto& x : out) {
        x = table_[r];
        if (++r == table_.size()) r = 0;
      }
      return;
    }
    if (chunk_ == 0) {
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = (*this)(lo + i);
      return;
    }

    std::uint64_t m = lo / chunk_;
    std::uint64_t j = lo % chunk_;
    auto head = [&] { return kind_ == kind::digit_product ? (*this)(m) : cplx{}; };
    auto head_stat = [&] {
      std::uint64_t s = 0;
      for (std::uint64_t x = m; x != 0; x /= base_) s += weights_[x % base_];
      return s;
    };
    cplx um = head();
    std::uint64_t sm = kind_ == kind::stat_power ? head_stat() : 0;
    for (auto& x : out) {
      if (kind_ == kind::digit_product)
        x = um * chunk_values_[j];
      else
        x = table_[m == 0 ? chunk_stats_[j] : sm + chunk_padded_stats_[j]];
      if (++j == chunk_) {
        j = 0;
        ++m;
        if (kind_ == kind::digit_product)
          um = head();
        else
          sm = head_stat();
      }
    }
  }

 private:
  static constexpr std::uint64_t power_table_limit = std::uint64_t{1} << 20;
  static constexpr std::uint64_t chunk_limit = 4096;

  void build_chunk_tables() {
    if (kind_ == kind::stat_power && table_.empty()) return;
    std::uint64_t P = base_;
    std::uint64_t digits = 1;
    while (P * base_ <= chunk_limit) {
      P *= base_;
      ++digits;
    }
    if (P > chunk_limit) return;
    chunk_ = P;
    if (kind_ == kind::digit_product) {
      chunk_values_.resize(P);
      for (std::uint64_t j = 0; j < P; ++j) chunk_values_[j] = (*this)(j);
      return;
    }
    chunk_stats_.resize(P);
    chunk_padded_stats_.resize(P);
    for (std::uint64_t j = 0; j < P; ++j) {
      std::uint64_t s = 0;
      std::uint64_t x = j;
      std::uint64_t used = 0;
      for (; x != 0; x /= base_, ++used) s += weights_[x % base_];
      chunk_stats_[j] = s;
      chunk_padded_stats_[j] = s + (digits - used) * weights_[0];
    }
  }

  std::uint64_t chunk_ = 0;
  std::vector<cplx> chunk_values_;
  std::vector<std::uint64_t> chunk_stats_;
  std::vector<std::uint64_t> chunk_padded_stats_;

  enum class kind { digit_product, stat_power, cyclic };
  kind kind_ = kind::cyclic;
  std::uint64_t base_;
  std::vector<cplx> table_;
  std::vector<std::uint32_t> weights_;
  cplx w_{};
};

// ---------------------------------------------------------------------------
// Structural checks

struct StrongMultReport {
  bool pass = true;
  bool u0_is_one = true;
  /// First (n, k) with |u(Bn+k) - u(n) u(k)| > tolerance, in ascending n then k.
  std::optional<std::pair<std::uint64_t, std::uint32_t>> counterexample;
  double max_deviation = 0.0;
  std::uint64_t checked = 0;
};

/// Checks u(0) = 1 and u(Bn+k) = u(n) u(k) for all Bn+k <= limit.
inline StrongMultReport verify_strong_mult(const ExponentSeq& seq, std::uint64_t limit) {
  const std::uint64_t B = base_of(seq).value();
  if (limit < B) throw domain_error("verify_strong_mult needs N >= B");
  const SequenceEvaluator u(seq);

  StrongMultReport report;
  report.u0_is_one = std::abs(u(0) - cplx{1.0, 0.0}) <= structural_tolerance;
  report.pass = report.u0_is_one;

  std::vector<cplx> digit_values(B);
  for (std::uint64_t k = 0; k < B; ++k) digit_values[k] = u(k);

  for (std::uint64_t n = 0; B * n <= limit; ++n) {
    const cplx un = u(n);
    for (std::uint64_t k = 0; k < B && B * n + k <= limit; ++k) {
      const double dev = std::abs(u(B * n + k) - un * digit_values[k]);
      report.max_deviation = std::max(report.max_deviation, dev);
      ++report.checked;
      if (dev > structural_tolerance && !report.counterexample) {
        report.counterexample = {n, static_cast<std::uint32_t>(k)};
        report.pass = false;
      }
    }
  }
  return report;
}

/// Data of the digit recursion u(Bn+k) = u(n) v(k), n >= 1.
struct HBProfile {
  Base base;
  std::vector<cplx> v;   ///< v(0..B-1)
  std::uint64_t n0 = 0;  ///< seed with u(n0) != 0
  std::vector<cplx> G;   ///< G(0..B), G(j) = v(0) + ... + v(j-1)
  double alpha = 0.5;    ///< growth exponent of the summatory function

  cplx G_B() const { return G.back(); }

  /// Asymptotic ratio T(BN)/T(N) of the product log-series tails.
  cplx tail_ratio() const { return G_B() / static_cast<double>(base.value()); }
};

/// Builds and validates the recursion profile of seq on [0, limit].
///
/// The seed is searched in [B, min(limit, 65B)] unless one is given. Beyond
/// the recursion itself, |u(n)| <= 1 on [0, limit] and |v(k)| <= 1 are
/// required (validation_error otherwise) and |G(B)| < B is required
/// (convergence_hypothesis_violated otherwise).
inline HBProfile hb_profile(const ExponentSeq& seq, std::uint64_t limit,
                            std::optional<std::uint64_t> seed = std::nullopt) {
  const Base base = base_of(seq);
  const std::uint64_t B = base.value();
  if (limit < B * B) throw domain_error("hb_profile needs N >= B^2");
  const SequenceEvaluator u(seq);

  std::uint64_t n0 = 0;
  if (seed) {
    if (*seed < B || u(*seed) == cplx{}) throw no_nonzero_seed("given seed is < B or u(seed) = 0");
    n0 = *seed;
  } else {
    const std::uint64_t last = std::min(limit, B + 64 * B);
    for (std::uint64_t n = B; n <= last && n0 == 0; ++n)
      if (u(n) != cplx{}) n0 = n;
    if (n0 == 0)
      throw no_nonzero_seed("u(n) = 0 for all B <= n <= " + std::to_string(last));
  }

  HBProfile profile{base, std::vector<cplx>(B), n0, std::vector<cplx>(B + 1), 0.5};
  const cplx u_seed = u(n0);
  for (std::uint64_t k = 0; k < B; ++k) profile.v[k] = u(B * n0 + k) / u_seed;

  for (std::uint64_t n = 1; n <= limit / B; ++n) {
    const cplx un = u(n);
    for (std::uint64_t k = 0; k < B; ++k)
      if (std::abs(u(B * n + k) - un * profile.v[k]) > structural_tolerance)
        throw hypothesis_failed(n, static_cast<std::uint32_t>(k));
  }

  for (std::uint64_t n = 0; n <= limit; ++n)
    if (std::abs(u(n)) > 1.0 + structural_tolerance)
      throw validation_error("|u(" + std::to_string(n) + ")| > 1");
  for (std::uint64_t k = 0; k < B; ++k)
    if (std::abs(profile.v[k]) > 1.0 + structural_tolerance)
      throw validation_error("|v(" + std::to_string(k) + ")| > 1");

  CompensatedComplexSum running;
  profile.G[0] = 0.0;
  for (std::uint64_t j = 0; j < B; ++j) {
    running.add(profile.v[j]);
    profile.G[j + 1] = running.value();
  }

  const double g = std::abs(profile.G_B());
  if (g >= static_cast<double>(B) - structural_tolerance)
    throw convergence_hypothesis_violated("|G(B)| = " + std::to_string(g) + " >= B = " +
                                          std::to_string(B) + "; the product may diverge");
  profile.alpha = g <= 1.0 ? 0.5 : std::log(g) / std::log(static_cast<double>(B));
  return profile;
}

}  // namespace digiprod
