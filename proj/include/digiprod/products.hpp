#pragma once

// Numerical evaluation of
//
//   prod_k prod_{n >= start_k} ((Bn+k)/(Bn+k+1))^{c_k u(n)}
//
// through its logarithm sum_k c_k sum_n u(n) log((Bn+k)/(Bn+k+1)). All logs
// are real logs of positive rationals; complex exponents only multiply them,
// so no branch of the complex logarithm is ever chosen.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "digiprod/errors.hpp"
#include "digiprod/sequences.hpp"
#include "digiprod/summation.hpp"

namespace digiprod {

/// One residue class k with multiplier c_k, starting at n = start.
struct Factor {
  std::uint32_t residue = 0;
  cplx multiplier{1.0, 0.0};
  std::uint64_t start = 0;
  friend bool operator==(const Factor&, const Factor&) = default;
};

/// Residue factor with the default start (1 for k = 0, else 0).
inline Factor make_factor(std::uint32_t residue, cplx multiplier = {1.0, 0.0}) {
  return Factor{residue, multiplier, residue == 0 ? 1u : 0u};
}

struct ProductSpec {
  Base base;
  std::vector<Factor> factors;
  ExponentSeq seq;
  friend bool operator==(const ProductSpec&, const ProductSpec&) = default;
};

enum class Method { naive, abel, abel_extrapolated };

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::naive: return "naive";
    case Method::abel: return "abel";
    default: return "abel+extrapolation";
  }
}

struct EvalResult {
  cplx log_value{};
  cplx value{};
  double err_est = 0.0;  ///< heuristic estimate of |log_value - true log|
  std::uint64_t terms = 0;
  Method method = Method::naive;
};

struct EvalOptions {
  unsigned threads = 0;  ///< 0: hardware concurrency
};

/// log((Bn+k)/(Bn+k+1)) = -log1p(1/(Bn+k)).
inline double log_term(Base base, std::uint32_t k, std::uint64_t n) {
  const double x = static_cast<double>(base.value()) * static_cast<double>(n) + k;
  if (x < 1.0) throw domain_error("log_term needs Bn+k >= 1");
  return -std::log1p(1.0 / x);
}

/// Structural checks shared by every evaluation path.
///
/// Rejects with convergence_hypothesis_violated the digit-length exponent
/// (a digit-count power over every digit with |w| >= 1), whose products may
/// diverge.
inline void validate(const ProductSpec& spec) {
  if (spec.factors.empty()) throw validation_error("product needs at least one factor");
  if (base_of(spec.seq) != spec.base) throw validation_error("sequence base differs from product base");
  std::vector<bool> seen(spec.base.value(), false);
  for (const auto& f : spec.factors) {
    if (f.residue >= spec.base.value())
      throw validation_error("residue " + std::to_string(f.residue) + " out of range");
    if (seen[f.residue]) throw validation_error("residue " + std::to_string(f.residue) + " repeated");
    seen[f.residue] = true;
    if (f.residue == 0 && f.start == 0) throw domain_error("residue 0 must start at n >= 1");
  }
  if (const auto* p = std::get_if<DigitStatPower>(&spec.seq)) {
    const auto* set = std::get_if<CountSet>(&p->stat);
    const bool all_digits = std::holds_alternative<Length>(p->stat) ||
                            (set && set->digits.size() == spec.base.value());
    if (all_digits && std::abs(p->w) >= 1.0)
      throw convergence_hypothesis_violated(
          "digit set covers every digit with |w| >= 1; the product may diverge");
  }
}

namespace detail {

inline std::uint64_t min_start(const ProductSpec& spec) {
  std::uint64_t s = spec.factors.front().start;
  for (const auto& f : spec.factors) s = std::min(s, f.start);
  return s;
}

/// Per-factor partial sums sum_{start <= n < cut} u(n) a_k(n) at each cut.
struct PartialSums {
  std::vector<std::uint64_t> cuts;
  std::vector<std::vector<cplx>> per_factor;  // [factor][cut]
  std::vector<std::vector<cplx>> boundary;    // [factor][cut]: F(cut) a_k(cut)

  cplx combined(const ProductSpec& spec, std::size_t cut) const {
    CompensatedComplexSum s;
    for (std::size_t f = 0; f < spec.factors.size(); ++f) s.add(spec.factors[f].multiplier * per_factor[f][cut]);
    return s.value();
  }
};

struct BlockAccum {
  CompensatedComplexSum direct;  // sum u(n) a(n)
  CompensatedComplexSum usum;    // sum u(n)
  CompensatedComplexSum abel;    // sum Floc(n+1) (a(n) - a(n+1))
};

struct Segment {
  CompensatedComplexSum value;
  Segment combine(const Segment& other) const {
    Segment out = *this;
    out.value.add(other.value);
    return out;
  }
};

/// One pass over [min start, max cut) with block boundaries at every cut.
/// use_abel selects summation by parts; otherwise terms are added directly.
inline PartialSums partial_sums(const ProductSpec& spec, std::vector<std::uint64_t> cuts, bool use_abel,
                                const EvalOptions& opts) {
  std::sort(cuts.begin(), cuts.end());
  const std::uint64_t lo = min_start(spec);
  const std::uint64_t hi = std::max(lo, cuts.back());
  const auto blocks = plan_blocks(lo, hi, cuts);
  const std::size_t nf = spec.factors.size();
  const double B = spec.base.value();
  const SequenceEvaluator u(spec.seq);

  auto kernel = [&](const IndexRange& r) {
    std::vector<cplx> values(r.hi - r.lo);
    u.fill(r.lo, values);
    std::vector<BlockAccum> acc(nf);
    for (std::size_t f = 0; f < nf; ++f) {
      const Factor& fac = spec.factors[f];
      const std::uint64_t first = std::max(r.lo, fac.start);
      cplx local{};
      CompensatedComplexSum local_sum;
      for (std::uint64_t n = first; n < r.hi; ++n) {
        const cplx un = values[n - r.lo];
        const double x = B * static_cast<double>(n) + fac.residue;
        local_sum.add(un);
        if (use_abel) {
          local = local_sum.value();
          acc[f].abel.add(local * -std::log1p(B / (x * (x + B + 1.0))));
        } else {
          acc[f].direct.add(un * -std::log1p(1.0 / x));
        }
      }
      acc[f].usum = local_sum;
    }
    return acc;
  };
  const auto block_results = map_blocks(blocks, opts.threads, kernel);

  PartialSums out;
  out.cuts = cuts;
  out.per_factor.assign(nf, std::vector<cplx>(cuts.size()));
  out.boundary.assign(nf, std::vector<cplx>(cuts.size()));

  for (std::size_t f = 0; f < nf; ++f) {
    const Factor& fac = spec.factors[f];
    auto a = [&](std::uint64_t n) { return log_term(spec.base, fac.residue, n); };

    // Contribution of each block to the factor's sum; F(lo) is the running
    // prefix of the block sums of u, accumulated in block order.
    std::vector<Segment> contrib(blocks.size());
    CompensatedComplexSum prefix;
    std::vector<cplx> F_at_hi(blocks.size());
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const auto& r = blocks[b];
      if (use_abel) {
        const cplx F_lo = prefix.value();
        if (r.lo >= fac.start && F_lo != cplx{}) contrib[b].value.add(F_lo * (a(r.lo) - a(r.hi)));
        contrib[b].value.add(block_results[b][f].abel);
      } else {
        contrib[b].value.add(block_results[b][f].direct);
      }
      prefix.add(block_results[b][f].usum);
      F_at_hi[b] = prefix.value();
    }

    // Sum blocks below each cut: a fixed tree per segment between cuts,
    // segments chained in order.
    CompensatedComplexSum running;
    std::size_t b = 0;
    for (std::size_t c = 0; c < cuts.size(); ++c) {
      std::vector<Segment> seg;
      cplx F_cut{};
      for (; b < blocks.size() && blocks[b].hi <= cuts[c]; ++b) seg.push_back(contrib[b]);
      if (b > 0) F_cut = F_at_hi[b - 1];
      running.add(tree_reduce(std::move(seg), [](const Segment& x, const Segment& y) { return x.combine(y); })
                      .value);
      cplx total = running.value();
      const cplx boundary = cuts[c] > fac.start && cuts[c] >= 1 ? F_cut * a(cuts[c]) : cplx{};
      if (use_abel) total += boundary;
      out.per_factor[f][c] = total;
      out.boundary[f][c] = boundary;
    }
  }
  return out;
}

/// Absolute floor added to every error estimate to cover rounding.
inline constexpr double rounding_floor = 1e-14;

inline EvalResult finish(cplx log_value, double err_est, std::uint64_t terms, Method method) {
  return EvalResult{log_value, std::exp(log_value), err_est, terms, method};
}

}  // namespace detail

/// Direct partial log-sum over start_k <= n < N.
///
/// The error estimate comes from the last two geometric blocks
/// [N/B^2, N/B) and [N/B, N): with d1, d2 their contributions and
/// rho = |d1|/|d2| (capped at 0.99), err = |d1| rho/(1 - rho) + |d1|/B,
/// plus the boundary term sum_k |c_k F(N) a_k(N)| that summation by parts
/// would remove.
inline EvalResult eval_naive(const ProductSpec& spec, std::uint64_t N, const EvalOptions& opts = {}) {
  validate(spec);
  const std::uint64_t B = spec.base.value();
  const auto sums = detail::partial_sums(spec, {N / (B * B), N / B, N}, false, opts);
  const cplx s0 = sums.combined(spec, 0);
  const cplx s1 = sums.combined(spec, 1);
  const cplx s2 = sums.combined(spec, 2);
  const double d1 = std::abs(s2 - s1);
  const double d2 = std::abs(s1 - s0);
  const double rho = d2 > 0.0 ? std::min(0.99, d1 / d2) : 0.0;
  double boundary = 0.0;
  for (std::size_t f = 0; f < spec.factors.size(); ++f)
    boundary += std::abs(spec.factors[f].multiplier * sums.boundary[f][2]);
  const double err = d1 * rho / (1.0 - rho) + d1 / static_cast<double>(B) + boundary + detail::rounding_floor;
  return detail::finish(s2, err, N, Method::naive);
}

/// Truncation actually used by eval_abel: N rounded up to a multiple of B^2.
inline std::uint64_t abel_truncation(Base base, std::uint64_t N) {
  const std::uint64_t B2 = std::uint64_t{base.value()} * base.value();
  return std::max<std::uint64_t>(1, (N + B2 - 1) / B2) * B2;
}

/// Profile verification window used when eval_abel builds its own profile.
inline std::uint64_t profile_window(Base base, std::uint64_t N) {
  const std::uint64_t B2 = std::uint64_t{base.value()} * base.value();
  return std::max(B2, std::min<std::uint64_t>(N, std::uint64_t{1} << 16));
}

/// Summation by parts with partial sums F(n) of u:
///   sum_{n<N} u(n) a_n = sum_{n<N} F(n+1)(a_n - a_{n+1}) + F(N) a_N.
///
/// With extrapolation, the tails T(N) of the log series satisfy
/// T(BN) = (G(B)/B) T(N) up to O(N^{alpha-2}); partial sums at N/B and N
/// then give S = (S_N - r S_{N/B})/(1 - r), r = G(B)/B. Note |r| = B^{alpha-1}
/// when |G(B)| > 1. err_est is the fitted tail plus |S_N - S_{N/B}|/B.
inline EvalResult eval_abel(const ProductSpec& spec, const HBProfile& profile, std::uint64_t N,
                            bool extrapolate, const EvalOptions& opts = {}) {
  validate(spec);
  if (profile.base != spec.base) throw profile_mismatch("profile base differs from product base");
  const std::uint64_t B = spec.base.value();
  const std::uint64_t terms = abel_truncation(spec.base, N);
  const auto sums = detail::partial_sums(spec, {terms / B, terms}, true, opts);
  const cplx s_short = sums.combined(spec, 0);
  const cplx s_long = sums.combined(spec, 1);

  if (!extrapolate) {
    double boundary = 0.0;
    for (std::size_t f = 0; f < spec.factors.size(); ++f)
      boundary += std::abs(spec.factors[f].multiplier * sums.boundary[f][1]);
    return detail::finish(s_long, boundary + detail::rounding_floor, terms, Method::abel);
  }

  const cplx r = profile.tail_ratio();
  const cplx extrapolated = (s_long - r * s_short) / (1.0 - r);
  const double err = std::abs(extrapolated - s_long) + std::abs(s_long - s_short) / static_cast<double>(B) +
                     detail::rounding_floor;
  return detail::finish(extrapolated, err, terms, Method::abel_extrapolated);
}

inline EvalResult eval_abel(const ProductSpec& spec, std::uint64_t N, bool extrapolate,
                            const EvalOptions& opts = {}) {
  validate(spec);
  const HBProfile profile = hb_profile(spec.seq, profile_window(spec.base, N));
  return eval_abel(spec, profile, N, extrapolate, opts);
}

// ---------------------------------------------------------------------------
// Finite identities behind the closed forms

struct TelescopeReport {
  bool pass = false;
  double max_term_deviation = 0.0;  ///< per-n: sum_k a_k(n) vs log(n/(n+1)), and -log B at n = 0
  double weighted_deviation = 0.0;  ///< weighted form with u(n), see telescope_check
};

/// For every 1 <= n < N, sum_{k<B} log((Bn+k)/(Bn+k+1)) = log(n/(n+1)); at
/// n = 0 the k >= 1 terms sum to -log B. Consequently
///   sum_k sum_{delta_k <= n < N} u(n) a_k(n)
///     = -u(0) log B + sum_{1 <= n < N} u(n) log(n/(n+1)).
inline TelescopeReport telescope_check(const ExponentSeq& seq, std::uint64_t N) {
  if (N < 1) throw domain_error("telescope_check needs N >= 1");
  const Base base = base_of(seq);
  const std::uint32_t B = base.value();
  const SequenceEvaluator u(seq);

  TelescopeReport report;
  CompensatedSum at_zero;
  for (std::uint32_t k = 1; k < B; ++k) at_zero.add(log_term(base, k, 0));
  const double log_B = std::log(static_cast<double>(B));
  report.max_term_deviation = std::abs(at_zero.value() + log_B);

  CompensatedComplexSum lhs;
  CompensatedComplexSum rhs;
  const cplx u0 = u(0);
  for (std::uint32_t k = 1; k < B; ++k) lhs.add(u0 * log_term(base, k, 0));
  rhs.add(-u0 * log_B);
  for (std::uint64_t n = 1; n < N; ++n) {
    const cplx un = u(n);
    CompensatedSum block;
    for (std::uint32_t k = 0; k < B; ++k) {
      const double a = log_term(base, k, n);
      block.add(a);
      lhs.add(un * a);
    }
    const double merged = -std::log1p(1.0 / static_cast<double>(n));
    report.max_term_deviation = std::max(report.max_term_deviation, std::abs(block.value() - merged));
    rhs.add(un * merged);
  }
  report.weighted_deviation = std::abs(lhs.value() - rhs.value());
  report.pass = report.max_term_deviation <= structural_tolerance &&
                report.weighted_deviation <= structural_tolerance;
  return report;
}

struct SplitReport {
  bool pass = false;
  double split_deviation = 0.0;         ///< regrouping m = Bn + k
  double substitution_deviation = 0.0;  ///< u(Bn+k) replaced by u(n) v(k) for n >= 1
};

/// Finite form of splitting sum_{1 <= m < BN} u(m) log(m/(m+1)) by m mod B:
///   = sum_k sum_{delta_k <= n < N} u(Bn+k) a_k(n)
///   = sum_{0<k<B} u(k) a_k(0) + sum_k sum_{1 <= n < N} u(n) v(k) a_k(n).
inline SplitReport split_residue_check(const ExponentSeq& seq, const HBProfile& profile, std::uint64_t N) {
  const Base base = base_of(seq);
  if (profile.base != base) throw profile_mismatch("profile base differs from sequence base");
  if (N < 1) throw domain_error("split_residue_check needs N >= 1");
  const std::uint32_t B = base.value();
  const SequenceEvaluator u(seq);

  CompensatedComplexSum merged;
  for (std::uint64_t m = 1; m < std::uint64_t{B} * N; ++m)
    merged.add(u(m) * -std::log1p(1.0 / static_cast<double>(m)));

  CompensatedComplexSum split;
  CompensatedComplexSum substituted;
  for (std::uint32_t k = 0; k < B; ++k) {
    for (std::uint64_t n = k == 0 ? 1 : 0; n < N; ++n) {
      const double a = log_term(base, k, n);
      split.add(u(std::uint64_t{B} * n + k) * a);
      substituted.add((n == 0 ? u(k) : u(n) * profile.v[k]) * a);
    }
  }

  SplitReport report;
  report.split_deviation = std::abs(merged.value() - split.value());
  report.substitution_deviation = std::abs(merged.value() - substituted.value());
  report.pass = report.split_deviation <= structural_tolerance &&
                report.substitution_deviation <= structural_tolerance;
  return report;
}

}  // namespace digiprod
