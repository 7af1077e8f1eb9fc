#pragma once

// Summatory functions F(N) = sum_{0 <= n < N} u(n).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "digiprod/errors.hpp"
#include "digiprod/sequences.hpp"
#include "digiprod/summation.hpp"

namespace digiprod {

struct SummatoryPoint {
  std::uint64_t N = 0;
  cplx F{};
};

/// Direct summation.
inline cplx f_brute(const ExponentSeq& seq, std::uint64_t N) {
  const SequenceEvaluator u(seq);
  CompensatedComplexSum sum;
  for (std::uint64_t n = 0; n < N; ++n) sum.add(u(n));
  return sum.value();
}

/// All prefix sums F(0..N), for oracle use in tests and small tables.
inline std::vector<cplx> f_prefix(const ExponentSeq& seq, std::uint64_t N) {
  const SequenceEvaluator u(seq);
  std::vector<cplx> F(N + 1);
  CompensatedComplexSum sum;
  for (std::uint64_t n = 0; n < N; ++n) {
    sum.add(u(n));
    F[n + 1] = sum.value();
  }
  return F;
}

namespace detail {

struct FastSummatory {
  const HBProfile& profile;
  const SequenceEvaluator& u;
  std::vector<cplx> small;  // F(0..B)
  cplx u0;
  cplx offset;  // F(B) - u(0) G(B)

  cplx operator()(std::uint64_t N) const {
    const std::uint64_t B = profile.base.value();
    if (N <= B) return small[N];
    const std::uint64_t M = N / B;
    const std::uint64_t b = N % B;
    const cplx uM = u(M);
    if (std::abs(u(N) - uM * profile.v[b]) > structural_tolerance)
      throw profile_mismatch("profile relation fails at n=" + std::to_string(M) +
                             ", k=" + std::to_string(b));
    return offset + (*this)(M) * profile.G_B() + uM * profile.G[b];
  }
};

}  // namespace detail

/// F(N) by peeling base-B digits:
///   F(BM + b) = F(B) + (F(M) - u(0)) G(B) + u(M) G(b),   M >= 1.
/// Each level spot-checks the profile relation at (M, b).
inline cplx f_fast(const HBProfile& profile, const ExponentSeq& seq, std::uint64_t N) {
  if (base_of(seq) != profile.base) throw profile_mismatch("profile base differs from sequence base");
  const std::uint64_t B = profile.base.value();
  const SequenceEvaluator u(seq);

  detail::FastSummatory fast{profile, u, std::vector<cplx>(B + 1), u(0), {}};
  CompensatedComplexSum sum;
  for (std::uint64_t n = 0; n < B; ++n) {
    sum.add(u(n));
    fast.small[n + 1] = sum.value();
  }
  fast.offset = fast.small[B] - fast.u0 * profile.G_B();
  return fast(N);
}

struct SummatoryRow {
  std::uint64_t N = 0;
  cplx F{};
  double ratio = 0.0;  ///< |F(N)| / N^alpha
};

inline std::vector<SummatoryRow> summatory_table(const HBProfile& profile, const ExponentSeq& seq,
                                                 const std::vector<std::uint64_t>& checkpoints) {
  std::vector<SummatoryRow> rows;
  rows.reserve(checkpoints.size());
  for (auto N : checkpoints) {
    const cplx F = f_fast(profile, seq, N);
    const double scale = N == 0 ? 1.0 : std::pow(static_cast<double>(N), profile.alpha);
    rows.push_back({N, F, std::abs(F) / scale});
  }
  return rows;
}

/// Geometric checkpoints B, B^2, ... up to limit, with limit itself last.
inline std::vector<std::uint64_t> geometric_checkpoints(Base base, std::uint64_t limit) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t N = base.value(); N <= limit; N *= base.value()) {
    out.push_back(N);
    if (N > limit / base.value()) break;
  }
  if (out.empty() || out.back() != limit) out.push_back(limit);
  return out;
}

struct GrowthReport {
  double C_est = 0.0;               ///< max |F(N)|/N^alpha past the first quartile
  std::optional<double> C_log;      ///< max |F(N)|/log N there, when |G(B)| <= 1
  double alpha = 0.5;
  bool pass = false;
  std::vector<SummatoryRow> rows;
};

/// Allowed drift of the |F(N)|/N^alpha envelope between the early and the
/// late checkpoints before growth is declared unbounded.
inline constexpr double growth_envelope_slack = 1.05;

/// Empirical check of |F(N)| < C N^alpha. Checkpoints below the first
/// quartile are ignored; the bound passes when the envelope over the second
/// half does not exceed the envelope over the second quartile (up to slack).
inline GrowthReport growth_check(const HBProfile& profile, const ExponentSeq& seq,
                                 const std::vector<std::uint64_t>& checkpoints) {
  if (checkpoints.empty()) throw domain_error("growth_check needs checkpoints");
  if (!std::is_sorted(checkpoints.begin(), checkpoints.end()))
    throw domain_error("growth_check checkpoints must be increasing");

  GrowthReport report;
  report.alpha = profile.alpha;
  report.rows = summatory_table(profile, seq, checkpoints);

  const std::size_t count = report.rows.size();
  const std::size_t q1 = count / 4;
  const std::size_t half = std::max(q1 + 1, count / 2);

  double early = 0.0;
  double late = 0.0;
  for (std::size_t i = q1; i < count; ++i) {
    const double r = report.rows[i].ratio;
    report.C_est = std::max(report.C_est, r);
    double& envelope = i < half ? early : late;
    envelope = std::max(envelope, r);
  }
  report.pass = half >= count || late <= growth_envelope_slack * early + 1e-12;

  if (std::abs(profile.G_B()) <= 1.0) {
    double c = 0.0;
    for (std::size_t i = q1; i < count; ++i)
      if (report.rows[i].N > 1)
        c = std::max(c, std::abs(report.rows[i].F) / std::log(static_cast<double>(report.rows[i].N)));
    report.C_log = c;
  }
  return report;
}

}  // namespace digiprod
