#pragma once

// Gamma-function side: real log-Gamma, balanced Gamma quotients
//
//   prod_{n>=0} (n+a_1)...(n+a_d) / ((n+b_1)...(n+b_d))
//       = Gamma(b_1)...Gamma(b_d) / (Gamma(a_1)...Gamma(a_d)),   sum a = sum b,
//
// and the odd-base alternating products built from them.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "digiprod/digits.hpp"
#include "digiprod/errors.hpp"
#include "digiprod/summation.hpp"

namespace digiprod {

namespace detail {

inline constexpr double euler_gamma = 0.57721566490153286060651209008240243;
inline constexpr int zeta_terms = 32;

/// zeta(k) - 1 for k = 0..zeta_terms-1 (entries 0 and 1 unused).
inline const std::array<double, zeta_terms>& zeta_minus_one() {
  static const std::array<double, zeta_terms> table = [] {
    std::array<double, zeta_terms> z{};
    constexpr int M = 128;
    for (int k = 2; k < zeta_terms; ++k) {
      CompensatedSum s;
      for (int n = M; n >= 2; --n) s.add(std::pow(static_cast<double>(n), -k));
      // Euler-Maclaurin tail for n > M.
      const double m = M;
      const double kk = k;
      s.add(std::pow(m, 1.0 - kk) / (kk - 1.0));
      s.add(-0.5 * std::pow(m, -kk));
      s.add(kk / 12.0 * std::pow(m, -kk - 1.0));
      s.add(-kk * (kk + 1.0) * (kk + 2.0) / 720.0 * std::pow(m, -kk - 3.0));
      s.add(kk * (kk + 1.0) * (kk + 2.0) * (kk + 3.0) * (kk + 4.0) / 30240.0 * std::pow(m, -kk - 5.0));
      z[k] = s.value();
    }
    return z;
  }();
  return table;
}

/// log Gamma(1 + t) for |t| <= 1/4:
///   -gamma t + t - log1p(t) + sum_{k>=2} (-1)^k (zeta(k) - 1) t^k / k.
inline double log_gamma_one_plus(double t) {
  const auto& z = zeta_minus_one();
  double series = 0.0;
  double power = t * t;
  for (int k = 2; k < zeta_terms; ++k) {
    series += ((k % 2 == 0) ? 1.0 : -1.0) * z[k] * power / k;
    power *= t;
  }
  return -euler_gamma * t + (t - std::log1p(t)) + series;
}

/// Stirling series, x >= 10.
inline double log_gamma_stirling(double x) {
  // B_{2k} / (2k (2k-1)), k = 1..8.
  static constexpr std::array<double, 8> c = {
      1.0 / 12.0,          -1.0 / 360.0,       1.0 / 1260.0,       -1.0 / 1680.0,
      1.0 / 1188.0,        -691.0 / 360360.0,  1.0 / 156.0,        -3617.0 / 122400.0};
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double corr = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) corr = corr * inv2 + *it;
  corr *= inv;
  return (x - 0.5) * std::log(x) - x + 0.5 * std::log(2.0 * std::numbers::pi) + corr;
}

}  // namespace detail

/// log Gamma(x) for real x > 0.
inline double log_gamma(double x) {
  if (!(x > 0.0)) throw domain_error("log_gamma needs x > 0");
  if (std::abs(x - 1.0) <= 0.25) return detail::log_gamma_one_plus(x - 1.0);
  if (std::abs(x - 2.0) <= 0.25) return detail::log_gamma_one_plus(x - 2.0) + std::log1p(x - 2.0);
  if (x >= 10.0) return detail::log_gamma_stirling(x);

  double product = 1.0;
  double shifted = x;
  while (shifted < 10.0) {
    product *= shifted;
    shifted += 1.0;
  }
  return detail::log_gamma_stirling(shifted) - std::log(product);
}

// ---------------------------------------------------------------------------
// Balanced Gamma quotients

struct GammaQuotientSpec {
  std::vector<double> a;
  std::vector<double> b;
  friend bool operator==(const GammaQuotientSpec&, const GammaQuotientSpec&) = default;
};

inline constexpr double balance_tolerance = 1e-12;

inline void validate(const GammaQuotientSpec& spec) {
  if (spec.a.empty() || spec.a.size() != spec.b.size())
    throw validation_error("gamma quotient needs equally many a and b parameters (d >= 1)");
  CompensatedSum diff;
  for (double x : spec.a) diff.add(x);
  for (double x : spec.b) diff.add(-x);
  if (std::abs(diff.value()) > balance_tolerance)
    throw balance_error("sum of a differs from sum of b by " + std::to_string(diff.value()));
  for (double x : spec.b)
    if (x <= 0.0 && x == std::floor(x)) throw domain_error("b parameter is zero or a negative integer");
}

/// Gamma(b_1)...Gamma(b_d) / (Gamma(a_1)...Gamma(a_d)) for positive parameters.
inline double eval_gamma_quotient(const GammaQuotientSpec& spec) {
  validate(spec);
  CompensatedSum log_value;
  for (double x : spec.b) log_value.add(log_gamma(x));
  for (double x : spec.a) log_value.add(-log_gamma(x));
  return std::exp(log_value.value());
}

/// prod_{n<N} prod_j (n+a_j)/(n+b_j).
///
/// Each factor is 1 + D(n)/prod_j (n+b_j) where D(n) = prod (n+a_j) - prod (n+b_j)
/// is expanded through elementary symmetric polynomials; balance makes the
/// n^{d-1} coefficient vanish, so D(n) is O(n^{d-2}) and is never formed by
/// cancellation.
inline double partial_quotient(const GammaQuotientSpec& spec, std::uint64_t N) {
  validate(spec);
  const std::size_t d = spec.a.size();
  auto elementary = [d](const std::vector<double>& xs) {
    std::vector<double> e(d + 1, 0.0);
    e[0] = 1.0;
    for (double x : xs)
      for (std::size_t i = d; i >= 1; --i) e[i] += x * e[i - 1];
    return e;
  };
  const auto ea = elementary(spec.a);
  const auto eb = elementary(spec.b);
  std::vector<double> de(d + 1, 0.0);
  for (std::size_t i = 2; i <= d; ++i) de[i] = ea[i] - eb[i];

  CompensatedSum log_value;
  for (std::uint64_t n = 0; n < N; ++n) {
    const double x = static_cast<double>(n);
    double diff = 0.0;
    for (std::size_t i = 1; i <= d; ++i) diff = diff * x + de[i];
    double denom = 1.0;
    for (double bj : spec.b) denom *= x + bj;
    log_value.add(std::log1p(diff / denom));
  }
  return std::exp(log_value.value());
}

/// Gamma-quotient form of prod_{n>=start} prod_{k in residues} ((Bn+k)/(Bn+k+1))^{(-1)^n},
/// obtained by pairing n = start+2m with start+2m+1 and dividing by 2B.
inline GammaQuotientSpec alternating_pair_spec(Base base, const std::vector<std::uint32_t>& residues,
                                               std::uint64_t start) {
  const double B = base.value();
  const double s = static_cast<double>(start);
  GammaQuotientSpec spec;
  for (std::uint32_t k : residues) {
    const double kk = k;
    std::vector<double> up = {(B * s + kk) / (2 * B), (B * s + B + kk + 1) / (2 * B)};
    std::vector<double> down = {(B * s + kk + 1) / (2 * B), (B * s + B + kk) / (2 * B)};
    if (start % 2 == 1) std::swap(up, down);
    spec.a.insert(spec.a.end(), up.begin(), up.end());
    spec.b.insert(spec.b.end(), down.begin(), down.end());
  }
  return spec;
}

/// Wallis: prod (n+1)^2 / ((n+1/2)(n+3/2)) = pi/2.
inline GammaQuotientSpec wallis_spec() { return {{1.0, 1.0}, {0.5, 1.5}}; }

/// prod_{n>=0} ((3n+1)/(3n+2))^{(-1)^n} paired: a = {1/6, 5/6}, b = {1/3, 2/3};
/// by the reflection formula its value is sin(pi/6)/sin(pi/3) = 1/sqrt(3).
inline GammaQuotientSpec p13_spec() { return alternating_pair_spec(Base{3}, {1}, 0); }

// ---------------------------------------------------------------------------
// Odd-base alternating products

/// C(n, k); exact in integers for n <= 60, via log-Gamma beyond.
inline double binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0.0;
  if (n <= 60) {
    unsigned __int128 c = 1;
    for (std::uint64_t i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
    return static_cast<double>(static_cast<std::uint64_t>(c));
  }
  return std::exp(log_gamma(n + 1.0) - log_gamma(k + 1.0) - log_gamma(n - k + 1.0));
}

struct OddBaseProducts {
  double even_k = 0.0;  ///< prod_{n>=1} prod_{k even} ((Bn+k)/(Bn+k+1))^{(-1)^n}
  double odd_k = 0.0;   ///< prod_{n>=1} prod_{k odd}  ((Bn+k)/(Bn+k+1))^{(-1)^n}
  double wallis = 0.0;  ///< even_k * odd_k = pi/2
};

inline void require_odd_base(std::uint32_t B) {
  if (B < 3 || B % 2 == 0) throw domain_error("odd base B >= 3 required, got " + std::to_string(B));
}

/// even_k = pi sqrt(B) C(B-1,(B-1)/2) / 2^B,  odd_k = 2^{B-1} / (sqrt(B) C(B-1,(B-1)/2)).
inline OddBaseProducts odd_base_products(std::uint32_t B) {
  require_odd_base(B);
  const double central = binomial(B - 1, (B - 1) / 2);
  const double root = std::sqrt(static_cast<double>(B));
  OddBaseProducts out;
  out.even_k = std::numbers::pi * root * central / std::ldexp(1.0, static_cast<int>(B));
  out.odd_k = std::ldexp(1.0, static_cast<int>(B) - 1) / (root * central);
  out.wallis = out.even_k * out.odd_k;
  return out;
}

inline std::vector<std::uint32_t> residues_with_parity(std::uint32_t B, bool odd) {
  std::vector<std::uint32_t> ks;
  for (std::uint32_t k = odd ? 1 : 0; k < B; k += 2) ks.push_back(k);
  return ks;
}

struct GammaSideReport {
  std::uint32_t base = 0;
  std::uint64_t terms = 0;
  OddBaseProducts closed;
  double even_k_truncated = 0.0;
  double odd_k_truncated = 0.0;
  double even_k_gamma = 0.0;  ///< Gamma-quotient value of the paired product
  double odd_k_gamma = 0.0;
  /// odd_k_truncated times the n = 0 factor prod_{k odd} k/(k+1); equals 1/sqrt(B).
  double full_odd_truncated = 0.0;
  double max_rel_err = 0.0;
  bool pass = false;
};

inline constexpr double gamma_side_tolerance = 1e-4;

/// Truncates both alternating products after N terms in n (N even, paired
/// into N/2 absolutely convergent factors) and compares to the closed forms.
inline GammaSideReport verify_gamma_side(std::uint32_t B, std::uint64_t N) {
  require_odd_base(B);
  if (N == 0 || N % 2 != 0) throw domain_error("verify_gamma_side needs a positive even N");

  const auto even_spec = alternating_pair_spec(Base{B}, residues_with_parity(B, false), 1);
  const auto odd_spec = alternating_pair_spec(Base{B}, residues_with_parity(B, true), 1);

  GammaSideReport r;
  r.base = B;
  r.terms = N;
  r.closed = odd_base_products(B);
  r.even_k_truncated = partial_quotient(even_spec, N / 2);
  r.odd_k_truncated = partial_quotient(odd_spec, N / 2);
  r.even_k_gamma = eval_gamma_quotient(even_spec);
  r.odd_k_gamma = eval_gamma_quotient(odd_spec);

  double first = 1.0;
  for (std::uint32_t k : residues_with_parity(B, true)) first *= static_cast<double>(k) / (k + 1.0);
  r.full_odd_truncated = r.odd_k_truncated * first;

  auto rel = [](double x, double ref) { return std::abs(x - ref) / std::abs(ref); };
  r.max_rel_err = std::max({rel(r.even_k_truncated, r.closed.even_k), rel(r.odd_k_truncated, r.closed.odd_k),
                            rel(r.even_k_gamma, r.closed.even_k), rel(r.odd_k_gamma, r.closed.odd_k),
                            rel(r.full_odd_truncated, 1.0 / std::sqrt(static_cast<double>(B)))});
  r.pass = r.max_rel_err <= gamma_side_tolerance;
  return r;
}

}  // namespace digiprod
