#pragma once

// Catalog of closed-form product identities as verifiable claims, estimates
// of the open constants Q and R, and the finite skeleton of the even/odd trick.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "digiprod/errors.hpp"
#include "digiprod/gamma.hpp"
#include "digiprod/products.hpp"
#include "digiprod/sequences.hpp"

namespace digiprod {

// ---------------------------------------------------------------------------
// Right-hand sides

/// B^exponent.
struct PowerOfB {
  std::uint32_t base = 2;
  cplx exponent{};
  friend bool operator==(const PowerOfB&, const PowerOfB&) = default;
};

struct Rational {
  std::int64_t p = 1;
  std::int64_t q = 1;
  friend bool operator==(const Rational&, const Rational&) = default;
};

struct One {
  friend bool operator==(const One&, const One&) = default;
};

struct ExplicitReal {
  double value = 0.0;
  std::string formula;
  friend bool operator==(const ExplicitReal&, const ExplicitReal&) = default;
};

/// Value of a balanced Gamma quotient.
struct GammaRef {
  GammaQuotientSpec spec;
  friend bool operator==(const GammaRef&, const GammaRef&) = default;
};

using ClosedForm = std::variant<PowerOfB, Rational, One, ExplicitReal, GammaRef>;

inline cplx value_of(const ClosedForm& form) {
  struct {
    cplx operator()(const PowerOfB& f) const {
      if (f.exponent.imag() == 0.0) return std::pow(static_cast<double>(f.base), f.exponent.real());
      return std::exp(f.exponent * std::log(static_cast<double>(f.base)));
    }
    cplx operator()(const Rational& f) const { return static_cast<double>(f.p) / static_cast<double>(f.q); }
    cplx operator()(const One&) const { return 1.0; }
    cplx operator()(const ExplicitReal& f) const { return f.value; }
    cplx operator()(const GammaRef& f) const { return eval_gamma_quotient(f.spec); }
  } visitor;
  return std::visit(visitor, form);
}

inline std::string describe(const ClosedForm& form) {
  auto num = [](double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return std::string(buf);
  };
  struct {
    decltype(num)& fmt;
    std::string operator()(const PowerOfB& f) const {
      std::string e = fmt(f.exponent.real());
      if (f.exponent.imag() != 0.0) e += (f.exponent.imag() < 0 ? "" : "+") + fmt(f.exponent.imag()) + "i";
      return std::to_string(f.base) + "^(" + e + ")";
    }
    std::string operator()(const Rational& f) const { return std::to_string(f.p) + "/" + std::to_string(f.q); }
    std::string operator()(const One&) const { return "1"; }
    std::string operator()(const ExplicitReal& f) const { return f.formula; }
    std::string operator()(const GammaRef&) const { return "gamma quotient"; }
  } visitor{num};
  return std::visit(visitor, form);
}

// ---------------------------------------------------------------------------
// Claims

/// Which part of the combined log is compared with log(rhs).
enum class Projection { full, real_part, imag_part };

/// One product log, scaled by a complex weight before the parts are added.
struct ClaimPart {
  ProductSpec spec;
  cplx weight{1.0, 0.0};
};

/// The claim is  proj(sum_parts weight * log(product)) = log(rhs).
struct IdentityClaim {
  std::string name;
  std::vector<ClaimPart> parts;
  Projection projection = Projection::full;
  ClosedForm rhs;
  std::string cite;
  double tol = 1e-4;
  std::uint64_t cost_hint = 1'000'000;
  std::string notes;
};

/// Tolerance classes, matched to an N^{alpha-1} tail at N = 10^7.
inline constexpr double tol_bounded = 1e-5;    ///< bounded partial sums (epsilon-type, alternating)
inline constexpr double tol_unit_root = 1e-4;  ///< unit-modulus exponents
inline constexpr double tol_real_power = 5e-4; ///< real 0 < |w| < 1 powers

namespace detail {

inline ProductSpec product(Base base, ExponentSeq seq, std::vector<Factor> factors) {
  ProductSpec spec{base, std::move(factors), std::move(seq)};
  validate(spec);
  return spec;
}

inline std::vector<Factor> odd_residue_factors(std::uint32_t B) {
  std::vector<Factor> out;
  for (std::uint32_t k = 1; k < B; k += 2) out.push_back(make_factor(k));
  return out;
}

inline cplx half_turn(double p, double q) { return std::polar(1.0, std::numbers::pi * p / q); }

/// Factors sin(pi k p/q) e^{i pi k p/q} over 0 < k < B, k != 0 mod q.
inline std::vector<Factor> sine_weighted_factors(std::uint32_t B, std::uint32_t q, std::uint32_t p) {
  std::vector<Factor> out;
  for (std::uint32_t k = 1; k < B; ++k) {
    if (k % q == 0) continue;
    const double angle = std::numbers::pi * k * p / q;
    out.push_back(make_factor(k, std::sin(angle) * std::polar(1.0, angle)));
  }
  return out;
}

inline std::string tag(std::string s, std::uint32_t x) { return s + std::to_string(x); }

}  // namespace detail

/// prod_n prod_{0<k<B, u(k) != 1} ((Bn+k)/(Bn+k+1))^{u(n)(1-u(k))} = 1/B
/// for a strongly B-multiplicative u with |u| <= 1, other than 1,0,0,... and 1,1,1,...
inline IdentityClaim strong_mult_claim(std::string name, Base base, std::vector<cplx> digit_values,
                                       double tol) {
  const ExponentSeq seq = strongly_multiplicative(base, digit_values);
  std::vector<Factor> factors;
  for (std::uint32_t k = 1; k < base.value(); ++k)
    if (digit_values[k - 1] != cplx{1.0, 0.0}) factors.push_back(make_factor(k, 1.0 - digit_values[k - 1]));
  return {std::move(name), {{detail::product(base, seq, factors)}}, Projection::full,
          PowerOfB{base.value(), -1.0}, "strongly multiplicative products", tol, 1'000'000, {}};
}

/// u(n) = z^{N_0(n)}: prod_{n>=1} (Bn/(Bn+1))^{(1-z) z^{N_0(n)}} = 1/B, or in log
/// form prod_{n>=1} (Bn/(Bn+1))^{z^{N_0(n)}} = B^{1/(z-1)}.
inline IdentityClaim zero_count_claim(Base base, cplx z, bool log_form) {
  if (z == cplx{0.0, 0.0} || z == cplx{1.0, 0.0}) throw domain_error("zero-count claim needs z not in {0, 1}");
  if (std::abs(z) > 1.0) throw validation_error("zero-count claim needs |z| <= 1");
  const ExponentSeq seq = digit_stat_power(base, z, CountDigit{0});
  const cplx c = log_form ? cplx{1.0, 0.0} : 1.0 - z;
  const ClosedForm rhs = log_form ? ClosedForm{PowerOfB{base.value(), 1.0 / (z - 1.0)}}
                                  : ClosedForm{PowerOfB{base.value(), -1.0}};
  const double tol = z.imag() == 0.0 ? tol_real_power : tol_unit_root;
  return {std::string(log_form ? "zero_count_log_b" : "zero_count_b") + std::to_string(base.value()),
          {{detail::product(base, seq, {make_factor(0, c)})}},
          Projection::full,
          rhs,
          "zero-digit counting products",
          tol, 1'000'000, {}};
}

/// u(n) = omega^n with B = 1 mod q; sin (imag part) gives 1/sqrt(B), cos (real part) gives 1.
inline IdentityClaim roots_of_unity_claim(Base base, std::uint32_t q, std::uint32_t p, bool sine) {
  if (base.value() % q != 1) throw domain_error("roots-of-unity claim needs B = 1 mod q");
  const ExponentSeq seq = periodic_power(base, q, p);
  return {std::string("roots_of_unity_") + (sine ? "sin" : "cos") + "_b" + std::to_string(base.value()) + "_q" +
              std::to_string(q) + "_p" + std::to_string(p),
          {{detail::product(base, seq, detail::sine_weighted_factors(base.value(), q, p))}},
          sine ? Projection::imag_part : Projection::real_part,
          sine ? ClosedForm{PowerOfB{base.value(), -0.5}} : ClosedForm{One{}},
          "roots of unity exponents",
          tol_unit_root, 1'000'000, {}};
}

/// u(n) = omega^{s_B(n)}; the sin/cos pair gives 1/sqrt(B) and 1.
inline IdentityClaim digit_sum_root_claim(Base base, std::uint32_t q, std::uint32_t p, bool sine) {
  const ExponentSeq seq = digit_stat_power(base, detail::half_turn(2.0 * p, q), DigitSum{});
  return {std::string("digit_sum_root_") + (sine ? "sin" : "cos") + "_b" + std::to_string(base.value()) + "_q" +
              std::to_string(q) + "_p" + std::to_string(p),
          {{detail::product(base, seq, detail::sine_weighted_factors(base.value(), q, p))}},
          sine ? Projection::imag_part : Projection::real_part,
          sine ? ClosedForm{PowerOfB{base.value(), -0.5}} : ClosedForm{One{}},
          "roots of unity raised to the digit sum",
          tol_unit_root, 1'000'000, {}};
}

/// u(n) = z^{s_B(n)}: prod_n prod_{0<k<B, z^k != 1} (...)^{z^{s_B(n)}(1 - z^k)} = 1/B.
inline IdentityClaim z_digit_sum_claim(std::string name, Base base, cplx z) {
  if (z == cplx{0.0, 0.0} || z == cplx{1.0, 0.0}) throw domain_error("digit-sum power claim needs z not in {0, 1}");
  const ExponentSeq seq = digit_stat_power(base, z, DigitSum{});
  std::vector<Factor> factors;
  for (std::uint32_t k = 1; k < base.value(); ++k) {
    const cplx zk = ipow(z, k);
    if (zk != cplx{1.0, 0.0}) factors.push_back(make_factor(k, 1.0 - zk));
  }
  const double tol = std::abs(z) < 1.0 && z.imag() == 0.0 ? tol_real_power : tol_unit_root;
  return {std::move(name), {{detail::product(base, seq, factors)}}, Projection::full,
          PowerOfB{base.value(), -1.0}, "digit-sum power products", tol, 1'000'000, {}};
}

/// u(n) = (-1)^{s_B(n)} on the odd residues: 1/sqrt(B).
inline IdentityClaim sum_of_digits_claim(Base base) {
  const ExponentSeq seq = digit_stat_power(base, -1.0, DigitSum{});
  return {"sum_of_digits_b" + std::to_string(base.value()),
          {{detail::product(base, seq, detail::odd_residue_factors(base.value()))}},
          Projection::full,
          PowerOfB{base.value(), -0.5},
          "sum-of-digits sign products",
          tol_bounded, 1'000'000, {}};
}

/// u(n) = omega^{N_J(n)} on residues k in J (start delta_k), c = e^{i pi p/q}:
/// imag part gives B^{-1/(2 sin(pi p/q))}, real part gives 1.
inline IdentityClaim digit_set_claim(std::string name, Base base, std::vector<std::uint32_t> J, std::uint32_t q,
                                     std::uint32_t p, bool sine) {
  const CountSet set = make_count_set(J);
  if (set.digits.empty() || set.digits.size() >= base.value())
    throw domain_error("digit-set claim needs a nonempty proper subset of the digits");
  if (q <= p || p == 0) throw validation_error("digit-set claim needs q > p > 0");
  const ExponentSeq seq = digit_stat_power(base, detail::half_turn(2.0 * p, q), set);
  std::vector<Factor> factors;
  for (std::uint32_t k : set.digits) factors.push_back(make_factor(k, detail::half_turn(p, q)));
  const double exponent = -1.0 / (2.0 * std::sin(std::numbers::pi * p / q));
  return {std::move(name),
          {{detail::product(base, seq, factors)}},
          sine ? Projection::imag_part : Projection::real_part,
          sine ? ClosedForm{PowerOfB{base.value(), exponent}} : ClosedForm{One{}},
          "digit-set counting products",
          q == 2 ? tol_bounded : tol_unit_root, 1'000'000, {}};
}

/// prod_{n>=0} prod_{k odd} ((Bn+k)/(Bn+k+1))^{(-1)^n} = 1/sqrt(B), B odd.
inline IdentityClaim odd_alternating_claim(Base base) {
  require_odd_base(base.value());
  const ExponentSeq seq = periodic_power(base, 2, 1);
  IdentityClaim claim{"odd_alternating_b" + std::to_string(base.value()),
                      {{detail::product(base, seq, detail::odd_residue_factors(base.value()))}},
                      Projection::full,
                      PowerOfB{base.value(), -0.5},
                      "odd-base alternating products",
                      tol_bounded, 1'000'000, {}};
  if (base.value() == 3) {
    claim.rhs = GammaRef{p13_spec()};
    claim.notes =
        "Pairing n = 2m and 2m+1 gives prod_m (m+1/6)(m+5/6)/((m+1/3)(m+2/3)), a balanced quotient equal to "
        "Gamma(1/3)Gamma(2/3)/(Gamma(1/6)Gamma(5/6)) = sin(pi/6)/sin(pi/3) = 1/sqrt(3) by reflection.";
  }
  return claim;
}

inline std::vector<IdentityClaim> catalog() {
  using detail::product;
  std::vector<IdentityClaim> out;
  const ExponentSeq tm = thue_morse_sequence();

  out.push_back({"woods_robbins", {{product(Base{2}, tm, {make_factor(1)})}}, Projection::full,
                 ExplicitReal{std::numbers::sqrt2 / 2.0, "1/sqrt(2)"}, "Woods-Robbins product", tol_bounded, 1'000'000, {}});

  out.push_back(strong_mult_claim("strong_mult_eps_b2", Base{2}, {-1.0}, tol_bounded));
  out.push_back(strong_mult_claim("strong_mult_table_b3", Base{3}, {cplx{0.0, 1.0}, -0.5}, tol_unit_root));

  out.push_back(zero_count_claim(Base{3}, 0.5, false));
  out.push_back(zero_count_claim(Base{3}, 0.5, true));
  out.push_back(zero_count_claim(Base{4}, cplx{0.0, 1.0}, true));
  out.back().name = "zero_count_log_b4_i";

  for (bool sine : {true, false}) {
    out.push_back(roots_of_unity_claim(Base{5}, 4, 1, sine));
    out.push_back(roots_of_unity_claim(Base{7}, 3, 1, sine));
  }

  // sigma(n) = +1 for n = 0,1 mod 4, -1 for n = 2,3 mod 4. Squaring the B=5,
  // q=4 sin product gives exponents sigma(n), sigma(n)+sigma(n+1),
  // sigma(n+1); weight -2 on the same log gives sigma(n-1), ..., sigma(n).
  {
    const Base b5{5};
    const ProductSpec spec = product(b5, periodic_power(b5, 4, 1), detail::sine_weighted_factors(5, 4, 1));
    out.push_back({"sigma_b5_first", {{spec, cplx{0.0, -2.0}}}, Projection::real_part, Rational{1, 5},
                   "sigma products, base 5", tol_unit_root, 1'000'000, {}});
    out.push_back({"sigma_b5_second", {{spec, -2.0}}, Projection::real_part, One{}, "sigma products, base 5",
                   tol_unit_root, 1'000'000, {}});
  }

  out.push_back(z_digit_sum_claim("z_digit_sum_b3_half_i", Base{3}, cplx{0.0, 0.5}));
  {
    // ((2n+1)/(2n+2))^{(1/2)^{s_2(n)}}: the z = 1/2 product squared.
    const Base b2{2};
    out.push_back({"z_digit_sum_b2_half",
                   {{product(b2, digit_stat_power(b2, 0.5, DigitSum{}), {make_factor(1)})}},
                   Projection::full, Rational{1, 4}, "digit-sum power products", tol_real_power, 1'000'000, {}});
  }

  for (bool sine : {true, false}) {
    out.push_back(digit_sum_root_claim(Base{2}, 4, 1, sine));
    out.push_back(digit_sum_root_claim(Base{5}, 3, 1, sine));
  }

  {
    // prod (3n+1)^{theta(s)} (3n+2)^{theta(s+1)} (3n+3)^{theta(s+2)}: square of the
    // sin product times the cos product raised to -2/sqrt(3).
    const Base b3{3};
    const ProductSpec spec =
        product(b3, digit_stat_power(b3, detail::half_turn(2.0, 3.0), DigitSum{}), detail::sine_weighted_factors(3, 3, 1));
    out.push_back({"theta_b3", {{spec, cplx{-2.0 / std::sqrt(3.0), -2.0}}}, Projection::real_part, Rational{1, 3},
                   "theta products, base 3", tol_unit_root, 1'000'000, {}});
  }

  for (std::uint32_t B : {2u, 3u, 6u}) out.push_back(sum_of_digits_claim(Base{B}));

  out.push_back(digit_set_claim("digit_set_sin_b4_J13_q3", Base{4}, {1, 3}, 3, 1, true));
  out.push_back(digit_set_claim("digit_set_cos_b4_J13_q3", Base{4}, {1, 3}, 3, 1, false));
  out.push_back(digit_set_claim("digit_set_b5_J02_q2", Base{5}, {0, 2}, 2, 1, true));

  out.push_back(digit_set_claim("single_digit_b2_k1", Base{2}, {1}, 2, 1, true));
  out.push_back(digit_set_claim("single_digit_b2_k0", Base{2}, {0}, 2, 1, true));

  // eta(N) = (2/sqrt 3) sin(pi(2N+1)/3) and theta(N+1) = 2 cos(pi(2N+1)/3).
  for (std::uint32_t k = 0; k < 3; ++k) {
    const Base b3{3};
    const ProductSpec spec = product(b3, digit_stat_power(b3, detail::half_turn(2.0, 3.0), CountDigit{k}),
                                     {make_factor(k, detail::half_turn(1.0, 3.0))});
    out.push_back({detail::tag("eta_b3_k", k), {{spec, cplx{0.0, -2.0 / std::sqrt(3.0)}}}, Projection::real_part,
                   PowerOfB{3, -2.0 / 3.0}, "eta and theta digit-count products, base 3", tol_unit_root, 1'000'000, {}});
    out.push_back({detail::tag("theta_count_b3_k", k), {{spec, 2.0}}, Projection::real_part, One{},
                   "eta and theta digit-count products, base 3", tol_unit_root, 1'000'000, {}});
  }

  for (std::uint32_t B : {3u, 5u, 7u}) out.push_back(odd_alternating_claim(Base{B}));
  return out;
}

inline std::optional<IdentityClaim> find_claim(const std::string& name) {
  for (auto& c : catalog())
    if (c.name == name) return c;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Verification

struct VerifyReport {
  std::string name;
  cplx computed{};
  cplx expected{};
  double abs_err = 0.0;
  double rel_err = 0.0;
  double log_err = 0.0;  ///< |log(computed / expected)|
  double err_est = 0.0;  ///< combined err_est of the parts, on the log
  double tol = 0.0;
  bool pass = false;
  std::uint64_t terms = 0;
  double seconds = 0.0;
};

struct VerifyOptions {
  EvalOptions eval;
  std::optional<double> tol;  ///< overrides claim.tol
};

/// Combined, projected log of the claim's products.
inline cplx claim_log(const IdentityClaim& claim, std::uint64_t N, const EvalOptions& opts, double* err_est = nullptr,
                      std::uint64_t* terms = nullptr) {
  CompensatedComplexSum total;
  double err = 0.0;
  for (const auto& part : claim.parts) {
    const EvalResult r = eval_abel(part.spec, N, true, opts);
    total.add(part.weight * r.log_value);
    err += std::abs(part.weight) * r.err_est;
    if (terms) *terms = r.terms;
  }
  if (err_est) *err_est = err;
  const cplx L = total.value();
  switch (claim.projection) {
    case Projection::real_part: return L.real();
    case Projection::imag_part: return L.imag();
    default: return L;
  }
}

/// Evaluates the claim with Abel summation and tail extrapolation;
/// passes iff rel_err <= tol.
inline VerifyReport verify(const IdentityClaim& claim, std::uint64_t N, const VerifyOptions& opts = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  VerifyReport r;
  r.name = claim.name;
  r.tol = opts.tol.value_or(claim.tol);
  r.computed = std::exp(claim_log(claim, N, opts.eval, &r.err_est, &r.terms));
  r.expected = value_of(claim.rhs);
  r.abs_err = std::abs(r.computed - r.expected);
  r.rel_err = r.abs_err / std::abs(r.expected);
  r.log_err = std::abs(std::log(r.computed / r.expected));
  r.pass = r.rel_err <= r.tol;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

struct VerifyAllReport {
  std::vector<VerifyReport> claims;
  std::size_t passed = 0;
  double worst_rel_err = 0.0;
  std::string worst_claim;
  double seconds = 0.0;
};

/// Runs verify over the given claims (the whole catalog when empty).
/// Claims run one after another; each evaluation is block-parallel.
inline VerifyAllReport verify_all(std::uint64_t N, const VerifyOptions& opts = {},
                                  std::vector<IdentityClaim> claims = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  if (claims.empty()) claims = catalog();
  VerifyAllReport out;
  for (const auto& c : claims) {
    out.claims.push_back(verify(c, N, opts));
    const auto& r = out.claims.back();
    if (r.pass) ++out.passed;
    if (r.rel_err >= out.worst_rel_err) {
      out.worst_rel_err = r.rel_err;
      out.worst_claim = r.name;
    }
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

// ---------------------------------------------------------------------------
// Q, R and the even/odd trick

struct QREstimate {
  double Q = 0.0;
  double Q_err_est = 0.0;
  double R = 0.0;
  double R_err_est = 0.0;
  double product_check = 0.0;  ///< Q R, which must be 3/2
  std::uint64_t terms = 0;
};

/// Q = prod_{n>=1} (2n/(2n+1))^{eps(n)} via Abel summation;
/// R = prod_{n>=1} ((4n+1)(4n+2)/(4n(4n+3)))^{eps(n)} by direct summation of
/// its absolutely convergent log series.
inline QREstimate estimate_QR(std::uint64_t N, const EvalOptions& opts = {}) {
  if (N < 1000) throw domain_error("estimate_QR needs N >= 1000");
  const Base b2{2};
  const ProductSpec q_spec{b2, {make_factor(0)}, thue_morse_sequence()};
  const EvalResult q = eval_abel(q_spec, N, true, opts);

  CompensatedSum log_r;
  for (std::uint64_t n = 1; n < N; ++n) {
    const double x = 4.0 * static_cast<double>(n);
    log_r.add(thue_morse(n) * std::log1p(2.0 / (x * (x + 3.0))));
  }

  QREstimate out;
  out.Q = q.value.real();
  out.Q_err_est = q.err_est * out.Q;
  out.R = std::exp(log_r.value());
  // Tail of sum 1/(8 n^2) beyond N, bounding the alternating remainder.
  out.R_err_est = out.R * (1.0 / (8.0 * static_cast<double>(N)) + detail::rounding_floor);
  out.product_check = out.Q * out.R;
  out.terms = N;
  return out;
}

struct TrickReport {
  bool pass = false;
  double merge_deviation = 0.0;  ///< part (a)
  double split_deviation = 0.0;  ///< part (b)
};

/// Finite form of the trick, N a power of 2:
/// (a) sum_{1<=n<N} eps(n)[log(2n/(2n+1)) + log((2n+1)/(2n+2))] = sum_{1<=n<N} eps(n) log(n/(n+1));
/// (b) sum_{1<=n<2N} eps(n) log(n/(n+1))
///       = sum_{1<=n<N} eps(n) log(2n/(2n+1)) - sum_{0<=n<N} eps(n) log((2n+1)/(2n+2)).
inline TrickReport trick_check(std::uint64_t N) {
  if (N == 0 || (N & (N - 1)) != 0) throw domain_error("trick_check needs N a power of 2");
  const Base b2{2};
  CompensatedSum merged_lhs, merged_rhs;
  for (std::uint64_t n = 1; n < N; ++n) {
    const double e = thue_morse(n);
    merged_lhs.add(e * (log_term(b2, 0, n) + log_term(b2, 1, n)));
    merged_rhs.add(e * -std::log1p(1.0 / static_cast<double>(n)));
  }

  CompensatedSum whole, split;
  for (std::uint64_t n = 1; n < 2 * N; ++n) whole.add(thue_morse(n) * -std::log1p(1.0 / static_cast<double>(n)));
  for (std::uint64_t n = 0; n < N; ++n) {
    const double e = thue_morse(n);
    if (n >= 1) split.add(e * log_term(b2, 0, n));
    split.add(-e * log_term(b2, 1, n));
  }

  TrickReport r;
  r.merge_deviation = std::abs(merged_lhs.value() - merged_rhs.value());
  r.split_deviation = std::abs(whole.value() - split.value());
  r.pass = r.merge_deviation <= structural_tolerance && r.split_deviation <= structural_tolerance;
  return r;
}

}  // namespace digiprod
