#pragma once

// Text form of sequence and product specifications:
//
//   base=2; exponent=count_digit_pow(-1,1); factors=1:1
//
// Statements are separated by ';' or newlines and whitespace is ignored.
// Exponent kinds: thue_morse, digit_sum_pow(w), count_digit_pow(w,j),
// count_set_pow(w,J=j1|j2|...), length_pow(w), periodic_pow(q,p),
// table(u1,...,u_{B-1}), residue(v0,v1,...). Factors are k or k:c, with an
// optional @start; c is a complex literal such as 1, -0.5, i, -i, 0.5+0.5i.
// Without a factors statement the text describes a bare sequence.

#include <cctype>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "digiprod/digits.hpp"
#include "digiprod/errors.hpp"
#include "digiprod/gamma.hpp"
#include "digiprod/products.hpp"
#include "digiprod/sequences.hpp"

namespace digiprod {

using ParsedSpec = std::variant<ProductSpec, ExponentSeq>;

namespace detail {

class SpecLexer {
 public:
  SpecLexer(std::string_view text, std::size_t offset = 0) : text_(text), offset_(offset) {}

  void skip_space() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\r')) ++pos_;
  }
  bool done() {
    skip_space();
    return pos_ >= text_.size();
  }
  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw parse_error(what, offset_ + pos_);
  }

  std::string identifier() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    if (start == pos_) fail("expected a name");
    return std::string(text_.substr(start, pos_ - start));
  }

  std::uint64_t integer() {
    skip_space();
    std::uint64_t value = 0;
    const auto [end, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value);
    if (ec != std::errc{}) fail("expected a nonnegative integer");
    pos_ = static_cast<std::size_t>(end - text_.data());
    return value;
  }

  /// Unsigned decimal number; a leading sign is handled by the caller.
  double unsigned_real() {
    skip_space();
    if (pos_ >= text_.size() || !(std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
      fail("expected a number");
    double value = 0.0;
    const auto [end, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value);
    if (ec != std::errc{}) fail("malformed number");
    pos_ = static_cast<std::size_t>(end - text_.data());
    return value;
  }

  double real() {
    const bool negative = accept('-');
    if (!negative) accept('+');
    const double x = unsigned_real();
    return negative ? -x : x;
  }

  /// p, p/q or a decimal.
  double rational() {
    const double num = real();
    if (!accept('/')) return num;
    const double den = unsigned_real();
    if (den == 0.0) fail("zero denominator");
    return num / den;
  }

  /// a, bi, i, -i, a+bi, a-i, ...
  cplx complex() {
    cplx total{};
    bool first = true;
    bool saw_real = false;
    bool saw_imag = false;
    while (true) {
      skip_space();
      double sign = 1.0;
      if (accept('-')) {
        sign = -1.0;
      } else if (!accept('+') && !first) {
        break;
      }
      double magnitude = 1.0;
      bool has_number = false;
      const char c = peek();
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        magnitude = unsigned_real();
        has_number = true;
      }
      if (accept('i')) {
        if (saw_imag) fail("two imaginary parts");
        saw_imag = true;
        total += cplx{0.0, sign * magnitude};
      } else {
        if (!has_number) fail("expected a complex literal");
        if (saw_real || saw_imag) fail("real part must come first");
        saw_real = true;
        total += cplx{sign * magnitude, 0.0};
      }
      first = false;
      const char next = peek();
      if (next != '+' && next != '-') break;
    }
    return total;
  }

  std::size_t position() const { return offset_ + pos_; }

 private:
  std::string_view text_;
  std::size_t offset_;
  std::size_t pos_ = 0;
};

struct Statement {
  std::string key;
  std::string_view value;
  std::size_t value_offset;
};

inline std::vector<Statement> split_statements(std::string_view text) {
  std::vector<Statement> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find_first_of(";\n", start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view piece = text.substr(start, end - start);
    if (piece.find_first_not_of(" \t\r") != std::string_view::npos) {
      const std::size_t eq = piece.find('=');
      SpecLexer lex(piece.substr(0, eq == std::string_view::npos ? piece.size() : eq), start);
      const std::string key = lex.identifier();
      if (!lex.done()) lex.fail("unexpected text after key");
      if (eq == std::string_view::npos) lex.fail("expected '=' after " + key);
      out.push_back({key, piece.substr(eq + 1), start + eq + 1});
    }
    start = end + 1;
  }
  return out;
}

inline ExponentSeq parse_exponent(std::string_view text, std::size_t offset, Base base) {
  SpecLexer lex(text, offset);
  lex.skip_space();
  const std::size_t kind_at = lex.position();
  const std::string kind = lex.identifier();
  std::vector<std::uint32_t> J;

  std::optional<ExponentSeq> seq;
  if (kind == "thue_morse") {
    if (base.value() != 2) throw validation_error("thue_morse needs base 2");
    if (lex.accept('(')) lex.expect(')');
    seq = thue_morse_sequence();
  } else {
    lex.expect('(');
    if (kind == "digit_sum_pow") {
      seq = digit_stat_power(base, lex.complex(), DigitSum{});
    } else if (kind == "length_pow") {
      seq = digit_stat_power(base, lex.complex(), Length{});
    } else if (kind == "count_digit_pow") {
      const cplx w = lex.complex();
      lex.expect(',');
      const auto j = lex.integer();
      if (j >= base.value()) throw validation_error("digit " + std::to_string(j) + " out of range for base " +
                                                    std::to_string(base.value()));
      seq = digit_stat_power(base, w, CountDigit{static_cast<std::uint32_t>(j)});
    } else if (kind == "count_set_pow") {
      const cplx w = lex.complex();
      lex.expect(',');
      if (lex.identifier() != "J") lex.fail("expected J=");
      lex.expect('=');
      do {
        const auto j = lex.integer();
        if (j >= base.value()) throw validation_error("digit " + std::to_string(j) + " out of range for base " +
                                                      std::to_string(base.value()));
        J.push_back(static_cast<std::uint32_t>(j));
      } while (lex.accept('|'));
      seq = digit_stat_power(base, w, make_count_set(J));
    } else if (kind == "periodic_pow") {
      const auto q = lex.integer();
      lex.expect(',');
      const auto p = lex.integer();
      seq = periodic_power(base, static_cast<std::uint32_t>(q), static_cast<std::uint32_t>(p));
    } else if (kind == "table" || kind == "residue") {
      std::vector<cplx> values;
      do values.push_back(lex.complex());
      while (lex.accept(','));
      seq = kind == "table" ? strongly_multiplicative(base, std::move(values)) : signed_residue(base, std::move(values));
    } else {
      throw parse_error("unknown exponent kind '" + kind + "'", kind_at);
    }
    lex.expect(')');
  }
  if (!lex.done()) lex.fail("unexpected text after exponent");
  return std::move(*seq);
}

inline std::vector<Factor> parse_factors(std::string_view text, std::size_t offset) {
  SpecLexer lex(text, offset);
  std::vector<Factor> out;
  do {
    const auto k = lex.integer();
    Factor f = make_factor(static_cast<std::uint32_t>(k));
    if (lex.accept(':')) f.multiplier = lex.complex();
    if (lex.accept('@')) f.start = lex.integer();
    out.push_back(f);
  } while (lex.accept(','));
  if (!lex.done()) lex.fail("unexpected text after factors");
  return out;
}

}  // namespace detail

/// Parses a product specification, or a bare sequence when no factors are given.
inline ParsedSpec parse_spec(std::string_view text) {
  std::optional<Base> base;
  std::optional<detail::Statement> exponent;
  std::optional<detail::Statement> factors;
  for (const auto& st : detail::split_statements(text)) {
    detail::SpecLexer lex(st.value, st.value_offset);
    if (st.key == "base") {
      if (base) lex.fail("base given twice");
      const auto b = lex.integer();
      if (!lex.done()) lex.fail("unexpected text after base");
      if (b < 2 || b > 1'000'000) throw validation_error("base must be in [2, 10^6], got " + std::to_string(b));
      base = Base{static_cast<std::uint32_t>(b)};
    } else if (st.key == "exponent") {
      if (exponent) lex.fail("exponent given twice");
      exponent = st;
    } else if (st.key == "factors") {
      if (factors) lex.fail("factors given twice");
      factors = st;
    } else {
      throw parse_error("unknown key '" + st.key + "'", st.value_offset);
    }
  }
  if (!base) throw parse_error("missing base", text.size());
  if (!exponent) throw parse_error("missing exponent", text.size());

  ExponentSeq seq = detail::parse_exponent(exponent->value, exponent->value_offset, *base);
  if (!factors) return seq;
  ProductSpec spec{*base, detail::parse_factors(factors->value, factors->value_offset), std::move(seq)};
  validate(spec);
  return spec;
}

/// parse_spec, requiring a product.
inline ProductSpec parse_product(std::string_view text) {
  auto parsed = parse_spec(text);
  if (auto* p = std::get_if<ProductSpec>(&parsed)) return std::move(*p);
  throw parse_error("specification has no factors", text.size());
}

/// The sequence of a parsed specification, whichever form it took.
inline ExponentSeq sequence_of(const ParsedSpec& parsed) {
  if (const auto* p = std::get_if<ProductSpec>(&parsed)) return p->seq;
  return std::get<ExponentSeq>(parsed);
}

// ---------------------------------------------------------------------------
// Rendering

inline std::string render_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string render_complex(cplx z) {
  if (z.imag() == 0.0) return render_real(z.real());
  const std::string im = render_real(std::abs(z.imag())) + "i";
  if (z.real() == 0.0) return (z.imag() < 0 ? "-" : "") + im;
  return render_real(z.real()) + (z.imag() < 0 ? "-" : "+") + im;
}

inline std::string render(const ExponentSeq& seq) {
  struct {
    std::string operator()(const StronglyMultiplicative& s) const {
      std::string out = "table(";
      for (std::size_t d = 1; d < s.table.size(); ++d) out += (d > 1 ? "," : "") + render_complex(s.table[d]);
      return out + ")";
    }
    std::string operator()(const DigitStatPower& s) const {
      const std::string w = render_complex(s.w);
      if (const auto* c = std::get_if<CountDigit>(&s.stat))
        return "count_digit_pow(" + w + "," + std::to_string(c->digit) + ")";
      if (const auto* c = std::get_if<CountSet>(&s.stat)) {
        std::string out = "count_set_pow(" + w + ",J=";
        for (std::size_t i = 0; i < c->digits.size(); ++i) out += (i ? "|" : "") + std::to_string(c->digits[i]);
        return out + ")";
      }
      if (std::holds_alternative<Length>(s.stat)) return "length_pow(" + w + ")";
      return "digit_sum_pow(" + w + ")";
    }
    std::string operator()(const PeriodicPower& s) const {
      return "periodic_pow(" + std::to_string(s.q) + "," + std::to_string(s.p) + ")";
    }
    std::string operator()(const SignedResidue& s) const {
      std::string out = "residue(";
      for (std::size_t i = 0; i < s.values.size(); ++i) out += (i ? "," : "") + render_complex(s.values[i]);
      return out + ")";
    }
  } visitor;
  return "base=" + std::to_string(base_of(seq).value()) + "; exponent=" + std::visit(visitor, seq);
}

inline std::string render(const ProductSpec& spec) {
  std::string out = render(spec.seq) + "; factors=";
  for (std::size_t i = 0; i < spec.factors.size(); ++i) {
    const Factor& f = spec.factors[i];
    out += (i ? "," : "") + std::to_string(f.residue) + ":" + render_complex(f.multiplier);
    if (f.start != make_factor(f.residue).start) out += "@" + std::to_string(f.start);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Gamma quotients: "a=1/6|5/6, b=1/3|2/3"

inline GammaQuotientSpec parse_gamma_quotient(std::string_view text) {
  GammaQuotientSpec spec;
  bool have_a = false;
  bool have_b = false;
  detail::SpecLexer lex(text);
  do {
    const std::string key = lex.identifier();
    if (key != "a" && key != "b") lex.fail("expected a= or b=");
    if ((key == "a" && have_a) || (key == "b" && have_b)) lex.fail(key + " given twice");
    (key == "a" ? have_a : have_b) = true;
    lex.expect('=');
    auto& list = key == "a" ? spec.a : spec.b;
    do list.push_back(lex.rational());
    while (lex.accept('|'));
  } while (lex.accept(',') || lex.accept(';'));
  if (!lex.done()) lex.fail("unexpected text in gamma quotient");
  if (!have_a || !have_b) throw parse_error("gamma quotient needs both a= and b=", text.size());
  validate(spec);
  return spec;
}

}  // namespace digiprod
