#pragma once

// Base-B digit expansions and the digit statistics used to build exponent
// sequences. Zero is the empty word: expand(0) is empty and every statistic
// vanishes at 0.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "digiprod/errors.hpp"

namespace digiprod {

/// Integer radix B >= 2.
class Base {
 public:
  explicit constexpr Base(std::uint32_t radix) : radix_(radix) {
    if (radix < 2) throw validation_error("base must be >= 2, got " + std::to_string(radix));
  }

  constexpr std::uint32_t value() const noexcept { return radix_; }
  constexpr operator std::uint32_t() const noexcept { return radix_; }

  friend constexpr bool operator==(Base, Base) = default;

 private:
  std::uint32_t radix_;
};

/// Least significant digit first.
using digit_list = std::vector<std::uint32_t>;

inline digit_list expand(std::uint64_t n, Base base) {
  digit_list out;
  const std::uint64_t b = base.value();
  while (n != 0) {
    out.push_back(static_cast<std::uint32_t>(n % b));
    n /= b;
  }
  return out;
}

/// Inverse of expand().
inline std::uint64_t reassemble(const digit_list& digits, Base base) {
  std::uint64_t n = 0;
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) n = n * base.value() + *it;
  return n;
}

/// Most-significant-first rendering; digits above 9 use a-z, beyond that
/// a bracketed decimal.
inline std::string to_string(std::uint64_t n, Base base) {
  if (n == 0) return "0";
  const digit_list d = expand(n, base);
  std::string s;
  for (auto it = d.rbegin(); it != d.rend(); ++it) {
    if (*it < 10)
      s.push_back(static_cast<char>('0' + *it));
    else if (*it < 36)
      s.push_back(static_cast<char>('a' + (*it - 10)));
    else
      s += "[" + std::to_string(*it) + "]";
  }
  return s;
}

// ---------------------------------------------------------------------------
// Digit statistics

/// N_{j,B}(n): occurrences of one digit.
struct CountDigit {
  std::uint32_t digit;
  friend bool operator==(const CountDigit&, const CountDigit&) = default;
};

/// N_{J,B}(n) = sum over j in J of N_{j,B}(n). Digits are kept sorted and unique.
struct CountSet {
  std::vector<std::uint32_t> digits;
  friend bool operator==(const CountSet&, const CountSet&) = default;
};

/// s_B(n).
struct DigitSum {
  friend bool operator==(const DigitSum&, const DigitSum&) = default;
};

/// Number of base-B digits (0 at n = 0).
struct Length {
  friend bool operator==(const Length&, const Length&) = default;
};

using DigitStat = std::variant<CountDigit, CountSet, DigitSum, Length>;

inline CountSet make_count_set(std::vector<std::uint32_t> digits) {
  std::sort(digits.begin(), digits.end());
  digits.erase(std::unique(digits.begin(), digits.end()), digits.end());
  return CountSet{std::move(digits)};
}

/// Throws validation_error if the statistic references digits outside [0, B).
inline void validate(const DigitStat& stat, Base base) {
  if (const auto* c = std::get_if<CountDigit>(&stat)) {
    if (c->digit >= base.value())
      throw validation_error("digit " + std::to_string(c->digit) + " out of range for base " +
                             std::to_string(base.value()));
  } else if (const auto* s = std::get_if<CountSet>(&stat)) {
    if (s->digits.empty()) throw validation_error("digit set must be nonempty");
    for (auto d : s->digits)
      if (d >= base.value())
        throw validation_error("digit " + std::to_string(d) + " out of range for base " +
                               std::to_string(base.value()));
  }
}

/// Every supported statistic is additive over digits: stat(n) = sum of
/// weight(d) over the digits d of n. The table holds weight(0..B-1).
inline std::vector<std::uint32_t> digit_weights(const DigitStat& stat, Base base) {
  validate(stat, base);
  std::vector<std::uint32_t> w(base.value(), 0);
  std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, CountDigit>) {
          w[s.digit] = 1;
        } else if constexpr (std::is_same_v<S, CountSet>) {
          for (auto d : s.digits) w[d] = 1;
        } else if constexpr (std::is_same_v<S, DigitSum>) {
          for (std::uint32_t d = 0; d < base.value(); ++d) w[d] = d;
        } else {
          std::fill(w.begin(), w.end(), 1u);
        }
      },
      stat);
  return w;
}

/// Largest value a statistic can take on a 64-bit argument.
inline std::uint64_t max_stat_value(const std::vector<std::uint32_t>& weights, Base base) {
  std::uint64_t max_digits = 0;
  for (std::uint64_t n = ~std::uint64_t{0}; n != 0; n /= base.value()) ++max_digits;
  return max_digits * *std::max_element(weights.begin(), weights.end());
}

/// Digit statistic evaluated through a precomputed weight table.
class DigitStatCounter {
 public:
  DigitStatCounter(const DigitStat& stat, Base base)
      : base_(base.value()), weights_(digit_weights(stat, base)) {}

  std::uint64_t operator()(std::uint64_t n) const noexcept {
    std::uint64_t total = 0;
    while (n != 0) {
      total += weights_[n % base_];
      n /= base_;
    }
    return total;
  }

 private:
  std::uint64_t base_;
  std::vector<std::uint32_t> weights_;
};

inline std::uint64_t digit_stat(std::uint64_t n, const DigitStat& stat, Base base) {
  return DigitStatCounter(stat, base)(n);
}

/// Prouhet-Thue-Morse sign (-1)^{N_{1,2}(n)}.
constexpr int thue_morse(std::uint64_t n) noexcept { return (std::popcount(n) & 1) ? -1 : 1; }

}  // namespace digiprod
