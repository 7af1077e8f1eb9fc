#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace digiprod {

/// Base of every error raised by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of a function (x <= 0 for log-Gamma,
/// Bn+k < 1 for a log term, even base where an odd one is required, ...).
class domain_error : public error {
 public:
  using error::error;
};

/// A specification is well-formed but not admissible (bad digit, |u| > 1, ...).
class validation_error : public error {
 public:
  using error::error;
};

/// No seed n0 >= B with u(n0) != 0 in the searched window.
class no_nonzero_seed : public error {
 public:
  using error::error;
};

/// u(Bn+k) = u(n) v(k) fails at (n, k).
class hypothesis_failed : public error {
 public:
  hypothesis_failed(std::uint64_t n, std::uint32_t k)
      : error("digit-recursion hypothesis fails at n=" + std::to_string(n) +
              ", k=" + std::to_string(k)),
        n_(n),
        k_(k) {}

  std::uint64_t n() const noexcept { return n_; }
  std::uint32_t k() const noexcept { return k_; }

 private:
  std::uint64_t n_;
  std::uint32_t k_;
};

/// |G(B)| >= B: summation-by-parts convergence argument does not apply and
/// the product may diverge. Such products are never evaluated.
class convergence_hypothesis_violated : public error {
 public:
  using error::error;
};

/// A profile does not describe the sequence it is used with.
class profile_mismatch : public error {
 public:
  using error::error;
};

/// Gamma quotient parameters are not balanced (sum a != sum b).
class balance_error : public error {
 public:
  using error::error;
};

/// Text specification could not be parsed; position is a 0-based offset.
class parse_error : public error {
 public:
  parse_error(const std::string& what, std::size_t position)
      : error(what + " (at position " + std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace digiprod
