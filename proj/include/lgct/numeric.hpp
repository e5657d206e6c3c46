#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

namespace lgct {

using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

// Error categories. The CLI maps them onto exit codes 3, 2 and 1.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(const std::string& what, double estimate)
      : std::runtime_error(what), estimate_(estimate) {}
  double estimate() const noexcept { return estimate_; }

 private:
  double estimate_;
};

class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

BigInt factorial(unsigned n);
BigInt binomial(unsigned n, unsigned k);
Rational pow(const Rational& base, unsigned exponent);

std::string to_string(const BigInt& v);
/// "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& v);
std::string numerator_string(const Rational& v);
std::string denominator_string(const Rational& v);

/// Accepts "p", "-p", "p/q"; surrounding whitespace is ignored.
Rational parse_rational(std::string_view text);
BigInt parse_bigint(std::string_view text);

/// Sign of a permutation of {0..n-1}; +1 or -1.
int permutation_sign(std::span<const int> perm);

/// Dense row-major matrix of exact rationals.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}
  RationalMatrix(std::initializer_list<std::initializer_list<Rational>> init);

  static RationalMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  RationalMatrix& operator+=(const RationalMatrix& other);
  RationalMatrix& operator*=(const Rational& scalar);
  friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);
  friend bool operator==(const RationalMatrix&, const RationalMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// Exact determinant: denominators are cleared row by row and Bareiss
/// fraction-free elimination runs over the integers.
Rational determinant(const RationalMatrix& m);

/// Bareiss elimination on a small integer matrix (row-major, n*n entries).
/// Intermediate minors must fit in 128 bits; callers keep entries small.
__int128 determinant_small(std::vector<__int128> a, std::size_t n);

BigInt to_bigint(__int128 v);

}  // namespace lgct
