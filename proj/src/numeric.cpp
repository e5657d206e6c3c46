#include "lgct/numeric.hpp"

#include <algorithm>
#include <cctype>
#include <utility>

namespace lgct {

BigInt factorial(unsigned n) {
  BigInt r = 1;
  for (unsigned k = 2; k <= n; ++k) r *= k;
  return r;
}

BigInt binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (unsigned j = 1; j <= k; ++j) {
    r *= n - k + j;
    r /= j;
  }
  return r;
}

Rational pow(const Rational& base, unsigned exponent) {
  Rational r = 1;
  Rational b = base;
  while (exponent) {
    if (exponent & 1u) r *= b;
    exponent >>= 1;
    if (exponent) b *= b;
  }
  return r;
}

std::string to_string(const BigInt& v) { return v.str(); }

std::string to_string(const Rational& v) {
  const BigInt den = boost::multiprecision::denominator(v);
  if (den == 1) return numerator_string(v);
  return numerator_string(v) + "/" + den.str();
}

std::string numerator_string(const Rational& v) {
  return BigInt(boost::multiprecision::numerator(v)).str();
}

std::string denominator_string(const Rational& v) {
  return BigInt(boost::multiprecision::denominator(v)).str();
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_integer_literal(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isdigit(static_cast<unsigned char>(c)) != 0;
  });
}

}  // namespace

BigInt parse_bigint(std::string_view text) {
  auto s = trim(text);
  if (!is_integer_literal(s)) throw InputError("not an integer: '" + std::string(text) + "'");
  if (s.front() == '+') s.remove_prefix(1);
  return BigInt(std::string(s));
}

Rational parse_rational(std::string_view text) {
  auto s = trim(text);
  auto slash = s.find('/');
  if (slash == std::string_view::npos) return Rational(parse_bigint(s));
  BigInt num = parse_bigint(s.substr(0, slash));
  BigInt den = parse_bigint(s.substr(slash + 1));
  if (den == 0) throw InputError("zero denominator: '" + std::string(text) + "'");
  return Rational(num, den);
}

int permutation_sign(std::span<const int> perm) {
  std::vector<bool> seen(perm.size(), false);
  for (int v : perm) {
    if (v < 0 || static_cast<std::size_t>(v) >= perm.size() || seen[static_cast<std::size_t>(v)])
      throw InputError("not a permutation");
    seen[static_cast<std::size_t>(v)] = true;
  }
  std::fill(seen.begin(), seen.end(), false);
  int sign = 1;
  for (std::size_t s = 0; s < perm.size(); ++s) {
    if (seen[s]) continue;
    std::size_t len = 0;
    for (std::size_t j = s; !seen[j]; j = static_cast<std::size_t>(perm[j])) {
      seen[j] = true;
      ++len;
    }
    if (len % 2 == 0) sign = -sign;
  }
  return sign;
}

RationalMatrix::RationalMatrix(std::initializer_list<std::initializer_list<Rational>> init)
    : rows_(init.size()), cols_(init.size() ? init.begin()->size() : 0) {
  data_.reserve(rows_ * cols_);
  for (const auto& row : init) {
    if (row.size() != cols_) throw InputError("ragged matrix literal");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

RationalMatrix RationalMatrix::identity(std::size_t n) {
  RationalMatrix m(n, n);
  for (std::size_t k = 0; k < n; ++k) m(k, k) = 1;
  return m;
}

RationalMatrix& RationalMatrix::operator+=(const RationalMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw InputError("matrix size mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

RationalMatrix& RationalMatrix::operator*=(const Rational& scalar) {
  for (auto& x : data_) x *= scalar;
  return *this;
}

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.cols_ != b.rows_) throw InputError("matrix size mismatch");
  RationalMatrix c(a.rows_, b.cols_);
  for (std::size_t r = 0; r < a.rows_; ++r)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      if (a(r, k) == 0) continue;
      for (std::size_t col = 0; col < b.cols_; ++col) c(r, col) += a(r, k) * b(k, col);
    }
  return c;
}

Rational determinant(const RationalMatrix& m) {
  if (!m.square()) throw InputError("determinant of non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;

  // Scale each row to integers; det picks up the product of the row scales.
  std::vector<BigInt> a(n * n);
  BigInt scale = 1;
  for (std::size_t r = 0; r < n; ++r) {
    BigInt l = 1;
    for (std::size_t c = 0; c < n; ++c)
      l = boost::multiprecision::lcm(l, BigInt(boost::multiprecision::denominator(m(r, c))));
    for (std::size_t c = 0; c < n; ++c) {
      const Rational& x = m(r, c);
      a[r * n + c] = BigInt(boost::multiprecision::numerator(x)) *
                     (l / BigInt(boost::multiprecision::denominator(x)));
    }
    scale *= l;
  }

  int sign = 1;
  BigInt prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k * n + k] == 0) {
      std::size_t p = k + 1;
      while (p < n && a[p * n + k] == 0) ++p;
      if (p == n) return 0;
      for (std::size_t c = 0; c < n; ++c) std::swap(a[k * n + c], a[p * n + c]);
      sign = -sign;
    }
    for (std::size_t r = k + 1; r < n; ++r) {
      for (std::size_t c = k + 1; c < n; ++c) {
        a[r * n + c] = (a[r * n + c] * a[k * n + k] - a[r * n + k] * a[k * n + c]) / prev;
      }
      a[r * n + k] = 0;
    }
    prev = a[k * n + k];
  }
  Rational det(a[n * n - 1], scale);
  return sign < 0 ? Rational(-det) : det;
}

__int128 determinant_small(std::vector<__int128> a, std::size_t n) {
  if (n == 0) return 1;
  int sign = 1;
  __int128 prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k * n + k] == 0) {
      std::size_t p = k + 1;
      while (p < n && a[p * n + k] == 0) ++p;
      if (p == n) return 0;
      for (std::size_t c = 0; c < n; ++c) std::swap(a[k * n + c], a[p * n + c]);
      sign = -sign;
    }
    for (std::size_t r = k + 1; r < n; ++r) {
      for (std::size_t c = k + 1; c < n; ++c)
        a[r * n + c] = (a[r * n + c] * a[k * n + k] - a[r * n + k] * a[k * n + c]) / prev;
      a[r * n + k] = 0;
    }
    prev = a[k * n + k];
  }
  return sign * a[n * n - 1];
}

BigInt to_bigint(__int128 v) {
  const bool neg = v < 0;
  unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  BigInt hi = static_cast<std::uint64_t>(u >> 64);
  BigInt r = (hi << 64) + BigInt(static_cast<std::uint64_t>(u));
  return neg ? BigInt(-r) : r;
}

}  // namespace lgct
