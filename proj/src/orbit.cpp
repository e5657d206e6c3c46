#include "lgct/orbit.hpp"

#include <bit>
#include <cmath>
#include <random>
#include <sstream>

#include <json.hpp>

namespace lgct {

namespace {

std::size_t to_index(int v) { return static_cast<std::size_t>(v); }

}  // namespace

RestrictionMatrix::RestrictionMatrix(RationalMatrix a) : a_(std::move(a)) {
  if (a_.rows() < 1 || a_.cols() < 1 || a_.cols() > a_.rows())
    throw InputError("restriction matrix must be m x i with 1 <= i <= m");
}

RestrictionMatrix RestrictionMatrix::permute_rows(std::span<const int> perm) const {
  if (static_cast<int>(perm.size()) != m()) throw InputError("row permutation has the wrong length");
  permutation_sign(perm);  // validates
  RationalMatrix out(a_.rows(), a_.cols());
  for (int p = 0; p < m(); ++p)
    for (int j = 0; j < i(); ++j) out(to_index(perm[to_index(p)]), to_index(j)) = (*this)(p, j);
  return RestrictionMatrix(std::move(out));
}

RestrictionMatrix RestrictionMatrix::scale_row(int p, const Rational& t) const {
  if (p < 0 || p >= m()) throw InputError("row index out of range");
  RationalMatrix out = a_;
  for (int j = 0; j < i(); ++j) out(to_index(p), to_index(j)) *= t;
  return RestrictionMatrix(std::move(out));
}

RestrictionMatrix RestrictionMatrix::times(const RationalMatrix& g) const {
  if (g.rows() != a_.cols() || g.cols() != a_.cols()) throw InputError("right factor must be i x i");
  return RestrictionMatrix(a_ * g);
}

Rational permanent(const RationalMatrix& m) {
  if (!m.square()) throw InputError("permanent of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  if (n > 20) throw InfeasibleError("permanent size above 20", std::ldexp(1.0, static_cast<int>(n)));

  // Clear denominators row by row; the permanent is multilinear in rows.
  std::vector<BigInt> a(n * n);
  BigInt scale = 1;
  for (std::size_t r = 0; r < n; ++r) {
    BigInt l = 1;
    for (std::size_t c = 0; c < n; ++c) l = boost::multiprecision::lcm(l, denominator(m(r, c)));
    scale *= l;
    for (std::size_t c = 0; c < n; ++c) a[r * n + c] = numerator(m(r, c)) * (l / denominator(m(r, c)));
  }

  // perm = (-1)^n sum_S (-1)^{|S|} prod_r sum_{c in S} a[r][c]
  std::vector<BigInt> sums(n, 0);
  BigInt total = 0;
  const std::uint64_t limit = std::uint64_t{1} << n;
  std::uint64_t gray = 0;
  for (std::uint64_t k = 1; k < limit; ++k) {
    const int c = std::countr_zero(k);
    const std::uint64_t bit = std::uint64_t{1} << c;
    gray ^= bit;
    if (gray & bit)
      for (std::size_t r = 0; r < n; ++r) sums[r] += a[r * n + to_index(c)];
    else
      for (std::size_t r = 0; r < n; ++r) sums[r] -= a[r * n + to_index(c)];
    BigInt prod = 1;
    for (std::size_t r = 0; r < n && prod != 0; ++r) prod *= sums[r];
    if (std::popcount(gray) % 2 == static_cast<int>(n % 2)) total += prod;
    else total -= prod;
  }
  return Rational(total, scale);
}

RationalMatrix column_repeated(const RestrictionMatrix& a, std::span<const int> d) {
  if (static_cast<int>(d.size()) != a.i()) throw InputError("content vector length differs from i");
  int total = 0;
  for (int x : d) {
    if (x < 0) throw InputError("negative content entry");
    total += x;
  }
  if (total != a.m()) throw InputError("content vector must sum to m");
  RationalMatrix out(to_index(a.m()), to_index(a.m()));
  std::size_t col = 0;
  for (int j = 0; j < a.i(); ++j)
    for (int rep = 0; rep < d[to_index(j)]; ++rep, ++col)
      for (int p = 0; p < a.m(); ++p) out(to_index(p), col) = a(p, j);
  return out;
}

HomPoly det_restrict(const RestrictionMatrix& a) {
  HomPoly f(a.i(), 0);
  f.add_term(HomPoly::Exponent(to_index(a.i()), 0), 1);
  std::vector<Rational> row(to_index(a.i()));
  for (int p = 0; p < a.m(); ++p) {
    for (int j = 0; j < a.i(); ++j) row[to_index(j)] = a(p, j);
    f = f * HomPoly::linear_form(row);
  }
  return f;
}

HomPoly perm_restrict(const RestrictionMatrix& a, BasisImage basis) {
  if (basis != BasisImage::Diagonal) throw InputError("unsupported basis image");
  // On diagonal matrices the permanent and the determinant agree.
  return det_restrict(a);
}

Rational content_coefficient(const RestrictionMatrix& a, std::span<const int> d) {
  Rational p = permanent(column_repeated(a, d));
  BigInt f = 1;
  for (int x : d) f *= factorial(static_cast<unsigned>(x));
  return p / Rational(f);
}

RestrictionMatrix witness_candidate(int m, int i, std::size_t index, std::uint64_t seed) {
  if (i < 1 || i > m) throw InputError("witness shape needs 1 <= i <= m");
  RationalMatrix a(to_index(m), to_index(i));
  for (int p = 0; p < m; ++p) {
    for (int j = 0; j < i; ++j) {
      Rational v;
      switch (index) {
        case 0: v = p == j ? 1 : 0; break;
        case 1: v = 1; break;
        case 2: v = p % i == j ? 1 : 0; break;
        case 3: v = j <= p ? 1 : 0; break;
        case 4: v = boost::multiprecision::pow(BigInt(p + 1), static_cast<unsigned>(j)); break;
        default: break;
      }
      a(to_index(p), to_index(j)) = v;
    }
  }
  if (index >= 5) {
    std::mt19937_64 rng(seed + index);
    std::uniform_int_distribution<int> num(-5, 5);
    std::uniform_int_distribution<int> den(1, 3);
    for (int p = 0; p < m; ++p)
      for (int j = 0; j < i; ++j) {
        const int n = num(rng);
        a(to_index(p), to_index(j)) = Rational(n, den(rng));
      }
  }
  return RestrictionMatrix(std::move(a));
}

std::optional<Witness> witness_search(int m, int i, const WitnessOptions& options) {
  if (m < 2 || m % 2) throw InputError("γ requires even m");
  if (i < 1 || i > m) throw InputError("witness shape needs 1 <= i <= m");
  for (std::size_t k = 0; k < options.candidates; ++k) {
    RestrictionMatrix a = witness_candidate(m, i, k, options.seed);
    Rational v = gamma_eval(m, i, det_restrict(a), options.gamma);
    if (v != 0) return Witness{std::move(a), std::move(v), k, options.seed};
  }
  return std::nullopt;
}

std::string witness_to_json(int m, int i, const Witness& w) {
  nlohmann::json rows = nlohmann::json::array();
  for (int p = 0; p < w.a.m(); ++p) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < w.a.i(); ++j)
      row.push_back(numerator_string(w.a(p, j)) + "/" + denominator_string(w.a(p, j)));
    rows.push_back(row);
  }
  nlohmann::json j = {{"m", m},
                      {"i", i},
                      {"A", rows},
                      {"gamma", {{"num", numerator_string(w.value)}, {"den", denominator_string(w.value)}}},
                      {"schedule_index", w.schedule_index},
                      {"seed", w.seed}};
  return j.dump();
}

RationalMatrix parse_matrix_csv(const std::string& text) {
  std::vector<std::vector<Rational>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<Rational> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(parse_rational(cell));
    if (!rows.empty() && row.size() != rows.front().size()) throw InputError("ragged matrix CSV");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InputError("empty matrix CSV");
  RationalMatrix out(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c) out(r, c) = rows[r][c];
  return out;
}

}  // namespace lgct
