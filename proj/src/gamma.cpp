#include "lgct/gamma.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include <json.hpp>

#include "lgct/parallel.hpp"

namespace lgct {

HomPoly::HomPoly(int vars, int degree) : vars_(vars), degree_(degree) {
  if (vars < 1) throw InputError("polynomial needs at least one variable");
  if (degree < 0) throw InputError("negative degree");
}

HomPoly HomPoly::linear_form(std::span<const Rational> coeffs) {
  HomPoly f(static_cast<int>(coeffs.size()), 1);
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    Exponent e(coeffs.size(), 0);
    e[j] = 1;
    f.add_term(e, coeffs[j]);
  }
  return f;
}

HomPoly HomPoly::power_sum(int vars, int degree) {
  HomPoly f(vars, degree);
  for (int j = 0; j < vars; ++j) {
    Exponent e(static_cast<std::size_t>(vars), 0);
    e[static_cast<std::size_t>(j)] = degree;
    f.add_term(e, 1);
  }
  return f;
}

void HomPoly::add_term(const Exponent& exponent, const Rational& c) {
  if (static_cast<int>(exponent.size()) != vars_) throw InputError("exponent length differs from variable count");
  int total = 0;
  for (int e : exponent) {
    if (e < 0) throw InputError("negative exponent");
    total += e;
  }
  if (total != degree_) throw InputError("exponent does not sum to the degree");
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(exponent, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Rational HomPoly::coefficient(const Exponent& exponent) const {
  auto it = terms_.find(exponent);
  return it == terms_.end() ? Rational(0) : it->second;
}

HomPoly& HomPoly::operator+=(const HomPoly& other) {
  if (vars_ != other.vars_ || degree_ != other.degree_) throw InputError("polynomial shape mismatch");
  for (const auto& [e, c] : other.terms_) add_term(e, c);
  return *this;
}

HomPoly& HomPoly::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [_, v] : terms_) v *= c;
  return *this;
}

HomPoly operator*(const HomPoly& a, const HomPoly& b) {
  if (a.vars_ != b.vars_) throw InputError("polynomial variable counts differ");
  HomPoly out(a.vars_, a.degree_ + b.degree_);
  HomPoly::Exponent e(static_cast<std::size_t>(a.vars_));
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t j = 0; j < e.size(); ++j) e[j] = ea[j] + eb[j];
      out.add_term(e, ca * cb);
    }
  return out;
}

HomPoly HomPoly::compose(const RationalMatrix& g) const {
  if (g.rows() != static_cast<std::size_t>(vars_) || g.cols() != static_cast<std::size_t>(vars_))
    throw InputError("substitution matrix must be vars x vars");
  // powers[j][e] = (sum_k g(j,k) x_k)^e
  std::vector<std::vector<HomPoly>> powers(static_cast<std::size_t>(vars_));
  for (int j = 0; j < vars_; ++j) {
    std::vector<Rational> row(static_cast<std::size_t>(vars_));
    for (int k = 0; k < vars_; ++k) row[static_cast<std::size_t>(k)] = g(static_cast<std::size_t>(j), static_cast<std::size_t>(k));
    HomPoly lin = linear_form(row);
    HomPoly one(vars_, 0);
    one.add_term(Exponent(static_cast<std::size_t>(vars_), 0), 1);
    powers[static_cast<std::size_t>(j)].push_back(one);
    for (int e = 1; e <= degree_; ++e) powers[static_cast<std::size_t>(j)].push_back(powers[static_cast<std::size_t>(j)].back() * lin);
  }
  HomPoly out(vars_, degree_);
  for (const auto& [e, c] : terms_) {
    HomPoly prod = powers[0][static_cast<std::size_t>(e[0])];
    for (int j = 1; j < vars_; ++j) prod = prod * powers[static_cast<std::size_t>(j)][static_cast<std::size_t>(e[static_cast<std::size_t>(j)])];
    prod *= c;
    out += prod;
  }
  return out;
}

HomPoly HomPoly::restrict_to(int vars) const {
  if (vars < 1 || vars > vars_) throw InputError("restriction variable count out of range");
  HomPoly out(vars, degree_);
  for (const auto& [e, c] : terms_) {
    if (std::any_of(e.begin() + vars, e.end(), [](int x) { return x != 0; })) continue;
    out.add_term(Exponent(e.begin(), e.begin() + vars), c);
  }
  return out;
}

Rational HomPoly::evaluate(std::span<const Rational> point) const {
  if (static_cast<int>(point.size()) != vars_) throw InputError("point dimension differs from variable count");
  Rational s = 0;
  for (const auto& [e, c] : terms_) {
    Rational t = c;
    for (int j = 0; j < vars_; ++j) t *= pow(point[static_cast<std::size_t>(j)], static_cast<unsigned>(e[static_cast<std::size_t>(j)]));
    s += t;
  }
  return s;
}

namespace {

BigInt factorial_product(const HomPoly::Exponent& d) {
  BigInt p = 1;
  for (int x : d) p *= factorial(static_cast<unsigned>(x));
  return p;
}

HomPoly::Exponent content_of(std::span<const int> sequence, int vars) {
  HomPoly::Exponent d(static_cast<std::size_t>(vars), 0);
  for (int l : sequence) {
    if (l < 0 || l >= vars) throw InputError("sequence symbol out of range");
    ++d[static_cast<std::size_t>(l)];
  }
  return d;
}

void require_even(int m) {
  if (m < 2 || m % 2 != 0) throw InputError("γ requires even m");
}

// All sequences with the given content, in lexicographic order.
template <class Fn>
void for_each_sequence_with_content(const HomPoly::Exponent& d, Fn&& fn) {
  std::vector<int> seq;
  for (std::size_t j = 0; j < d.size(); ++j) seq.insert(seq.end(), static_cast<std::size_t>(d[j]), static_cast<int>(j));
  do fn(seq);
  while (std::next_permutation(seq.begin(), seq.end()));
}

// Polarization of det^power at a multiset of elementary matrices E_{code}
// (code = row * size + col), via inclusion-exclusion over multiplicities.
Rational elementary_polarization(int size, int power, const std::vector<int>& sorted_codes) {
  std::vector<int> codes;
  std::vector<int> counts;
  for (int c : sorted_codes) {
    if (!codes.empty() && codes.back() == c) {
      ++counts.back();
    } else {
      codes.push_back(c);
      counts.push_back(1);
    }
  }
  const int k = static_cast<int>(sorted_codes.size());
  const std::size_t n = static_cast<std::size_t>(size);
  const std::uint64_t full = (std::uint64_t{1} << size) - 1;

  // Every row and column must be hit for a nonzero determinant.
  std::uint64_t rows_hit = 0, cols_hit = 0;
  for (int c : codes) {
    rows_hit |= std::uint64_t{1} << (c / size);
    cols_hit |= std::uint64_t{1} << (c % size);
  }
  if (rows_hit != full || cols_hit != full) return 0;

  BigInt sum = 0;
  std::vector<int> s(codes.size(), 0);
  std::vector<__int128> mat(n * n);
  for (;;) {
    // advance the mixed-radix counter; the all-zero vector contributes 0
    std::size_t pos = 0;
    while (pos < s.size() && s[pos] == counts[pos]) s[pos++] = 0;
    if (pos == s.size()) break;
    ++s[pos];

    std::uint64_t rh = 0, ch = 0;
    int chosen = 0;
    std::fill(mat.begin(), mat.end(), 0);
    for (std::size_t j = 0; j < codes.size(); ++j) {
      if (!s[j]) continue;
      mat[static_cast<std::size_t>(codes[j])] += s[j];
      rh |= std::uint64_t{1} << (codes[j] / size);
      ch |= std::uint64_t{1} << (codes[j] % size);
      chosen += s[j];
    }
    if (rh != full || ch != full) continue;
    const __int128 det = determinant_small(mat, n);
    if (det == 0) continue;
    BigInt term = boost::multiprecision::pow(to_bigint(det), static_cast<unsigned>(power));
    for (std::size_t j = 0; j < codes.size(); ++j)
      if (s[j] != counts[j]) term *= binomial(static_cast<unsigned>(counts[j]), static_cast<unsigned>(s[j]));
    if ((k - chosen) % 2) sum -= term;
    else sum += term;
  }
  return Rational(sum, factorial(static_cast<unsigned>(k)));
}

struct MergedImage {
  std::vector<std::vector<int>> codes;  // sorted elementary-matrix codes per term
  std::vector<Rational> coeffs;
};

// Image terms keyed by the multiset of elementary matrices; the polarization
// is symmetric, so terms that differ only in order are merged.
MergedImage merged_image(const HomPoly& f) {
  const int i = f.vars();
  const int m = f.degree();
  const BigInt m_fact = factorial(static_cast<unsigned>(m));
  std::map<std::vector<int>, Rational> merged;
  std::vector<int> codes(static_cast<std::size_t>(m / 2));
  for (const auto& [d, a] : f.terms()) {
    const Rational c = a * Rational(factorial_product(d), m_fact);
    for_each_sequence_with_content(d, [&](const std::vector<int>& seq) {
      for (int t = 0; t < m / 2; ++t)
        codes[static_cast<std::size_t>(t)] = seq[static_cast<std::size_t>(2 * t)] * i + seq[static_cast<std::size_t>(2 * t + 1)];
      std::vector<int> key = codes;
      std::sort(key.begin(), key.end());
      merged[key] += c;
    });
  }
  MergedImage out;
  for (auto& [k, c] : merged) {
    if (c == 0) continue;
    out.codes.push_back(k);
    out.coeffs.push_back(c);
  }
  return out;
}

double cost_estimate(std::size_t terms, int i, int m) {
  // C(T + i - 1, i) * 2^{i m / 2}
  double c = 1;
  for (int j = 1; j <= i; ++j) c = c * static_cast<double>(terms + static_cast<std::size_t>(j) - 1) / j;
  return c * std::ldexp(1.0, i * m / 2);
}

}  // namespace

Rational polarized_coefficient(const HomPoly& f, std::span<const int> sequence) {
  if (static_cast<int>(sequence.size()) != f.degree()) throw InputError("sequence length differs from the degree");
  const auto d = content_of(sequence, f.vars());
  return f.coefficient(d) * Rational(factorial_product(d), factorial(static_cast<unsigned>(f.degree())));
}

std::vector<MatrixTensorTerm> theta_image(const HomPoly& f) {
  require_even(f.degree());
  const int i = f.vars();
  const int m = f.degree();
  std::vector<MatrixTensorTerm> out;
  std::vector<int> seq(static_cast<std::size_t>(m), 0);
  for (;;) {
    Rational c = polarized_coefficient(f, seq);
    if (c != 0) {
      MatrixTensorTerm term{c, {}};
      for (int t = 0; t < m / 2; ++t) {
        RationalMatrix e(static_cast<std::size_t>(i), static_cast<std::size_t>(i));
        e(static_cast<std::size_t>(seq[static_cast<std::size_t>(2 * t)]), static_cast<std::size_t>(seq[static_cast<std::size_t>(2 * t + 1)])) = 1;
        term.matrices.push_back(std::move(e));
      }
      out.push_back(std::move(term));
    }
    int pos = m - 1;
    while (pos >= 0 && seq[static_cast<std::size_t>(pos)] == i - 1) seq[static_cast<std::size_t>(pos--)] = 0;
    if (pos < 0) break;
    ++seq[static_cast<std::size_t>(pos)];
  }
  return out;
}

Rational polarized_det_power(int size, int power, std::span<const RationalMatrix> matrices) {
  if (size < 1 || power < 1) throw InputError("matrix size and power must be positive");
  if (static_cast<int>(matrices.size()) != size * power)
    throw InputError("polarization needs exactly size * power matrices");
  for (const auto& x : matrices)
    if (x.rows() != static_cast<std::size_t>(size) || x.cols() != static_cast<std::size_t>(size))
      throw InputError("polarization argument has the wrong size");

  std::vector<RationalMatrix> distinct;
  std::vector<int> counts;
  for (const auto& x : matrices) {
    auto it = std::find(distinct.begin(), distinct.end(), x);
    if (it == distinct.end()) {
      distinct.push_back(x);
      counts.push_back(1);
    } else {
      ++counts[static_cast<std::size_t>(it - distinct.begin())];
    }
  }

  const int k = static_cast<int>(matrices.size());
  Rational sum = 0;
  std::vector<int> s(distinct.size(), 0);
  for (;;) {
    std::size_t pos = 0;
    while (pos < s.size() && s[pos] == counts[pos]) s[pos++] = 0;
    if (pos == s.size()) break;
    ++s[pos];

    RationalMatrix acc(static_cast<std::size_t>(size), static_cast<std::size_t>(size));
    int chosen = 0;
    BigInt weight = 1;
    for (std::size_t j = 0; j < distinct.size(); ++j) {
      if (s[j]) {
        RationalMatrix scaled = distinct[j];
        scaled *= Rational(s[j]);
        acc += scaled;
      }
      chosen += s[j];
      weight *= binomial(static_cast<unsigned>(counts[j]), static_cast<unsigned>(s[j]));
    }
    const Rational det = determinant(acc);
    if (det == 0) continue;
    Rational term = pow(det, static_cast<unsigned>(power)) * Rational(weight);
    if ((k - chosen) % 2) sum -= term;
    else sum += term;
  }
  return sum / Rational(factorial(static_cast<unsigned>(k)));
}

double gamma_cost_estimate(int m, int i, const HomPoly& f) {
  require_even(m);
  if (f.degree() != m) throw InputError("polynomial degree differs from m");
  if (i < 1 || i > f.vars()) throw InputError("i out of range");
  return cost_estimate(merged_image(f.restrict_to(i)).codes.size(), i, m);
}

Rational gamma_eval(int m, int i, const HomPoly& f, const GammaOptions& options) {
  require_even(m);
  if (f.degree() != m) throw InputError("polynomial degree differs from m");
  if (i < 1 || i > f.vars()) throw InputError("i out of range");
  if (i > 8) throw InfeasibleError("determinant size above 8 is not supported", 0);

  const MergedImage image = merged_image(f.restrict_to(i));
  const std::size_t terms = image.codes.size();
  if (terms == 0) return 0;
  const double estimate = cost_estimate(terms, i, m);
  if (estimate > options.budget)
    throw InfeasibleError("gamma evaluation exceeds the determinant budget", estimate);

  const int power = m / 2;
  const BigInt i_fact = factorial(static_cast<unsigned>(i));
  const unsigned workers = std::max(1u, options.threads);
  std::vector<Rational> partial(workers, Rational(0));
  std::vector<std::map<std::vector<int>, Rational>> caches(workers);

  // Multisets t_1 <= ... <= t_i of image terms, weighted by i!/prod(mult!).
  parallel_for(terms, workers, [&](std::size_t first, unsigned w) {
    std::vector<std::size_t> chosen{first};
    auto& cache = caches[w];
    std::function<void()> rec = [&] {
      if (static_cast<int>(chosen.size()) == i) {
        std::vector<int> codes;
        Rational coeff = 1;
        BigInt denom = 1;
        std::size_t run = 0;
        for (std::size_t a = 0; a < chosen.size(); ++a) {
          const std::size_t t = chosen[a];
          codes.insert(codes.end(), image.codes[t].begin(), image.codes[t].end());
          coeff *= image.coeffs[t];
          run = (a > 0 && chosen[a - 1] == t) ? run + 1 : 1;
          denom *= run;
        }
        std::sort(codes.begin(), codes.end());
        auto it = cache.find(codes);
        if (it == cache.end()) it = cache.emplace(codes, elementary_polarization(i, power, codes)).first;
        if (it->second != 0) partial[w] += coeff * Rational(i_fact, denom) * it->second;
        return;
      }
      for (std::size_t t = chosen.back(); t < terms; ++t) {
        chosen.push_back(t);
        rec();
        chosen.pop_back();
      }
    };
    rec();
  });

  Rational total = 0;
  for (const auto& p : partial) total += p;
  return total;
}

Rational gamma_power_sum_closed_form(int m, int i) {
  require_even(m);
  const unsigned half = static_cast<unsigned>(m / 2);
  return Rational(factorial(static_cast<unsigned>(i)) *
                      boost::multiprecision::pow(factorial(half), static_cast<unsigned>(i)),
                  factorial(static_cast<unsigned>(i) * half));
}

PowerSumCheck gamma_power_sum_check(int m, int i, const GammaOptions& options) {
  require_even(m);
  if (i < 1 || i > m) throw InputError("i must be in [1, m]");
  return {gamma_eval(m, i, HomPoly::power_sum(i, m), options), gamma_power_sum_closed_form(m, i)};
}

HomPoly hompoly_from_json(const std::string& text) {
  try {
    auto j = nlohmann::json::parse(text);
    HomPoly f(j.at("vars").get<int>(), j.at("degree").get<int>());
    for (const auto& t : j.at("terms")) {
      BigInt num = parse_bigint(t.at("num").get<std::string>());
      BigInt den = t.contains("den") ? parse_bigint(t.at("den").get<std::string>()) : BigInt(1);
      if (den == 0) throw InputError("zero denominator in polynomial literal");
      f.add_term(t.at("exp").get<std::vector<int>>(), Rational(num, den));
    }
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed polynomial JSON: ") + e.what());
  }
}

std::string hompoly_to_json(const HomPoly& f) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [e, c] : f.terms())
    terms.push_back({{"exp", e}, {"num", numerator_string(c)}, {"den", denominator_string(c)}});
  return nlohmann::json{{"vars", f.vars()}, {"degree", f.degree()}, {"terms", terms}}.dump();
}

}  // namespace lgct
