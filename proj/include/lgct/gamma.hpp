#pragma once

// The SL-invariant gamma_{m,i} on homogeneous degree-m forms in i variables.
// A form f is polarized into a symmetric m-linear functional, read as an
// element of the m/2-fold tensor power of i x i matrices, and the i-th
// tensor power of that element is contracted with the full polarization of
// A -> det(A)^{m/2}.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "lgct/numeric.hpp"

namespace lgct {

/// Homogeneous polynomial: exponent vectors (summing to the degree) mapped to
/// nonzero exact coefficients.
class HomPoly {
 public:
  using Exponent = std::vector<int>;

  HomPoly(int vars, int degree);
  /// The linear form sum_j coeffs[j] * x_j.
  static HomPoly linear_form(std::span<const Rational> coeffs);
  /// sum_j x_j^degree over `vars` variables.
  static HomPoly power_sum(int vars, int degree);

  int vars() const noexcept { return vars_; }
  int degree() const noexcept { return degree_; }
  const std::map<Exponent, Rational>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  void add_term(const Exponent& exponent, const Rational& c);
  Rational coefficient(const Exponent& exponent) const;

  HomPoly& operator+=(const HomPoly& other);
  HomPoly& operator*=(const Rational& c);
  friend HomPoly operator*(const HomPoly& a, const HomPoly& b);
  friend bool operator==(const HomPoly&, const HomPoly&) = default;

  /// x -> f(g x) for a vars x vars matrix g.
  HomPoly compose(const RationalMatrix& g) const;
  /// Sets the variables beyond the first `vars` to zero.
  HomPoly restrict_to(int vars) const;
  Rational evaluate(std::span<const Rational> point) const;

 private:
  int vars_;
  int degree_;
  std::map<Exponent, Rational> terms_;
};

/// coefficient * E_{matrices[0]} (x) ... (x) E_{matrices[m'-1]}
struct MatrixTensorTerm {
  Rational coefficient;
  std::vector<RationalMatrix> matrices;
};

/// Value of the polarized form on e_{l_1} (x) ... (x) e_{l_m} (0-based l):
/// a_d * prod(d_j!) / m! where d is the content of the sequence.
Rational polarized_coefficient(const HomPoly& f, std::span<const int> sequence);

/// Image of f as a sum of tensor products of elementary matrices, one term
/// per index sequence (j_1, k_1, ..., j_{m'}, k_{m'}) in lexicographic order.
std::vector<MatrixTensorTerm> theta_image(const HomPoly& f);

/// Full polarization of A -> det(A)^{m'} at the given i*m' matrices:
/// (1/(im')!) sum over subsets S of (-1)^{im'-|S|} det(sum_{k in S} X_k)^{m'}.
/// Repeated arguments are collapsed into multiplicities.
Rational polarized_det_power(int size, int power, std::span<const RationalMatrix> matrices);

struct GammaOptions {
  /// Refuse evaluations whose determinant-count estimate exceeds this.
  double budget = 1e9;
  unsigned threads = 1;
};

/// Cost estimate used by the feasibility guard:
/// C(T + i - 1, i) * 2^{i m'} with T the number of merged image terms.
double gamma_cost_estimate(int m, int i, const HomPoly& f);

/// gamma_{m,i} evaluated at f^{(x)i}; f is first restricted to i variables.
Rational gamma_eval(int m, int i, const HomPoly& f, const GammaOptions& options = {});

struct PowerSumCheck {
  Rational computed;
  Rational closed_form;
  bool equal() const { return computed == closed_form; }
};

/// gamma at f = sum_j x_j^m beside i! (m'!)^i / (i m')!.
PowerSumCheck gamma_power_sum_check(int m, int i, const GammaOptions& options = {});
Rational gamma_power_sum_closed_form(int m, int i);

/// {"vars":i,"degree":m,"terms":[{"exp":[...],"num":"...","den":"..."}]}
HomPoly hompoly_from_json(const std::string& text);
std::string hompoly_to_json(const HomPoly& f);

}  // namespace lgct
