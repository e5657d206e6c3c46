#pragma once

// Points of the determinant and permanent orbit closures restricted to the
// diagonal span E_i, and the search for a point where gamma does not vanish.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lgct/gamma.hpp"
#include "lgct/numeric.hpp"

namespace lgct {

/// m x i matrix with 1 <= i <= m; column j is the image of e_j.
class RestrictionMatrix {
 public:
  explicit RestrictionMatrix(RationalMatrix a);

  int m() const noexcept { return static_cast<int>(a_.rows()); }
  int i() const noexcept { return static_cast<int>(a_.cols()); }
  const RationalMatrix& matrix() const noexcept { return a_; }
  const Rational& operator()(int p, int j) const {
    return a_(static_cast<std::size_t>(p), static_cast<std::size_t>(j));
  }

  /// sigma . A: row p moves to row perm[p].
  RestrictionMatrix permute_rows(std::span<const int> perm) const;
  RestrictionMatrix scale_row(int p, const Rational& t) const;
  /// A * g for an i x i matrix g.
  RestrictionMatrix times(const RationalMatrix& g) const;

  friend bool operator==(const RestrictionMatrix&, const RestrictionMatrix&) = default;

 private:
  RationalMatrix a_;
};

/// Ryser inclusion-exclusion with Gray-code column updates; n <= 20.
Rational permanent(const RationalMatrix& m);

/// m x m matrix repeating column j of A exactly d[j] times.
RationalMatrix column_repeated(const RestrictionMatrix& a, std::span<const int> d);

/// prod_p (sum_j lambda_j a_p^j) as a polynomial in i variables.
HomPoly det_restrict(const RestrictionMatrix& a);

enum class BasisImage { Diagonal, General };

/// The permanent restricted to E_i. Only the diagonal basis is supported,
/// where it coincides with det_restrict.
HomPoly perm_restrict(const RestrictionMatrix& a, BasisImage basis = BasisImage::Diagonal);

/// Perm A^{(d)} / prod d_j!.
Rational content_coefficient(const RestrictionMatrix& a, std::span<const int> d);

struct WitnessOptions {
  std::size_t candidates = 64;
  std::uint64_t seed = 0;
  GammaOptions gamma;
};

struct Witness {
  RestrictionMatrix a;
  Rational value;
  std::size_t schedule_index;
  std::uint64_t seed;
};

/// Candidate number `index` of the search schedule: identity-padded, all
/// ones, stacked identities, lower-triangular ones, (p+1)^j, then seeded
/// random rationals.
RestrictionMatrix witness_candidate(int m, int i, std::size_t index, std::uint64_t seed);

/// First candidate with gamma_{m,i}(det_restrict(A)) != 0, if any.
std::optional<Witness> witness_search(int m, int i, const WitnessOptions& options = {});

std::string witness_to_json(int m, int i, const Witness& w);

/// Rows on separate lines, entries separated by commas; entries "p" or "p/q".
RationalMatrix parse_matrix_csv(const std::string& text);

}  // namespace lgct
