#pragma once

// Exact sparse tensors over the symbol alphabet [m], Young symmetrizers of
// tableaux acting on tensor slots, and the pairings between
// tensor powers of the symmetrized basis vectors.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lgct/numeric.hpp"

namespace lgct {

/// Coefficients indexed by length-`rank` symbol sequences. Keys are byte
/// strings of 0-based symbols, so iteration order is lexicographic.
class SparseTensor {
 public:
  using Key = std::string;

  SparseTensor(int rank, int alphabet);

  int rank() const noexcept { return rank_; }
  int alphabet() const noexcept { return alphabet_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const std::map<Key, Rational>& entries() const noexcept { return entries_; }

  void add(std::span<const int> index, const Rational& c);
  void add_key(const Key& key, const Rational& c);
  Rational coefficient(std::span<const int> index) const;

  SparseTensor& operator+=(const SparseTensor& other);
  SparseTensor& operator*=(const Rational& c);
  friend bool operator==(const SparseTensor&, const SparseTensor&) = default;

  /// Slot action: the factor in slot j moves to slot perm[j].
  SparseTensor permuted(std::span<const int> perm) const;

  static Key make_key(std::span<const int> index);
  static std::vector<int> index_of(const Key& key);

 private:
  void check_index(std::span<const int> index) const;

  int rank_;
  int alphabet_;
  std::map<Key, Rational> entries_;
};

SparseTensor tensor_product(const SparseTensor& a, const SparseTensor& b);
SparseTensor tensor_power(const SparseTensor& x, int power);

/// (1/m!) * sum over permutations of v*_1 (x) ... (x) v*_m.
SparseTensor make_v_o(int m);
/// The same symmetrized vector on the primal side.
SparseTensor make_frak_v_o(int m);

/// Sum over common index sequences of coefficient products.
Rational pairing(const SparseTensor& dual, const SparseTensor& primal);

class Tableau {
 public:
  /// Rows of 1-based labels; the shape must be weakly decreasing and the
  /// labels a bijection onto 1..k.
  explicit Tableau(std::vector<std::vector<int>> rows_one_based);
  /// Row-reading tableau of shape m^i: row p holds p*m+1 .. (p+1)*m.
  static Tableau row_reading(int rows, int cols);

  int cells() const noexcept { return cells_; }
  std::vector<int> shape() const;
  /// 0-based labels per row.
  const std::vector<std::vector<int>>& rows() const noexcept { return rows_; }
  std::vector<std::vector<int>> columns() const;
  /// Row index of each 0-based label.
  std::vector<int> row_of_label() const;

 private:
  std::vector<std::vector<int>> rows_;
  int cells_ = 0;
};

struct SignedGroupElement {
  std::vector<int> perm;
  int sign = 1;
};

struct SymmetrizerLimits {
  /// Maximum order of XRow or XCol.
  std::uint64_t group_cap = 1'000'000;
  /// Maximum number of (entry, group element) applications in one stage.
  std::uint64_t work_cap = 200'000'000;
};

std::uint64_t row_group_order(const Tableau& t);
std::uint64_t col_group_order(const Tableau& t);
/// Row-preserving permutations, all with sign +1.
std::vector<SignedGroupElement> row_group(const Tableau& t, const SymmetrizerLimits& limits = {});
/// Column-preserving permutations with their signs.
std::vector<SignedGroupElement> col_group(const Tableau& t, const SymmetrizerLimits& limits = {});

/// (sum over XCol of sign(mu) mu) (sum over XRow of sigma) applied to x.
SparseTensor apply_symmetrizer(const Tableau& t, const SparseTensor& x,
                               const SymmetrizerLimits& limits = {});

/// v_A = v_{r(1)} (x) ... (x) v_{r(k)} where r(j) is the row holding label j.
SparseTensor tableau_vector(const Tableau& t, int alphabet);

enum class Expansion { Full, LatinRestricted };

/// <v_o^{(x)i}, S(B_o(i,m)) frak_v_o^{(x)i}>.
/// Full materializes the symmetrizer (guarded by |XRow|*|XCol| <= 10^6);
/// LatinRestricted sums sign(mu) over pairs (sigma, mu) whose matrix
/// A(sigma, mu) is a Latin rectangle.
Rational prop20_lhs(int rows, int m, Expansion route = Expansion::LatinRestricted,
                    unsigned threads = 1);
/// (1/m!)^i * sum over patterns of (plus - minus)^2, from the signed tally.
Rational prop20_rhs(int rows, int m, unsigned threads = 1);

/// <v_o^{(x)m}, S(B_o(m,m)) v_{B_o}>; an integer.
/// Full builds the tensors (m <= 4); LatinRestricted sums the column signs of
/// column-tuples forming a Latin square (m <= 6).
BigInt latin_sign_sum_pairing(int m, Expansion route = Expansion::Full);

struct TranslateScanReport {
  BigInt reference;  // latin_sign_sum_pairing(m)
  std::vector<Rational> values;
  std::size_t violations = 0;
  bool pass() const { return violations == 0; }
};

/// For each slot permutation tau, checks <v_o^{(x)m}, tau . S(B_o) v_{B_o}>
/// lies in {0, +D, -D}.
TranslateScanReport translate_pairing_scan(int m, std::span<const std::vector<int>> taus);
std::vector<std::vector<int>> all_permutations(int k);
std::vector<std::vector<int>> sample_permutations(int k, std::size_t count, std::uint64_t seed);

std::string tensor_to_json(const SparseTensor& t);
std::string rational_json(const Rational& r);

}  // namespace lgct
