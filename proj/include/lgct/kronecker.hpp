#pragma once

// Characters of the symmetric group (Murnaghan-Nakayama) and the Kronecker
// and symmetric Kronecker coefficients computed from them.

#include <cstdint>
#include <string>
#include <vector>

#include "lgct/numeric.hpp"

namespace lgct {

/// Weakly decreasing positive parts. Cycle types use the same encoding.
using Partition = std::vector<int>;

void validate_partition(const Partition& p);
int partition_size(const Partition& p);
/// All partitions of n in reverse lexicographic order, (n) first.
std::vector<Partition> partitions_of(int n);
/// Partitions of n with at most `max_parts` parts.
std::vector<Partition> partitions_of(int n, int max_parts);

/// chi_lambda at the class of cycle type mu.
std::int64_t mn_character(const Partition& lambda, const Partition& mu);

/// Cycle type of g^2 given the cycle type of g.
Partition square_cycle_type(const Partition& mu);
/// Number of permutations with cycle type mu.
BigInt class_size(const Partition& mu);

class CharacterTable {
 public:
  explicit CharacterTable(int n);

  int n() const noexcept { return n_; }
  /// Indexes both rows (irreducibles) and columns (classes).
  const std::vector<Partition>& partitions() const noexcept { return parts_; }
  std::int64_t value(std::size_t lambda, std::size_t mu) const { return values_[lambda][mu]; }
  const BigInt& class_size(std::size_t mu) const { return sizes_[mu]; }
  std::int64_t dimension(std::size_t lambda) const;
  std::size_t index_of(const Partition& p) const;
  /// Index of the class of g^2 for g in class mu.
  std::size_t square_class(std::size_t mu) const { return square_[mu]; }

  /// sum_mu |C_mu| chi_l(mu) chi_k(mu) = n! [l == k]
  bool row_orthogonality() const;
  /// sum_l chi_l(mu) chi_l(nu) = (n!/|C_mu|) [mu == nu]
  bool column_orthogonality() const;

 private:
  int n_;
  std::vector<Partition> parts_;
  std::vector<std::vector<std::int64_t>> values_;
  std::vector<BigInt> sizes_;
  std::vector<std::size_t> square_;
};

/// Shared table for n, built once.
const CharacterTable& character_table(int n);

/// g_{lambda,mu,nu}; throws InternalError if the class sum is not a
/// nonnegative integer.
BigInt kronecker_coeff(const Partition& lambda, const Partition& mu, const Partition& nu);
/// Multiplicity of W_lambda in S^2(W_mu).
BigInt symmetric_kronecker_coeff(const Partition& lambda, const Partition& mu);
/// Multiplicity of W_lambda in the exterior square of W_mu.
BigInt alternating_kronecker_coeff(const Partition& lambda, const Partition& mu);

struct Corollary35Entry {
  Partition lambda_bar;
  Partition m_lambda_bar;
  BigInt sk;
  bool positive() const { return sk > 0; }
};

struct Corollary35Report {
  int m = 0;
  int d = 0;
  std::vector<Corollary35Entry> entries;
  bool all_positive() const;
};

/// sk_{m lambda_bar, d delta_m, d delta_m} for every partition lambda_bar of
/// d with at most m parts; n = d*m must not exceed max_n.
Corollary35Report check_corollary35(int m, int d, int max_n = 12);
std::string corollary35_to_json(const Corollary35Report& report);

}  // namespace lgct
