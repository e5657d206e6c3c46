#include "lgct/tensor.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>

#include <json.hpp>

#include "lgct/latin.hpp"
#include "lgct/parallel.hpp"

namespace lgct {

SparseTensor::SparseTensor(int rank, int alphabet) : rank_(rank), alphabet_(alphabet) {
  if (rank < 0) throw InputError("negative tensor rank");
  if (alphabet < 1 || alphabet > 255) throw InputError("tensor alphabet must be in [1, 255]");
}

void SparseTensor::check_index(std::span<const int> index) const {
  if (static_cast<int>(index.size()) != rank_) throw InputError("index length differs from tensor rank");
  for (int a : index)
    if (a < 0 || a >= alphabet_) throw InputError("index symbol out of range");
}

SparseTensor::Key SparseTensor::make_key(std::span<const int> index) {
  Key k(index.size(), '\0');
  for (std::size_t j = 0; j < index.size(); ++j) k[j] = static_cast<char>(index[j]);
  return k;
}

std::vector<int> SparseTensor::index_of(const Key& key) {
  std::vector<int> idx(key.size());
  for (std::size_t j = 0; j < key.size(); ++j) idx[j] = static_cast<unsigned char>(key[j]);
  return idx;
}

void SparseTensor::add_key(const Key& key, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = entries_.try_emplace(key, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) entries_.erase(it);
  }
}

void SparseTensor::add(std::span<const int> index, const Rational& c) {
  check_index(index);
  add_key(make_key(index), c);
}

Rational SparseTensor::coefficient(std::span<const int> index) const {
  check_index(index);
  auto it = entries_.find(make_key(index));
  return it == entries_.end() ? Rational(0) : it->second;
}

SparseTensor& SparseTensor::operator+=(const SparseTensor& other) {
  if (rank_ != other.rank_ || alphabet_ != other.alphabet_) throw InputError("tensor shape mismatch");
  for (const auto& [k, c] : other.entries_) add_key(k, c);
  return *this;
}

SparseTensor& SparseTensor::operator*=(const Rational& c) {
  if (c == 0) {
    entries_.clear();
    return *this;
  }
  for (auto& [_, v] : entries_) v *= c;
  return *this;
}

SparseTensor SparseTensor::permuted(std::span<const int> perm) const {
  if (static_cast<int>(perm.size()) != rank_) throw InputError("permutation length differs from tensor rank");
  SparseTensor out(rank_, alphabet_);
  Key moved(static_cast<std::size_t>(rank_), '\0');
  for (const auto& [k, c] : entries_) {
    for (int j = 0; j < rank_; ++j) moved[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])] = k[static_cast<std::size_t>(j)];
    out.add_key(moved, c);
  }
  return out;
}

SparseTensor tensor_product(const SparseTensor& a, const SparseTensor& b) {
  if (a.alphabet() != b.alphabet()) throw InputError("tensor alphabets differ");
  SparseTensor out(a.rank() + b.rank(), a.alphabet());
  for (const auto& [ka, ca] : a.entries())
    for (const auto& [kb, cb] : b.entries()) out.add_key(ka + kb, ca * cb);
  return out;
}

SparseTensor tensor_power(const SparseTensor& x, int power) {
  if (power < 0) throw InputError("negative tensor power");
  SparseTensor out(0, x.alphabet());
  out.add_key(SparseTensor::Key{}, 1);
  for (int k = 0; k < power; ++k) out = tensor_product(out, x);
  return out;
}

namespace {

SparseTensor symmetrized_basis(int m) {
  if (m < 1) throw InputError("alphabet size must be positive");
  SparseTensor t(m, m);
  const Rational c(BigInt(1), factorial(static_cast<unsigned>(m)));
  std::vector<int> p(static_cast<std::size_t>(m));
  std::iota(p.begin(), p.end(), 0);
  do t.add(p, c);
  while (std::next_permutation(p.begin(), p.end()));
  return t;
}

}  // namespace

SparseTensor make_v_o(int m) { return symmetrized_basis(m); }
SparseTensor make_frak_v_o(int m) { return symmetrized_basis(m); }

Rational pairing(const SparseTensor& dual, const SparseTensor& primal) {
  if (dual.rank() != primal.rank() || dual.alphabet() != primal.alphabet())
    throw InputError("pairing requires equal ranks and alphabets");
  const auto& small = dual.size() <= primal.size() ? dual.entries() : primal.entries();
  const auto& large = dual.size() <= primal.size() ? primal.entries() : dual.entries();
  Rational s = 0;
  for (const auto& [k, c] : small) {
    auto it = large.find(k);
    if (it != large.end()) s += c * it->second;
  }
  return s;
}

Tableau::Tableau(std::vector<std::vector<int>> rows_one_based) {
  for (std::size_t r = 0; r < rows_one_based.size(); ++r) {
    if (rows_one_based[r].empty()) throw InputError("tableau rows must be nonempty");
    if (r > 0 && rows_one_based[r].size() > rows_one_based[r - 1].size())
      throw InputError("tableau shape must be weakly decreasing");
    cells_ += static_cast<int>(rows_one_based[r].size());
  }
  std::vector<bool> seen(static_cast<std::size_t>(cells_), false);
  for (auto& row : rows_one_based) {
    std::vector<int> zero_based;
    for (int label : row) {
      if (label < 1 || label > cells_ || seen[static_cast<std::size_t>(label - 1)])
        throw InputError("tableau filling must be a bijection onto 1..k");
      seen[static_cast<std::size_t>(label - 1)] = true;
      zero_based.push_back(label - 1);
    }
    rows_.push_back(std::move(zero_based));
  }
}

Tableau Tableau::row_reading(int rows, int cols) {
  if (rows < 1 || cols < 1) throw InputError("tableau dimensions must be positive");
  std::vector<std::vector<int>> r(static_cast<std::size_t>(rows));
  for (int p = 0; p < rows; ++p)
    for (int q = 0; q < cols; ++q) r[static_cast<std::size_t>(p)].push_back(p * cols + q + 1);
  return Tableau(std::move(r));
}

std::vector<int> Tableau::shape() const {
  std::vector<int> s;
  for (const auto& r : rows_) s.push_back(static_cast<int>(r.size()));
  return s;
}

std::vector<std::vector<int>> Tableau::columns() const {
  std::vector<std::vector<int>> cols(rows_.empty() ? 0 : rows_.front().size());
  for (const auto& r : rows_)
    for (std::size_t q = 0; q < r.size(); ++q) cols[q].push_back(r[q]);
  return cols;
}

std::vector<int> Tableau::row_of_label() const {
  std::vector<int> out(static_cast<std::size_t>(cells_));
  for (std::size_t r = 0; r < rows_.size(); ++r)
    for (int label : rows_[r]) out[static_cast<std::size_t>(label)] = static_cast<int>(r);
  return out;
}

namespace {

std::uint64_t product_of_factorials(const std::vector<std::vector<int>>& blocks) {
  long double approx = 1;
  std::uint64_t order = 1;
  for (const auto& b : blocks)
    for (std::size_t k = 2; k <= b.size(); ++k) {
      approx *= static_cast<long double>(k);
      order *= k;
    }
  if (approx > 1e18L) return UINT64_MAX;
  return order;
}

// Direct product of the symmetric groups on each block, as permutations of
// the k labels.
std::vector<SignedGroupElement> block_group(const std::vector<std::vector<int>>& blocks, int cells,
                                            bool signed_elements, std::uint64_t cap) {
  const std::uint64_t order = product_of_factorials(blocks);
  if (order > cap) throw InfeasibleError("symmetrizer too large", static_cast<double>(order));
  SignedGroupElement id;
  id.perm.resize(static_cast<std::size_t>(cells));
  std::iota(id.perm.begin(), id.perm.end(), 0);
  std::vector<SignedGroupElement> group{id};
  group.reserve(static_cast<std::size_t>(order));
  for (const auto& block : blocks) {
    if (block.size() < 2) continue;
    std::vector<int> local(block.size());
    std::iota(local.begin(), local.end(), 0);
    std::vector<std::pair<std::vector<int>, int>> locals;
    do locals.emplace_back(local, permutation_sign(local));
    while (std::next_permutation(local.begin(), local.end()));

    std::vector<SignedGroupElement> next;
    next.reserve(group.size() * locals.size());
    for (const auto& g : group)
      for (const auto& [pi, sgn] : locals) {
        SignedGroupElement h = g;
        for (std::size_t a = 0; a < block.size(); ++a)
          h.perm[static_cast<std::size_t>(block[a])] = block[static_cast<std::size_t>(pi[a])];
        if (signed_elements) h.sign *= sgn;
        next.push_back(std::move(h));
      }
    group = std::move(next);
  }
  return group;
}

SparseTensor apply_group_sum(const std::vector<SignedGroupElement>& group, const SparseTensor& x,
                             const SymmetrizerLimits& limits) {
  const long double work = static_cast<long double>(group.size()) * static_cast<long double>(x.size());
  if (work > static_cast<long double>(limits.work_cap))
    throw InfeasibleError("symmetrizer too large", static_cast<double>(work));
  SparseTensor out(x.rank(), x.alphabet());
  SparseTensor::Key moved(static_cast<std::size_t>(x.rank()), '\0');
  for (const auto& [k, c] : x.entries()) {
    for (const auto& g : group) {
      for (std::size_t j = 0; j < k.size(); ++j) moved[static_cast<std::size_t>(g.perm[j])] = k[j];
      out.add_key(moved, g.sign > 0 ? c : Rational(-c));
    }
  }
  return out;
}

}  // namespace

std::uint64_t row_group_order(const Tableau& t) { return product_of_factorials(t.rows()); }
std::uint64_t col_group_order(const Tableau& t) { return product_of_factorials(t.columns()); }

std::vector<SignedGroupElement> row_group(const Tableau& t, const SymmetrizerLimits& limits) {
  return block_group(t.rows(), t.cells(), false, limits.group_cap);
}

std::vector<SignedGroupElement> col_group(const Tableau& t, const SymmetrizerLimits& limits) {
  return block_group(t.columns(), t.cells(), true, limits.group_cap);
}

SparseTensor apply_symmetrizer(const Tableau& t, const SparseTensor& x, const SymmetrizerLimits& limits) {
  if (x.rank() != t.cells()) throw InputError("tensor rank differs from the tableau cell count");
  const auto rows = row_group(t, limits);
  const auto cols = col_group(t, limits);
  return apply_group_sum(cols, apply_group_sum(rows, x, limits), limits);
}

SparseTensor tableau_vector(const Tableau& t, int alphabet) {
  if (static_cast<int>(t.rows().size()) > alphabet) throw InputError("alphabet smaller than the row count");
  SparseTensor v(t.cells(), alphabet);
  v.add(t.row_of_label(), 1);
  return v;
}

namespace {

void check_rows_m(int rows, int m) {
  if (m < 1) throw InputError("m must be positive");
  if (rows < 1 || rows > m) throw InputError("row count must be in [1, m]");
}

struct SignedPermutation {
  std::vector<int> perm;
  int sign;
};

std::vector<SignedPermutation> signed_permutations(int n) {
  std::vector<SignedPermutation> out;
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  do out.push_back({p, permutation_sign(p)});
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

// Sum of sign(mu) over mu in S_i^m such that every row of A(sigma, mu) is a
// permutation, for a fixed Latin rectangle A(sigma) given by its columns.
class MuSum {
 public:
  MuSum(int rows, int m, const std::vector<SignedPermutation>& perms)
      : rows_(rows), m_(m), perms_(perms), rowmask_(static_cast<std::size_t>(rows), 0) {}

  long long run(const std::vector<std::vector<int>>& columns) {
    columns_ = &columns;
    std::fill(rowmask_.begin(), rowmask_.end(), 0);
    return rec(0);
  }

 private:
  long long rec(int q) {
    if (q == m_) return 1;
    long long s = 0;
    const auto& col = (*columns_)[static_cast<std::size_t>(q)];
    for (const auto& mu : perms_) {
      bool ok = true;
      int p = 0;
      for (; p < rows_; ++p) {
        const int a = col[static_cast<std::size_t>(mu.perm[static_cast<std::size_t>(p)])];
        if (rowmask_[static_cast<std::size_t>(p)] >> a & 1u) {
          ok = false;
          break;
        }
        rowmask_[static_cast<std::size_t>(p)] |= std::uint64_t{1} << a;
      }
      if (ok) s += mu.sign * rec(q + 1);
      for (int r = 0; r < p; ++r) {
        const int a = col[static_cast<std::size_t>(mu.perm[static_cast<std::size_t>(r)])];
        rowmask_[static_cast<std::size_t>(r)] &= ~(std::uint64_t{1} << a);
      }
    }
    return s;
  }

  int rows_;
  int m_;
  const std::vector<SignedPermutation>& perms_;
  const std::vector<std::vector<int>>* columns_ = nullptr;
  std::vector<std::uint64_t> rowmask_;
};

BigInt restricted_sigma_mu_sum(int rows, int m, unsigned threads) {
  const auto mus = signed_permutations(rows);
  const auto first_rows = signed_permutations(m);
  std::vector<BigInt> partial(std::max(1u, threads), 0);

  parallel_for(first_rows.size(), threads, [&](std::size_t task, unsigned worker) {
    MuSum mu_sum(rows, m, mus);
    std::vector<std::vector<int>> sigma(static_cast<std::size_t>(rows), std::vector<int>(static_cast<std::size_t>(m)));
    sigma[0] = first_rows[task].perm;
    std::vector<std::uint64_t> colmask(static_cast<std::size_t>(m), 0);
    for (int q = 0; q < m; ++q) colmask[static_cast<std::size_t>(q)] = std::uint64_t{1} << sigma[0][static_cast<std::size_t>(q)];
    long long local = 0;

    // sigma_2..sigma_i with distinct column entries.
    std::function<void(int, int, std::uint64_t)> extend = [&](int p, int q, std::uint64_t used) {
      if (p == rows) {
        std::vector<std::vector<int>> cols(static_cast<std::size_t>(m), std::vector<int>(static_cast<std::size_t>(rows)));
        for (int r = 0; r < rows; ++r)
          for (int c = 0; c < m; ++c) cols[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)] = sigma[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
        local += mu_sum.run(cols);
        return;
      }
      if (q == m) {
        extend(p + 1, 0, 0);
        return;
      }
      for (int a = 0; a < m; ++a) {
        const std::uint64_t b = std::uint64_t{1} << a;
        if ((used & b) || (colmask[static_cast<std::size_t>(q)] & b)) continue;
        sigma[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)] = a;
        colmask[static_cast<std::size_t>(q)] |= b;
        extend(p, q + 1, used | b);
        colmask[static_cast<std::size_t>(q)] &= ~b;
      }
    };
    extend(1, 0, 0);
    partial[worker] += local;
  });

  BigInt total = 0;
  for (const auto& p : partial) total += p;
  return total;
}

}  // namespace

Rational prop20_lhs(int rows, int m, Expansion route, unsigned threads) {
  check_rows_m(rows, m);
  if (route == Expansion::Full) {
    const Tableau t = Tableau::row_reading(rows, m);
    const long double work = static_cast<long double>(row_group_order(t)) * col_group_order(t);
    if (work > 1e6L)
      throw InfeasibleError("full symmetrizer expansion exceeds 10^6 group pairs", static_cast<double>(work));
    const SparseTensor primal = tensor_power(make_frak_v_o(m), rows);
    const SparseTensor dual = tensor_power(make_v_o(m), rows);
    return pairing(dual, apply_symmetrizer(t, primal));
  }
  if (m > 6) throw InfeasibleError("Latin-restricted expansion supports m <= 6", 0);
  const BigInt s = restricted_sigma_mu_sum(rows, m, threads);
  return Rational(s, boost::multiprecision::pow(factorial(static_cast<unsigned>(m)), static_cast<unsigned>(rows)));
}

Rational prop20_rhs(int rows, int m, unsigned threads) {
  check_rows_m(rows, m);
  const SignedTally tally = signed_tally(rows, m, threads);
  const BigInt denom = boost::multiprecision::pow(factorial(static_cast<unsigned>(m)), static_cast<unsigned>(rows));
  return Rational(tally.imbalance_square_sum(), denom);
}

namespace {

// Column-by-column search: each column is a permutation of [m] (the column
// tuple mu_q), rows must not repeat symbols. Returns the sum of sign(mu).
long long column_tuple_sign_sum(int m) {
  std::vector<std::uint64_t> rowmask(static_cast<std::size_t>(m), 0);
  std::vector<std::vector<int>> grid(static_cast<std::size_t>(m), std::vector<int>(static_cast<std::size_t>(m)));
  long long total = 0;
  std::function<void(int, int, std::uint64_t, unsigned)> rec = [&](int q, int p, std::uint64_t colused,
                                                                  unsigned parity) {
    if (p == m) {
      if (q + 1 == m) {
        total += parity ? -1 : 1;
      } else {
        rec(q + 1, 0, 0, parity);
      }
      return;
    }
    for (int a = 0; a < m; ++a) {
      const std::uint64_t b = std::uint64_t{1} << a;
      if ((colused & b) || (rowmask[static_cast<std::size_t>(p)] & b)) continue;
      auto& column = grid[static_cast<std::size_t>(q)];
      unsigned inv = 0;
      for (int r = 0; r < p; ++r) inv += column[static_cast<std::size_t>(r)] > a;
      column[static_cast<std::size_t>(p)] = a;
      rowmask[static_cast<std::size_t>(p)] |= b;
      rec(q, p + 1, colused | b, parity ^ (inv & 1u));
      rowmask[static_cast<std::size_t>(p)] &= ~b;
    }
  };
  rec(0, 0, 0, 0);
  return total;
}

}  // namespace

BigInt latin_sign_sum_pairing(int m, Expansion route) {
  if (m < 1) throw InputError("m must be positive");
  if (route == Expansion::Full) {
    if (m > 4) throw InfeasibleError("tensor route for the sign-sum pairing supports m <= 4", 0);
    const Tableau t = Tableau::row_reading(m, m);
    const SparseTensor x = apply_symmetrizer(t, tableau_vector(t, m));
    const Rational value = pairing(tensor_power(make_v_o(m), m), x);
    if (boost::multiprecision::denominator(value) != 1)
      throw InternalError("sign-sum pairing is not an integer: " + to_string(value));
    return boost::multiprecision::numerator(value);
  }
  if (m > 6) throw InfeasibleError("Latin-restricted sign-sum supports m <= 6", 0);
  return column_tuple_sign_sum(m);
}

std::vector<std::vector<int>> all_permutations(int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> p(static_cast<std::size_t>(k));
  std::iota(p.begin(), p.end(), 0);
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

std::vector<std::vector<int>> sample_permutations(int k, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<int>> out;
  std::vector<int> p(static_cast<std::size_t>(k));
  for (std::size_t s = 0; s < count; ++s) {
    std::iota(p.begin(), p.end(), 0);
    // Fisher-Yates with explicit draws so the sample is library-independent.
    for (int j = k - 1; j > 0; --j) {
      const int r = static_cast<int>(rng() % static_cast<std::uint64_t>(j + 1));
      std::swap(p[static_cast<std::size_t>(j)], p[static_cast<std::size_t>(r)]);
    }
    out.push_back(p);
  }
  return out;
}

TranslateScanReport translate_pairing_scan(int m, std::span<const std::vector<int>> taus) {
  if (m < 1 || m > 4) throw InfeasibleError("translate scan supports m <= 4", 0);
  const Tableau t = Tableau::row_reading(m, m);
  const SparseTensor x = apply_symmetrizer(t, tableau_vector(t, m));
  const SparseTensor dual = tensor_power(make_v_o(m), m);
  TranslateScanReport report;
  const Rational d = pairing(dual, x);
  report.reference = boost::multiprecision::numerator(d);
  for (const auto& tau : taus) {
    if (static_cast<int>(tau.size()) != m * m) throw InputError("translation must permute m^2 slots");
    const Rational v = pairing(dual, x.permuted(tau));
    if (v != 0 && v != d && v != -d) ++report.violations;
    report.values.push_back(v);
  }
  return report;
}

std::string rational_json(const Rational& r) {
  nlohmann::json j = {{"num", numerator_string(r)}, {"den", denominator_string(r)}};
  return j.dump();
}

std::string tensor_to_json(const SparseTensor& t) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& [k, c] : t.entries()) {
    std::vector<int> idx = SparseTensor::index_of(k);
    for (int& a : idx) ++a;
    entries.push_back({{"idx", idx}, {"num", numerator_string(c)}, {"den", denominator_string(c)}});
  }
  nlohmann::json j = {{"rank", t.rank()}, {"m", t.alphabet()}, {"entries", entries}};
  return j.dump();
}

}  // namespace lgct
