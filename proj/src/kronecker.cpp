#include "lgct/kronecker.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>

#include <json.hpp>

namespace lgct {

namespace {

using Memo = std::map<std::pair<std::vector<int>, std::vector<int>>, std::int64_t>;

// Characters on beta-sets: removing a rim hook of length k moves one bead
// from b to b-k; the sign counts beads jumped over.
std::int64_t mn_beta(const std::vector<int>& beta, const std::vector<int>& mu, std::size_t pos, Memo& memo) {
  if (pos == mu.size()) return 1;
  std::vector<int> rest(mu.begin() + static_cast<std::ptrdiff_t>(pos), mu.end());
  auto key = std::make_pair(beta, rest);
  if (auto it = memo.find(key); it != memo.end()) return it->second;

  const int k = mu[pos];
  std::int64_t total = 0;
  for (std::size_t b = 0; b < beta.size(); ++b) {
    const int target = beta[b] - k;
    if (target < 0 || std::binary_search(beta.begin(), beta.end(), target)) continue;
    int jumped = 0;
    for (int x : beta)
      if (x > target && x < beta[b]) ++jumped;
    std::vector<int> next = beta;
    next[b] = target;
    std::sort(next.begin(), next.end());
    const std::int64_t sub = mn_beta(next, mu, pos + 1, memo);
    total += jumped % 2 ? -sub : sub;
  }
  memo.emplace(std::move(key), total);
  return total;
}

std::vector<int> beta_set(const Partition& lambda) {
  const int len = static_cast<int>(lambda.size());
  std::vector<int> beta;
  for (int j = 0; j < len; ++j) beta.push_back(lambda[static_cast<std::size_t>(j)] + len - 1 - j);
  std::sort(beta.begin(), beta.end());
  return beta;
}

void partitions_rec(int remaining, int max_part, int max_parts, Partition& cur, std::vector<Partition>& out) {
  if (remaining == 0) {
    out.push_back(cur);
    return;
  }
  if (static_cast<int>(cur.size()) == max_parts) return;
  for (int p = std::min(remaining, max_part); p >= 1; --p) {
    cur.push_back(p);
    partitions_rec(remaining - p, p, max_parts, cur, out);
    cur.pop_back();
  }
}

BigInt exact_quotient(const BigInt& num, const BigInt& den, const char* what) {
  if (num % den != 0 || num < 0) throw InternalError(std::string(what) + " is not a nonnegative integer");
  return num / den;
}

}  // namespace

void validate_partition(const Partition& p) {
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] <= 0) throw InputError("partition parts must be positive");
    if (k && p[k] > p[k - 1]) throw InputError("partition parts must be weakly decreasing");
  }
}

int partition_size(const Partition& p) {
  int n = 0;
  for (int x : p) n += x;
  return n;
}

std::vector<Partition> partitions_of(int n) { return partitions_of(n, std::max(n, 1)); }

std::vector<Partition> partitions_of(int n, int max_parts) {
  if (n < 0) throw InputError("negative partition size");
  std::vector<Partition> out;
  Partition cur;
  partitions_rec(n, n, max_parts, cur, out);
  return out;
}

std::int64_t mn_character(const Partition& lambda, const Partition& mu) {
  validate_partition(lambda);
  validate_partition(mu);
  if (partition_size(lambda) != partition_size(mu)) throw InputError("character arguments differ in size");
  thread_local Memo memo;
  return mn_beta(beta_set(lambda), mu, 0, memo);
}

Partition square_cycle_type(const Partition& mu) {
  Partition out;
  for (int l : mu) {
    if (l % 2) {
      out.push_back(l);
    } else {
      out.push_back(l / 2);
      out.push_back(l / 2);
    }
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

BigInt class_size(const Partition& mu) {
  validate_partition(mu);
  std::map<int, unsigned> mult;
  for (int l : mu) ++mult[l];
  BigInt z = 1;
  for (const auto& [l, c] : mult) z *= boost::multiprecision::pow(BigInt(l), c) * factorial(c);
  return factorial(static_cast<unsigned>(partition_size(mu))) / z;
}

CharacterTable::CharacterTable(int n) : n_(n), parts_(partitions_of(n)) {
  if (n < 1) throw InputError("character table needs n >= 1");
  Memo memo;
  values_.assign(parts_.size(), std::vector<std::int64_t>(parts_.size()));
  for (std::size_t l = 0; l < parts_.size(); ++l) {
    const auto beta = beta_set(parts_[l]);
    for (std::size_t c = 0; c < parts_.size(); ++c) values_[l][c] = mn_beta(beta, parts_[c], 0, memo);
  }
  for (const auto& mu : parts_) {
    sizes_.push_back(lgct::class_size(mu));
    square_.push_back(index_of(square_cycle_type(mu)));
  }
}

std::int64_t CharacterTable::dimension(std::size_t lambda) const {
  // the identity class (1^n) is listed last
  return values_[lambda].back();
}

std::size_t CharacterTable::index_of(const Partition& p) const {
  auto it = std::find(parts_.begin(), parts_.end(), p);
  if (it == parts_.end()) throw InputError("partition does not belong to this table");
  return static_cast<std::size_t>(it - parts_.begin());
}

bool CharacterTable::row_orthogonality() const {
  const BigInt order = factorial(static_cast<unsigned>(n_));
  for (std::size_t a = 0; a < parts_.size(); ++a)
    for (std::size_t b = a; b < parts_.size(); ++b) {
      BigInt s = 0;
      for (std::size_t c = 0; c < parts_.size(); ++c) s += sizes_[c] * values_[a][c] * values_[b][c];
      if (s != (a == b ? order : BigInt(0))) return false;
    }
  return true;
}

bool CharacterTable::column_orthogonality() const {
  const BigInt order = factorial(static_cast<unsigned>(n_));
  for (std::size_t a = 0; a < parts_.size(); ++a)
    for (std::size_t b = a; b < parts_.size(); ++b) {
      BigInt s = 0;
      for (std::size_t l = 0; l < parts_.size(); ++l) s += BigInt(values_[l][a]) * values_[l][b];
      if (s != (a == b ? order / sizes_[a] : BigInt(0))) return false;
    }
  return true;
}

const CharacterTable& character_table(int n) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<CharacterTable>> tables;
  std::lock_guard lock(mutex);
  auto& slot = tables[n];
  if (!slot) slot = std::make_unique<CharacterTable>(n);
  return *slot;
}

namespace {

const CharacterTable& table_for(std::initializer_list<const Partition*> parts) {
  int n = -1;
  for (const Partition* p : parts) {
    validate_partition(*p);
    const int s = partition_size(*p);
    if (n >= 0 && s != n) throw InputError("partitions differ in size");
    n = s;
  }
  return character_table(n);
}

// Sum over classes of |C| chi_lambda (chi_mu^2 + sign * chi_mu(g^2)), over 2 n!.
BigInt square_part(const Partition& lambda, const Partition& mu, int sign) {
  const CharacterTable& t = table_for({&lambda, &mu});
  const std::size_t l = t.index_of(lambda), u = t.index_of(mu);
  BigInt s = 0;
  for (std::size_t c = 0; c < t.partitions().size(); ++c) {
    const BigInt chi = t.value(u, c);
    s += t.class_size(c) * t.value(l, c) * (chi * chi + sign * BigInt(t.value(u, t.square_class(c))));
  }
  return exact_quotient(s, 2 * factorial(static_cast<unsigned>(t.n())), "symmetric-square multiplicity");
}

}  // namespace

BigInt kronecker_coeff(const Partition& lambda, const Partition& mu, const Partition& nu) {
  const CharacterTable& t = table_for({&lambda, &mu, &nu});
  const std::size_t a = t.index_of(lambda), b = t.index_of(mu), c = t.index_of(nu);
  BigInt s = 0;
  for (std::size_t k = 0; k < t.partitions().size(); ++k)
    s += t.class_size(k) * t.value(a, k) * t.value(b, k) * t.value(c, k);
  return exact_quotient(s, factorial(static_cast<unsigned>(t.n())), "Kronecker coefficient");
}

BigInt symmetric_kronecker_coeff(const Partition& lambda, const Partition& mu) {
  return square_part(lambda, mu, 1);
}

BigInt alternating_kronecker_coeff(const Partition& lambda, const Partition& mu) {
  return square_part(lambda, mu, -1);
}

bool Corollary35Report::all_positive() const {
  return std::all_of(entries.begin(), entries.end(), [](const Corollary35Entry& e) { return e.positive(); });
}

Corollary35Report check_corollary35(int m, int d, int max_n) {
  if (m < 1 || d < 1) throw InputError("m and d must be positive");
  if (m * d > max_n)
    throw InfeasibleError("character table size exceeds the budget", static_cast<double>(m * d));
  Corollary35Report report{m, d, {}};
  const Partition d_delta(static_cast<std::size_t>(m), d);
  for (const auto& lb : partitions_of(d, m)) {
    Partition scaled = lb;
    for (int& x : scaled) x *= m;
    report.entries.push_back({lb, scaled, symmetric_kronecker_coeff(scaled, d_delta)});
  }
  return report;
}

std::string corollary35_to_json(const Corollary35Report& report) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& e : report.entries)
    arr.push_back({{"lambda_bar", e.lambda_bar},
                   {"m_lambda_bar", e.m_lambda_bar},
                   {"sk", to_string(e.sk)},
                   {"positive", e.positive()}});
  return arr.dump();
}

}  // namespace lgct
