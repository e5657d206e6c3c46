#include "lgct/latin.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <fstream>
#include <mutex>
#include <numeric>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "lgct/parallel.hpp"

namespace lgct {

namespace {

constexpr std::uint64_t bit(int a) { return std::uint64_t{1} << a; }

std::uint64_t full_mask(int m) { return m == 64 ? ~std::uint64_t{0} : bit(m) - 1; }

// Number of entries strictly greater than `a` in a column mask.
int greater_count(std::uint64_t mask, int a) {
  return a >= 63 ? 0 : std::popcount(mask >> (a + 1));
}

void check_shape(int rows, int cols) {
  if (cols < 1 || cols > kMaxSymbols) throw InputError("column count must be in [1, 64]");
  if (rows < 1) throw InputError("row count must be positive");
  if (rows > cols) throw InputError("too many rows");
}

struct MaskVectorHash {
  std::size_t operator()(const std::vector<std::uint64_t>& v) const noexcept {
    std::size_t h = 0xcbf29ce484222325ull;
    for (auto x : v) {
      h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

}  // namespace

// Row-by-row backtracking with per-column used-symbol masks. The column sign
// is carried as the parity of the number of inversions inside columns.
class RectangleEnumerator {
 public:
  RectangleEnumerator(int rows, int cols, const Pattern* filter)
      : rows_(rows), cols_(cols), full_(full_mask(cols)),
        grid_(static_cast<std::size_t>(rows * cols), 0),
        colmask_(static_cast<std::size_t>(cols), 0),
        filter_(static_cast<std::size_t>(cols), full_mask(cols)) {
    if (filter) {
      for (int q = 0; q < cols; ++q) filter_[static_cast<std::size_t>(q)] = filter->mask(q);
    }
  }

  /// Appends a fixed row; returns false if it violates the Latin property.
  bool push_row(std::span<const int> row) {
    if (depth_ >= rows_) return false;
    std::uint64_t used = 0;
    for (int q = 0; q < cols_; ++q) {
      const int a = row[static_cast<std::size_t>(q)];
      if (a < 0 || a >= cols_ || (used & bit(a)) || (colmask_[q] & bit(a)) ||
          !(filter_[q] & bit(a)))
        return false;
      used |= bit(a);
    }
    for (int q = 0; q < cols_; ++q) {
      const int a = row[static_cast<std::size_t>(q)];
      grid_[static_cast<std::size_t>(depth_ * cols_ + q)] = a;
      parity_ ^= static_cast<unsigned>(greater_count(colmask_[q], a) & 1);
      colmask_[q] |= bit(a);
    }
    ++depth_;
    return true;
  }

  void pop_row() {
    --depth_;
    for (int q = 0; q < cols_; ++q) {
      const int a = grid_[static_cast<std::size_t>(depth_ * cols_ + q)];
      colmask_[q] &= ~bit(a);
      parity_ ^= static_cast<unsigned>(greater_count(colmask_[q], a) & 1);
    }
  }

  /// Completes the remaining rows; leaf(parity) is called per rectangle.
  template <class Leaf>
  void run(Leaf&& leaf) {
    if (depth_ == rows_) {
      leaf(parity_);
      return;
    }
    fill(depth_, 0, 0, parity_, leaf);
  }

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  const std::vector<std::uint64_t>& column_masks() const noexcept { return colmask_; }
  LatinRectangle snapshot() const { return LatinRectangle(LatinRectangle::Unchecked{}, rows_, cols_, grid_); }
  Pattern pattern() const { return Pattern(Pattern::Unchecked{}, rows_, colmask_); }

 private:
  template <class Leaf>
  void fill(int p, int q, std::uint64_t rowused, unsigned parity, Leaf& leaf) {
    if (q == cols_) {
      if (p + 1 == rows_) {
        leaf(parity);
      } else {
        fill(p + 1, 0, 0, parity, leaf);
      }
      return;
    }
    std::uint64_t cand = full_ & ~rowused & ~colmask_[q] & filter_[q];
    while (cand) {
      const int a = std::countr_zero(cand);
      cand &= cand - 1;
      grid_[static_cast<std::size_t>(p * cols_ + q)] = a;
      const unsigned inv = static_cast<unsigned>(greater_count(colmask_[q], a) & 1);
      colmask_[q] |= bit(a);
      fill(p, q + 1, rowused | bit(a), parity ^ inv, leaf);
      colmask_[q] &= ~bit(a);
    }
  }

  int rows_;
  int cols_;
  std::uint64_t full_;
  int depth_ = 0;
  unsigned parity_ = 0;
  std::vector<int> grid_;
  std::vector<std::uint64_t> colmask_;
  std::vector<std::uint64_t> filter_;
};

LatinRectangle::LatinRectangle(int rows, int cols, std::vector<int> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  check_shape(rows, cols);
  if (entries_.size() != static_cast<std::size_t>(rows * cols))
    throw InputError("rectangle entry count does not match its shape");
  for (int p = 0; p < rows; ++p) {
    std::uint64_t used = 0;
    for (int q = 0; q < cols; ++q) {
      const int a = at(p, q);
      if (a < 0 || a >= cols) throw InputError("symbol out of range");
      if (used & bit(a)) throw InputError("row is not a permutation");
      used |= bit(a);
    }
  }
  for (int q = 0; q < cols; ++q) {
    std::uint64_t used = 0;
    for (int p = 0; p < rows; ++p) {
      if (used & bit(at(p, q))) throw InputError("not a valid Latin column");
      used |= bit(at(p, q));
    }
  }
}

LatinRectangle LatinRectangle::from_one_based(const std::vector<std::vector<int>>& rows) {
  if (rows.empty()) throw InputError("rectangle needs at least one row");
  const int cols = static_cast<int>(rows.front().size());
  std::vector<int> entries;
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != cols) throw InputError("ragged rectangle");
    for (int a : r) entries.push_back(a - 1);
  }
  return LatinRectangle(static_cast<int>(rows.size()), cols, std::move(entries));
}

std::vector<int> LatinRectangle::column(int q) const {
  std::vector<int> c(static_cast<std::size_t>(rows_));
  for (int p = 0; p < rows_; ++p) c[static_cast<std::size_t>(p)] = at(p, q);
  return c;
}

std::vector<std::vector<int>> LatinRectangle::to_one_based() const {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(rows_));
  for (int p = 0; p < rows_; ++p)
    for (int a : row(p)) out[static_cast<std::size_t>(p)].push_back(a + 1);
  return out;
}

Pattern::Pattern(int size, std::vector<std::uint64_t> column_masks)
    : size_(size), masks_(std::move(column_masks)) {
  const int m = cols();
  check_shape(size, m);
  std::vector<int> occurrences(static_cast<std::size_t>(m), 0);
  for (auto mask : masks_) {
    if (mask & ~full_mask(m)) throw InputError("pattern symbol out of range");
    if (std::popcount(mask) != size) throw InputError("pattern subset has the wrong size");
    for (int a = 0; a < m; ++a)
      if (mask & bit(a)) ++occurrences[static_cast<std::size_t>(a)];
  }
  for (int c : occurrences)
    if (c != size) throw InputError("pattern symbol multiplicity differs from the subset size");
}

Pattern Pattern::from_one_based(const std::vector<std::vector<int>>& subsets) {
  if (subsets.empty()) throw InputError("empty pattern");
  const int m = static_cast<int>(subsets.size());
  const int size = static_cast<int>(subsets.front().size());
  std::vector<std::uint64_t> masks;
  for (const auto& s : subsets) {
    std::uint64_t mask = 0;
    for (int a : s) {
      if (a < 1 || a > m) throw InputError("pattern symbol out of range");
      if (mask & bit(a - 1)) throw InputError("pattern subset repeats a symbol");
      mask |= bit(a - 1);
    }
    masks.push_back(mask);
  }
  return Pattern(size, std::move(masks));
}

std::vector<std::vector<int>> Pattern::to_one_based() const {
  std::vector<std::vector<int>> out;
  for (auto mask : masks_) {
    std::vector<int> s;
    for (std::uint64_t x = mask; x; x &= x - 1) s.push_back(std::countr_zero(x) + 1);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<int> Pattern::encoding() const {
  std::vector<int> out;
  for (auto mask : masks_)
    for (std::uint64_t x = mask; x; x &= x - 1) out.push_back(std::countr_zero(x));
  return out;
}

bool operator<(const Pattern& a, const Pattern& b) {
  if (a.size_ != b.size_) return a.size_ < b.size_;
  const std::size_t n = std::min(a.masks_.size(), b.masks_.size());
  for (std::size_t q = 0; q < n; ++q) {
    const std::uint64_t diff = a.masks_[q] ^ b.masks_[q];
    if (diff) {
      // Equal-size sorted subsets compare at their smallest differing symbol.
      return (a.masks_[q] & (diff & -diff)) != 0;
    }
  }
  return a.masks_.size() < b.masks_.size();
}

Pattern pattern_from_masks_unchecked(int size, std::vector<std::uint64_t> masks) {
  return Pattern(Pattern::Unchecked{}, size, std::move(masks));
}

SignedTally& SignedTally::merge(const SignedTally& other) {
  if (patterns.empty() && rows == 0) {
    rows = other.rows;
    cols = other.cols;
  }
  if (other.rows != rows || other.cols != cols) throw InputError("merging tallies of different shapes");
  for (const auto& [pattern, counts] : other.patterns) patterns[pattern] += counts;
  return *this;
}

BigInt SignedTally::total() const {
  BigInt t = 0;
  for (const auto& [_, c] : patterns) t += c.plus + c.minus;
  return t;
}

BigInt SignedTally::imbalance_square_sum() const {
  BigInt s = 0;
  for (const auto& [_, c] : patterns) {
    BigInt d = c.imbalance();
    s += d * d;
  }
  return s;
}

bool SignedTally::has_imbalanced_pattern() const {
  return std::any_of(patterns.begin(), patterns.end(),
                     [](const auto& kv) { return kv.second.plus != kv.second.minus; });
}

int column_sign(std::span<const int> column) {
  if (column.empty()) throw InputError("not a valid Latin column");
  int sign = 1;
  for (std::size_t p = 0; p < column.size(); ++p)
    for (std::size_t r = p + 1; r < column.size(); ++r) {
      if (column[p] == column[r]) throw InputError("not a valid Latin column");
      if (column[r] < column[p]) sign = -sign;
    }
  return sign;
}

int rect_sign(const LatinRectangle& rect) {
  int sign = 1;
  for (int q = 0; q < rect.cols(); ++q) sign *= column_sign(rect.column(q));
  return sign;
}

Pattern pattern_of(const LatinRectangle& rect) {
  std::vector<std::uint64_t> masks(static_cast<std::size_t>(rect.cols()), 0);
  for (int p = 0; p < rect.rows(); ++p)
    for (int q = 0; q < rect.cols(); ++q) masks[static_cast<std::size_t>(q)] |= bit(rect.at(p, q));
  return Pattern(Pattern::Unchecked{}, rect.rows(), std::move(masks));
}

std::uint64_t enumerate_latin_rectangles(int rows, int cols, const std::optional<Pattern>& filter,
                                         const RectangleVisitor& visitor) {
  check_shape(rows, cols);
  if (filter && (filter->cols() != cols || filter->subset_size() != rows))
    throw InputError("filter pattern shape does not match");
  RectangleEnumerator e(rows, cols, filter ? &*filter : nullptr);
  std::uint64_t count = 0;
  e.run([&](unsigned) {
    ++count;
    if (visitor) visitor(e.snapshot());
  });
  return count;
}

std::uint64_t count_latin_rectangles(int rows, int cols) {
  check_shape(rows, cols);
  RectangleEnumerator e(rows, cols, nullptr);
  std::uint64_t count = 0;
  e.run([&](unsigned) { ++count; });
  return count;
}

std::uint64_t count_reduced_latin_rectangles(int rows, int cols) {
  check_shape(rows, cols);
  RectangleEnumerator e(rows, cols, nullptr);
  std::vector<int> identity(static_cast<std::size_t>(cols));
  std::iota(identity.begin(), identity.end(), 0);
  e.push_row(identity);
  std::uint64_t count = 0;
  e.run([&](unsigned) { ++count; });
  return count;
}

namespace {

std::vector<std::vector<int>> all_permutations(int m) {
  std::vector<std::vector<int>> out;
  std::vector<int> p(static_cast<std::size_t>(m));
  std::iota(p.begin(), p.end(), 0);
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

using PrefixKey = std::vector<int>;

PrefixKey prefix_key(const std::vector<std::vector<int>>& rows_one_based) {
  PrefixKey k;
  for (const auto& r : rows_one_based)
    for (int a : r) k.push_back(a - 1);
  return k;
}

// Counts for one prefix block, keyed by column masks.
struct BlockCounts {
  std::unordered_map<std::vector<std::uint64_t>, std::array<std::uint64_t, 2>, MaskVectorHash> by_pattern;
  std::array<std::uint64_t, 2> single{0, 0};  // used when rows == cols
};

SignedTally to_tally(const BlockCounts& counts, int rows, int cols) {
  SignedTally t;
  t.rows = rows;
  t.cols = cols;
  if (rows == cols) {
    if (counts.single[0] + counts.single[1] > 0) {
      std::vector<std::uint64_t> masks(static_cast<std::size_t>(cols), full_mask(cols));
      t.patterns[pattern_from_masks_unchecked(rows, std::move(masks))] =
          SignCounts{counts.single[0], counts.single[1]};
    }
    return t;
  }
  for (const auto& [masks, c] : counts.by_pattern)
    t.patterns[pattern_from_masks_unchecked(rows, masks)] = SignCounts{c[0], c[1]};
  return t;
}

}  // namespace

TallyRun run_signed_tally(int rows, int cols, const TallyOptions& options) {
  check_shape(rows, cols);
  if (cols > 9) throw InfeasibleError("full enumeration beyond 9 columns is not supported", 0);
  if (options.fix_first_row && rows != cols)
    throw InputError("first-row reduction is only valid for full squares");

  const auto first_rows = options.fix_first_row
                              ? std::vector<std::vector<int>>{[&] {
                                  std::vector<int> id(static_cast<std::size_t>(cols));
                                  std::iota(id.begin(), id.end(), 0);
                                  return id;
                                }()}
                              : all_permutations(cols);

  TallyRun run;
  run.tally.rows = rows;
  run.tally.cols = cols;

  // Resume: completed blocks whose first row belongs to this run.
  std::set<PrefixKey> done;
  if (options.checkpoint && std::filesystem::exists(*options.checkpoint)) {
    std::set<std::vector<int>> allowed(first_rows.begin(), first_rows.end());
    for (const auto& rec : read_checkpoint(*options.checkpoint, rows, cols)) {
      PrefixKey key = prefix_key(rec.prefix);
      std::vector<int> first(key.begin(), key.begin() + cols);
      if (!allowed.count(first)) continue;
      if (!done.insert(key).second) continue;
      run.tally.merge(rec.block);
      ++run.blocks_resumed;
    }
  }

  std::ofstream checkpoint_out;
  if (options.checkpoint) {
    bool torn = false;
    if (std::filesystem::exists(*options.checkpoint) && std::filesystem::file_size(*options.checkpoint) > 0) {
      std::ifstream in(*options.checkpoint, std::ios::binary);
      in.seekg(-1, std::ios::end);
      torn = in.get() != '\n';
    }
    checkpoint_out.open(*options.checkpoint, std::ios::app);
    if (!checkpoint_out) throw InputError("cannot open checkpoint file " + options.checkpoint->string());
    // terminate a torn final record so new records start on their own line
    if (torn) checkpoint_out << '\n';
  }

  const unsigned workers = std::max(1u, options.threads);
  std::vector<SignedTally> partial(workers);
  for (auto& p : partial) {
    p.rows = rows;
    p.cols = cols;
  }
  std::mutex io_mutex;
  std::atomic<std::size_t> computed{0};
  std::atomic<bool> stop{false};

  auto finish_block = [&](unsigned worker, const std::vector<std::vector<int>>& prefix_rows,
                          const BlockCounts& counts) {
    SignedTally block = to_tally(counts, rows, cols);
    partial[worker].merge(block);
    std::size_t n = computed.fetch_add(1) + 1;
    if (checkpoint_out.is_open()) {
      std::vector<std::vector<int>> one_based;
      for (const auto& r : prefix_rows) {
        one_based.emplace_back();
        for (int a : r) one_based.back().push_back(a + 1);
      }
      std::string line = checkpoint_line({one_based, block});
      std::lock_guard lock(io_mutex);
      checkpoint_out << line << '\n';
      checkpoint_out.flush();
    }
    if (options.stop_after_blocks && n >= *options.stop_after_blocks) stop = true;
  };

  parallel_for(first_rows.size(), workers, [&](std::size_t task, unsigned worker) {
    if (stop) return;
    const auto& row0 = first_rows[task];
    RectangleEnumerator e(rows, cols, nullptr);
    e.push_row(row0);

    auto count_into = [&](BlockCounts& counts) {
      if (rows == cols) {
        e.run([&](unsigned parity) { ++counts.single[parity]; });
      } else {
        e.run([&](unsigned parity) {
          auto& c = counts.by_pattern[e.column_masks()];
          ++c[parity];
        });
      }
    };

    if (rows == 1) {
      if (done.count(row0)) return;
      BlockCounts counts;
      count_into(counts);
      finish_block(worker, {row0}, counts);
      return;
    }

    // Second rows in lexicographic order.
    std::vector<int> row1(static_cast<std::size_t>(cols));
    std::uint64_t used = 0;
    std::function<void(int)> second = [&](int q) {
      if (stop) return;
      if (q == cols) {
          PrefixKey key = row0;
        key.insert(key.end(), row1.begin(), row1.end());
        if (done.count(key)) return;
        BlockCounts counts;
        e.push_row(row1);
        count_into(counts);
        e.pop_row();
        finish_block(worker, {row0, row1}, counts);
        return;
      }
      for (int a = 0; a < cols; ++a) {
        if ((used & bit(a)) || a == row0[static_cast<std::size_t>(q)]) continue;
        used |= bit(a);
        row1[static_cast<std::size_t>(q)] = a;
        second(q + 1);
        used &= ~bit(a);
      }
    };
    second(0);
  });

  for (const auto& p : partial) run.tally.merge(p);
  run.blocks_computed = computed;
  // Blocks per first row: the derangement number (one block when rows == 1).
  std::size_t per_first = 1;
  if (rows > 1) {
    std::size_t d_prev = 1, d_cur = 0;
    for (int n = 2; n <= cols; ++n) {
      const std::size_t d_next = static_cast<std::size_t>(n - 1) * (d_prev + d_cur);
      d_prev = d_cur;
      d_cur = d_next;
    }
    per_first = d_cur;
  }
  run.blocks_total = first_rows.size() * per_first;
  run.complete = run.blocks_resumed + run.blocks_computed == run.blocks_total;

  if (options.fix_first_row) {
    const BigInt scale = factorial(static_cast<unsigned>(cols));
    for (auto& [_, c] : run.tally.patterns) {
      c.plus *= scale;
      c.minus *= scale;
    }
  }
  return run;
}

SignedTally signed_tally(int rows, int cols, unsigned threads) {
  TallyOptions o;
  o.threads = threads;
  return run_signed_tally(rows, cols, o).tally;
}

BigInt alon_tarsi_difference(int m, const TallyOptions& options) {
  TallyRun run = run_signed_tally(m, m, options);
  if (!run.complete) throw std::runtime_error("enumeration interrupted before completion");
  BigInt d = 0;
  for (const auto& [_, c] : run.tally.patterns) d += c.imbalance();
  return d;
}

LatinRectangle project_last_row(const LatinRectangle& rect) {
  if (rect.rows() < 2) throw InputError("cannot project single row");
  std::vector<int> entries(rect.entries().begin(),
                           rect.entries().begin() + (rect.rows() - 1) * rect.cols());
  return LatinRectangle(rect.rows() - 1, rect.cols(), std::move(entries));
}

LatinRectangle concatenate(const LatinRectangle& left, const LatinRectangle& right) {
  if (left.rows() != right.rows()) throw InputError("concatenated rectangles need equal row counts");
  const int m = left.cols();
  const int total = m + right.cols();
  std::vector<int> entries;
  entries.reserve(static_cast<std::size_t>(left.rows() * total));
  for (int p = 0; p < left.rows(); ++p) {
    for (int a : left.row(p)) entries.push_back(a);
    for (int a : right.row(p)) entries.push_back(a + m);
  }
  return LatinRectangle(left.rows(), total, std::move(entries));
}

FactorizationReport verify_sign_factorization(int rows, int cols) {
  check_shape(rows, cols);
  if (rows < 2) throw InputError("cannot project single row");
  FactorizationReport report;
  std::map<std::pair<Pattern, Pattern>, std::pair<int, LatinRectangle>> seen;
  enumerate_latin_rectangles(rows, cols, std::nullopt, [&](const LatinRectangle& rect) {
    ++report.rectangles;
    const LatinRectangle proj = project_last_row(rect);
    const int ratio = rect_sign(rect) * rect_sign(proj);
    auto key = std::make_pair(pattern_of(rect), pattern_of(proj));
    auto it = seen.find(key);
    if (it == seen.end()) {
      seen.emplace(std::move(key), std::make_pair(ratio, rect));
    } else if (it->second.first != ratio && report.pass) {
      report.pass = false;
      report.counterexample.emplace(it->second.second, rect);
    }
  });
  report.pattern_pairs = seen.size();
  return report;
}

}  // namespace lgct
