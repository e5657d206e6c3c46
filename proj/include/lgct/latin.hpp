#pragma once

// Latin (i,m)-rectangles: i x m arrays whose rows are permutations of the
// symbol set and whose columns have distinct entries. Symbols are stored
// 0-based and rendered 1-based.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lgct/numeric.hpp"

namespace lgct {

constexpr int kMaxSymbols = 64;

class LatinRectangle {
 public:
  /// Validates the Latin property; throws InputError otherwise.
  LatinRectangle(int rows, int cols, std::vector<int> entries);
  /// Rows given with 1-based symbols, as printed.
  static LatinRectangle from_one_based(const std::vector<std::vector<int>>& rows);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  int at(int p, int q) const { return entries_[static_cast<std::size_t>(p * cols_ + q)]; }
  std::span<const int> row(int p) const {
    return {entries_.data() + static_cast<std::size_t>(p * cols_), static_cast<std::size_t>(cols_)};
  }
  std::vector<int> column(int q) const;
  std::span<const int> entries() const noexcept { return entries_; }
  std::vector<std::vector<int>> to_one_based() const;

  friend bool operator==(const LatinRectangle&, const LatinRectangle&) = default;
  friend auto operator<=>(const LatinRectangle&, const LatinRectangle&) = default;

 private:
  struct Unchecked {};
  LatinRectangle(Unchecked, int rows, int cols, std::vector<int> entries)
      : rows_(rows), cols_(cols), entries_(std::move(entries)) {}
  friend class RectangleEnumerator;

  int rows_ = 0;
  int cols_ = 0;
  std::vector<int> entries_;
};

/// Ordered m-tuple of i-subsets of the symbol set (the column contents).
class Pattern {
 public:
  Pattern() = default;
  /// Validates: every subset has `size` elements and every symbol occurs in
  /// exactly `size` subsets.
  Pattern(int size, std::vector<std::uint64_t> column_masks);
  static Pattern from_one_based(const std::vector<std::vector<int>>& subsets);

  int subset_size() const noexcept { return size_; }
  int cols() const noexcept { return static_cast<int>(masks_.size()); }
  std::uint64_t mask(int q) const { return masks_[static_cast<std::size_t>(q)]; }
  std::span<const std::uint64_t> masks() const noexcept { return masks_; }

  /// Sorted 1-based subsets in column order.
  std::vector<std::vector<int>> to_one_based() const;
  /// Concatenation of the sorted subsets (0-based).
  std::vector<int> encoding() const;

  friend bool operator==(const Pattern&, const Pattern&) = default;
  /// Lexicographic order of encoding().
  friend bool operator<(const Pattern& a, const Pattern& b);

 private:
  struct Unchecked {};
  Pattern(Unchecked, int size, std::vector<std::uint64_t> masks)
      : size_(size), masks_(std::move(masks)) {}
  friend Pattern pattern_of(const LatinRectangle&);
  friend class RectangleEnumerator;
  friend Pattern pattern_from_masks_unchecked(int, std::vector<std::uint64_t>);

  int size_ = 0;
  std::vector<std::uint64_t> masks_;
};

struct SignCounts {
  BigInt plus = 0;
  BigInt minus = 0;

  BigInt imbalance() const { return plus - minus; }
  SignCounts& operator+=(const SignCounts& o) {
    plus += o.plus;
    minus += o.minus;
    return *this;
  }
  friend bool operator==(const SignCounts&, const SignCounts&) = default;
};

/// Per-pattern exact counts of column-even and column-odd rectangles.
/// Tallies form a commutative monoid under merge().
struct SignedTally {
  int rows = 0;
  int cols = 0;
  std::map<Pattern, SignCounts> patterns;

  SignedTally& merge(const SignedTally& other);
  BigInt total() const;
  /// Sum over patterns of (plus - minus)^2.
  BigInt imbalance_square_sum() const;
  bool has_imbalanced_pattern() const;

  friend bool operator==(const SignedTally&, const SignedTally&) = default;
};

int column_sign(std::span<const int> column);
int rect_sign(const LatinRectangle& rect);
Pattern pattern_of(const LatinRectangle& rect);
Pattern pattern_from_masks_unchecked(int size, std::vector<std::uint64_t> masks);

using RectangleVisitor = std::function<void(const LatinRectangle&)>;

/// Visits every Latin (rows, cols)-rectangle once in row-by-row lexicographic
/// order; with a filter only those of that pattern. Returns the visit count.
std::uint64_t enumerate_latin_rectangles(int rows, int cols, const std::optional<Pattern>& filter,
                                         const RectangleVisitor& visitor);
std::uint64_t count_latin_rectangles(int rows, int cols);
/// Rectangles whose first row is 1..m. Relabelling symbols is a bijection,
/// so the full count is m! times this.
std::uint64_t count_reduced_latin_rectangles(int rows, int cols);

struct TallyOptions {
  unsigned threads = 1;
  /// Newline-delimited JSON; completed prefix blocks found there are skipped.
  std::optional<std::filesystem::path> checkpoint;
  /// Stop after this many newly completed blocks (simulated interruption).
  std::optional<std::size_t> stop_after_blocks;
  /// Enumerate only rectangles whose first row is the identity and scale the
  /// counts by m!. Column permutations preserve the column sign, so this is
  /// exact for the summed tally but permutes individual patterns; it is only
  /// accepted for full squares.
  bool fix_first_row = false;
};

struct TallyRun {
  SignedTally tally;
  bool complete = true;
  std::size_t blocks_total = 0;
  std::size_t blocks_resumed = 0;
  std::size_t blocks_computed = 0;
};

/// Prefix blocks: the first two rows (or the first row when rows == 1).
TallyRun run_signed_tally(int rows, int cols, const TallyOptions& options = {});
SignedTally signed_tally(int rows, int cols, unsigned threads = 1);

/// Number of column-even minus column-odd Latin squares of order m.
BigInt alon_tarsi_difference(int m, const TallyOptions& options = {});

LatinRectangle project_last_row(const LatinRectangle& rect);
LatinRectangle concatenate(const LatinRectangle& left, const LatinRectangle& right);

struct FactorizationReport {
  bool pass = true;
  std::size_t rectangles = 0;
  std::size_t pattern_pairs = 0;
  /// Two rectangles in the same (pattern, projected pattern) class whose
  /// sign ratios disagree.
  std::optional<std::pair<LatinRectangle, LatinRectangle>> counterexample;
};

/// Checks that eps_c(rect) / eps_c(project_last_row(rect)) depends only on
/// the pair (pattern_of(rect), pattern_of(projection)).
FactorizationReport verify_sign_factorization(int rows, int cols);

// Serialization (latin_io.cpp).
std::string tally_to_json(const SignedTally& tally);
std::string tally_to_csv(const SignedTally& tally);
SignedTally tally_from_json(const std::string& text);

struct CheckpointRecord {
  std::vector<std::vector<int>> prefix;  // 1-based rows
  SignedTally block;
};
std::string checkpoint_line(const CheckpointRecord& record);
/// Reads all well-formed records; a malformed line (e.g. a torn final write)
/// is skipped. Duplicate prefixes keep the first record.
std::vector<CheckpointRecord> read_checkpoint(const std::filesystem::path& path, int rows, int cols);

}  // namespace lgct
