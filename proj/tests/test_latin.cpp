#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "lgct/latin.hpp"
#include "oracles.hpp"

using namespace lgct;

namespace {

LatinRectangle rect(const std::vector<std::vector<int>>& rows) { return LatinRectangle::from_one_based(rows); }

std::vector<LatinRectangle> all_rectangles(int rows, int cols) {
  std::vector<LatinRectangle> out;
  enumerate_latin_rectangles(rows, cols, std::nullopt, [&](const LatinRectangle& r) { out.push_back(r); });
  return out;
}

std::filesystem::path temp_file(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("lgct_test_" + name);
  std::filesystem::remove(p);
  return p;
}

}  // namespace

TEST_SUITE("latin") {
  TEST_CASE("column sign examples") {
    CHECK(column_sign(std::vector<int>{0, 1}) == 1);
    CHECK(column_sign(std::vector<int>{1, 0}) == -1);
    CHECK(column_sign(std::vector<int>{2}) == 1);
    CHECK_THROWS_WITH_AS(column_sign(std::vector<int>{1, 1}), "not a valid Latin column", InputError);
  }

  TEST_CASE("rect sign examples") {
    CHECK(rect_sign(rect({{1, 2}, {2, 1}})) == -1);
    CHECK(rect_sign(rect({{2, 1}, {1, 2}})) == -1);
    CHECK(rect_sign(rect({{1, 2, 3, 4, 5}})) == 1);
  }

  TEST_CASE("rect sign equals the product of independently computed column signs") {
    for (int m = 1; m <= 4; ++m)
      for (int i = 1; i <= m; ++i)
        for (const auto& r : all_rectangles(i, m)) {
          int s = 1;
          for (int q = 0; q < m; ++q) s *= oracle::product_sign(r.column(q));
          CHECK(rect_sign(r) == s);
        }
  }

  TEST_CASE("pattern examples") {
    CHECK(pattern_of(rect({{1, 2}, {2, 1}})).to_one_based() == std::vector<std::vector<int>>{{1, 2}, {1, 2}});
    CHECK(pattern_of(rect({{2, 1}})).to_one_based() == std::vector<std::vector<int>>{{2}, {1}});
    CHECK(pattern_of(rect({{1, 2, 3}, {2, 3, 1}})).to_one_based() ==
          std::vector<std::vector<int>>{{1, 2}, {2, 3}, {1, 3}});
  }

  TEST_CASE("invalid rectangles and patterns are rejected") {
    CHECK_THROWS_AS(rect({{1, 1}}), InputError);
    CHECK_THROWS_AS(rect({{1, 2}, {1, 2}}), InputError);
    CHECK_THROWS_AS(rect({{1, 3}}), InputError);
    CHECK_THROWS_AS(Pattern::from_one_based({{1, 2}, {1, 3}}), InputError);
    CHECK_THROWS_AS(Pattern::from_one_based({{1}, {1}}), InputError);
  }

  TEST_CASE("enumeration counts") {
    CHECK(enumerate_latin_rectangles(1, 2, std::nullopt, {}) == 2);
    CHECK(enumerate_latin_rectangles(2, 2, std::nullopt, {}) == 2);
    CHECK(enumerate_latin_rectangles(2, 3, std::nullopt, {}) == 12);
    CHECK(enumerate_latin_rectangles(3, 3, std::nullopt, {}) == 12);
    CHECK(count_latin_rectangles(4, 4) == 576);
    CHECK_THROWS_WITH_AS(enumerate_latin_rectangles(3, 2, std::nullopt, {}), "too many rows", InputError);
  }

  TEST_CASE("enumeration is lexicographic, distinct and valid") {
    auto all = all_rectangles(3, 4);
    CHECK(std::is_sorted(all.begin(), all.end()));
    CHECK(std::adjacent_find(all.begin(), all.end()) == all.end());
    for (const auto& r : all) CHECK_NOTHROW(LatinRectangle(r.rows(), r.cols(), std::vector<int>(r.entries().begin(), r.entries().end())));
  }

  TEST_CASE("pattern filter visits exactly the rectangles with that pattern") {
    for (const auto& [i, m] : std::vector<std::pair<int, int>>{{2, 3}, {2, 4}, {3, 4}}) {
      const auto all = all_rectangles(i, m);
      std::map<Pattern, std::uint64_t> by_pattern;
      for (const auto& r : all) ++by_pattern[pattern_of(r)];
      for (const auto& [p, n] : by_pattern) {
        std::uint64_t seen = 0;
        const auto visited = enumerate_latin_rectangles(i, m, p, [&](const LatinRectangle& r) {
          CHECK(pattern_of(r) == p);
          ++seen;
        });
        CHECK(visited == n);
        CHECK(seen == n);
      }
    }
  }

  TEST_CASE("reduced count times m! equals the full count") {
    for (int m = 1; m <= 5; ++m)
      for (int i = 1; i <= m; ++i)
        CHECK(count_reduced_latin_rectangles(i, m) * static_cast<std::uint64_t>(factorial(static_cast<unsigned>(m))) ==
              count_latin_rectangles(i, m));
  }

  TEST_CASE("signed tally examples") {
    SignedTally t22 = signed_tally(2, 2);
    REQUIRE(t22.patterns.size() == 1);
    CHECK(t22.patterns.begin()->first.to_one_based() == std::vector<std::vector<int>>{{1, 2}, {1, 2}});
    CHECK(t22.patterns.begin()->second == SignCounts{0, 2});

    SignedTally t12 = signed_tally(1, 2);
    CHECK(t12.patterns.size() == 2);
    CHECK(t12.patterns.at(Pattern::from_one_based({{1}, {2}})) == SignCounts{1, 0});
    CHECK(t12.patterns.at(Pattern::from_one_based({{2}, {1}})) == SignCounts{1, 0});

    for (int m = 1; m <= 6; ++m) {
      SignedTally t = signed_tally(1, m);
      CHECK(t.patterns.size() == static_cast<std::size_t>(factorial(static_cast<unsigned>(m))));
      for (const auto& [_, c] : t.patterns) CHECK(c == SignCounts{1, 0});
      CHECK(t.imbalance_square_sum() == factorial(static_cast<unsigned>(m)));
    }
  }

  TEST_CASE("signed tally matches the column-order oracle pattern by pattern") {
    for (int m = 1; m <= 5; ++m)
      for (int i = 1; i <= m && i * m <= 16; ++i) {
        const SignedTally t = signed_tally(i, m, 2);
        const auto census = oracle::column_order_census(i, m, true);
        CHECK(t.total() == census.count);
        REQUIRE(t.patterns.size() == census.patterns.size());
        for (const auto& [p, c] : t.patterns) {
          const auto& ref = census.patterns.at(p.to_one_based());
          CHECK(c.plus == ref.first);
          CHECK(c.minus == ref.second);
        }
      }
  }

  TEST_CASE("thread count does not change the tally") {
    CHECK(signed_tally(3, 5, 1) == signed_tally(3, 5, 3));
  }

  TEST_CASE("alon-tarsi examples and odd cancellation") {
    CHECK(alon_tarsi_difference(1) == 1);
    CHECK(alon_tarsi_difference(2) == -2);
    CHECK(alon_tarsi_difference(3) == 0);
    CHECK(alon_tarsi_difference(5) == 0);
    const auto census = oracle::column_order_census(4, 4, false);
    CHECK(alon_tarsi_difference(4) == census.plus - census.minus);
    CHECK(alon_tarsi_difference(4) != 0);
  }

  TEST_CASE("alon-tarsi equals the signed sum on the unique square pattern") {
    for (int m = 1; m <= 4; ++m) {
      SignedTally t = signed_tally(m, m);
      REQUIRE(t.patterns.size() == 1);
      CHECK(alon_tarsi_difference(m) == t.patterns.begin()->second.imbalance());
    }
  }

  TEST_CASE("first-row reduction agrees with full enumeration") {
    for (int m = 1; m <= 4; ++m) {
      TallyOptions o;
      o.fix_first_row = true;
      CHECK(alon_tarsi_difference(m, o) == alon_tarsi_difference(m));
    }
    TallyOptions o;
    o.fix_first_row = true;
    CHECK_THROWS_AS(run_signed_tally(2, 4, o), InputError);
  }

  TEST_CASE("projection") {
    CHECK(project_last_row(rect({{1, 2}, {2, 1}})) == rect({{1, 2}}));
    CHECK(project_last_row(rect({{1, 2, 3}, {2, 3, 1}, {3, 1, 2}})) == rect({{1, 2, 3}, {2, 3, 1}}));
    CHECK_THROWS_WITH_AS(project_last_row(rect({{1, 2}})), "cannot project single row", InputError);
  }

  TEST_CASE("projection fibers are enumerated exactly by re-extension at (3,3)") {
    std::map<LatinRectangle, std::set<LatinRectangle>> fibers;
    for (const auto& r : all_rectangles(3, 3)) fibers[project_last_row(r)].insert(r);
    for (const auto& base : all_rectangles(2, 3)) {
      std::set<LatinRectangle> ext;
      std::vector<int> row{0, 1, 2};
      do {
        std::vector<int> e(base.entries().begin(), base.entries().end());
        e.insert(e.end(), row.begin(), row.end());
        try {
          ext.insert(LatinRectangle(3, 3, e));
        } catch (const InputError&) {
        }
      } while (std::next_permutation(row.begin(), row.end()));
      CHECK(ext == fibers[base]);
    }
  }

  TEST_CASE("sign factorization examples") {
    CHECK(verify_sign_factorization(2, 2).pass);
    CHECK(verify_sign_factorization(2, 3).pass);
    CHECK(verify_sign_factorization(3, 4).pass);
    CHECK_THROWS_AS(verify_sign_factorization(1, 3), InputError);
  }

  TEST_CASE("an imbalanced pattern forces an imbalanced pattern one row up") {
    std::vector<std::pair<int, int>> shapes;
    for (int m = 2; m <= 4; ++m)
      for (int i = 2; i <= m; ++i) shapes.emplace_back(i, m);
    for (int i = 2; i <= 3; ++i) shapes.emplace_back(i, 5);
    for (const auto& [i, m] : shapes)
      if (signed_tally(i, m).has_imbalanced_pattern()) CHECK(signed_tally(i - 1, m).has_imbalanced_pattern());
  }

  TEST_CASE("concatenation") {
    CHECK(concatenate(rect({{1}}), rect({{1}})) == rect({{1, 2}}));
    CHECK_THROWS_AS(concatenate(rect({{1, 2}}), rect({{1, 2}, {2, 1}})), InputError);
  }

  TEST_CASE("concatenation is sign-multiplicative and bijective onto the joined pattern class") {
    for (int m = 1; m <= 3; ++m)
      for (int mp = 1; mp <= 3; ++mp)
        for (int i = 1; i <= std::min(m, mp); ++i) {
          const auto left = all_rectangles(i, m), right = all_rectangles(i, mp);
          std::map<Pattern, std::size_t> lcount, rcount;
          for (const auto& a : left) ++lcount[pattern_of(a)];
          for (const auto& b : right) ++rcount[pattern_of(b)];
          for (const auto& a : left)
            for (const auto& b : right) {
              const LatinRectangle c = concatenate(a, b);
              CHECK(rect_sign(c) == rect_sign(a) * rect_sign(b));
              const auto pc = pattern_of(c).encoding();
              const auto pa = pattern_of(a).encoding();
              auto pb = pattern_of(b).encoding();
              for (int& x : pb) x += m;
              std::vector<int> joined = pa;
              joined.insert(joined.end(), pb.begin(), pb.end());
              CHECK(pc == joined);
            }
          // |L_(A,B)| = |L_A| * |L_B|
          for (const auto& [pa, na] : lcount)
            for (const auto& [pb, nb] : rcount) {
              std::vector<std::vector<int>> subsets = pa.to_one_based();
              for (auto s : pb.to_one_based()) {
                for (int& x : s) x += m;
                subsets.push_back(s);
              }
              const auto n = enumerate_latin_rectangles(i, m + mp, Pattern::from_one_based(subsets), {});
              CHECK(n == na * nb);
            }
        }
  }

  TEST_CASE("tally JSON and CSV") {
    SignedTally t = signed_tally(2, 2);
    const std::string j = tally_to_json(t);
    CHECK(j == R"({"i":2,"m":2,"patterns":[{"minus":"2","pattern":[[1,2],[1,2]],"plus":"0"}]})");
    CHECK(tally_from_json(j) == t);
    CHECK(tally_to_csv(t) == "i,m,pattern,plus,minus\n2,2,\"1 2|1 2\",0,2\n");
    SignedTally t24 = signed_tally(2, 4);
    CHECK(tally_from_json(tally_to_json(t24)) == t24);
    CHECK_THROWS_AS(tally_from_json("{"), InputError);
    CHECK_THROWS_AS(tally_from_json(R"({"i":2})"), InputError);
  }

  TEST_CASE("checkpoint resume reproduces the uninterrupted tally") {
    for (const auto& [i, m] : std::vector<std::pair<int, int>>{{4, 4}, {2, 4}, {1, 4}, {3, 5}}) {
      const auto path = temp_file("resume_" + std::to_string(i) + "_" + std::to_string(m));
      TallyOptions first;
      first.checkpoint = path;
      first.stop_after_blocks = 3;
      const TallyRun partial = run_signed_tally(i, m, first);
      CHECK_FALSE(partial.complete);
      CHECK(partial.blocks_computed == 3);

      // a torn final line must be ignored
      {
        std::ofstream out(path, std::ios::app);
        out << "{\"prefix\":[[1,2";
      }

      TallyOptions second;
      second.checkpoint = path;
      second.threads = 2;
      const TallyRun resumed = run_signed_tally(i, m, second);
      CHECK(resumed.complete);
      CHECK(resumed.blocks_resumed == 3);
      CHECK(resumed.blocks_resumed + resumed.blocks_computed == resumed.blocks_total);
      CHECK(resumed.tally == signed_tally(i, m));

      // a finished checkpoint resumes everything
      const TallyRun again = run_signed_tally(i, m, second);
      CHECK(again.blocks_computed == 0);
      CHECK(again.tally == resumed.tally);
      std::filesystem::remove(path);
    }
  }

  TEST_CASE("checkpoint records") {
    CheckpointRecord r;
    r.prefix = {{1, 2}, {2, 1}};
    r.block = signed_tally(2, 2);
    CHECK(checkpoint_line(r) == R"({"minus":"2","plus":"0","prefix":[[1,2],[2,1]]})");
    CHECK_THROWS_AS(read_checkpoint("/nonexistent/lgct.ckpt", 2, 2), InputError);
  }

  TEST_CASE("alon-tarsi refuses an interrupted run") {
    const auto path = temp_file("interrupted");
    TallyOptions o;
    o.checkpoint = path;
    o.stop_after_blocks = 1;
    CHECK_THROWS(alon_tarsi_difference(4, o));
    std::filesystem::remove(path);
  }

  TEST_CASE("column count cap") { CHECK_THROWS_AS(signed_tally(1, 10), InfeasibleError); }
}
