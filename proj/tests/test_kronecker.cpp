#include <doctest.h>

#include <json.hpp>

#include "lgct/kronecker.hpp"
#include "oracles.hpp"

using namespace lgct;

TEST_SUITE("kronecker") {
  TEST_CASE("partitions") {
    CHECK(partitions_of(4) == std::vector<Partition>{{4}, {3, 1}, {2, 2}, {2, 1, 1}, {1, 1, 1, 1}});
    const std::size_t counts[] = {1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77};
    for (int n = 0; n <= 12; ++n) CHECK(partitions_of(n).size() == counts[n]);
    CHECK(partitions_of(4, 2) == std::vector<Partition>{{4}, {3, 1}, {2, 2}});
    CHECK_THROWS_AS(validate_partition({1, 2}), InputError);
    CHECK_THROWS_AS(validate_partition({2, 0}), InputError);
  }

  TEST_CASE("character examples") {
    CHECK(mn_character({1, 1}, {2}) == -1);
    CHECK(mn_character({2, 1}, {1, 1, 1}) == 2);
    for (int n = 1; n <= 8; ++n)
      for (const auto& mu : partitions_of(n)) CHECK(mn_character({n}, mu) == 1);
    CHECK_THROWS_AS(mn_character({2}, {1, 1, 1}), InputError);
  }

  TEST_CASE("characters match traces of explicit Specht matrices") {
    for (int n = 1; n <= 5; ++n)
      for (const auto& lambda : partitions_of(n)) {
        oracle::SpechtModule w(lambda);
        for (const auto& mu : partitions_of(n)) {
          // a permutation of cycle type mu
          std::vector<int> g(static_cast<std::size_t>(n));
          int start = 0;
          for (int l : mu) {
            for (int k = 0; k < l; ++k) g[static_cast<std::size_t>(start + k)] = start + (k + 1) % l;
            start += l;
          }
          CHECK(oracle::trace(w.matrix(g)) == mn_character(lambda, mu));
        }
      }
  }

  TEST_CASE("square cycle types") {
    CHECK(square_cycle_type({4}) == Partition{2, 2});
    CHECK(square_cycle_type({3, 2}) == Partition{3, 1, 1});
    CHECK(square_cycle_type({1, 1}) == Partition{1, 1});
    CHECK(class_size({2, 1}) == 3);
    CHECK(class_size({4}) == 6);
  }

  TEST_CASE("orthogonality up to n = 12") {
    for (int n = 1; n <= 12; ++n) {
      const CharacterTable& t = character_table(n);
      CHECK(t.row_orthogonality());
      CHECK(t.column_orthogonality());
      BigInt sum = 0;
      for (std::size_t c = 0; c < t.partitions().size(); ++c) sum += t.class_size(c);
      CHECK(sum == factorial(static_cast<unsigned>(n)));
    }
  }

  TEST_CASE("kronecker examples") {
    for (int n = 1; n <= 6; ++n) CHECK(kronecker_coeff({n}, {n}, {n}) == 1);
    CHECK(kronecker_coeff({1, 1}, {1, 1}, {2}) == 1);
    CHECK(kronecker_coeff({2}, {1, 1}, {1, 1}) == 1);
    CHECK_THROWS_AS(kronecker_coeff({2}, {1, 1}, {3}), InputError);
  }

  TEST_CASE("symmetric kronecker examples") {
    CHECK(symmetric_kronecker_coeff({2}, {1, 1}) == 1);
    CHECK(symmetric_kronecker_coeff({1, 1}, {1, 1}) == 0);
    for (int n = 1; n <= 6; ++n) CHECK(symmetric_kronecker_coeff({n}, {n}) == 1);
  }

  TEST_CASE("coefficients match explicit symmetric and exterior squares for n <= 5") {
    for (int n = 1; n <= 5; ++n)
      for (const auto& l : partitions_of(n))
        for (const auto& u : partitions_of(n)) {
          CHECK(Rational(symmetric_kronecker_coeff(l, u)) == oracle::square_multiplicity(l, u, true));
          CHECK(Rational(alternating_kronecker_coeff(l, u)) == oracle::square_multiplicity(l, u, false));
        }
    for (int n = 1; n <= 4; ++n)
      for (const auto& a : partitions_of(n))
        for (const auto& b : partitions_of(n))
          for (const auto& c : partitions_of(n))
            CHECK(Rational(kronecker_coeff(a, b, c)) == oracle::kronecker_by_matrices(a, b, c));
  }

  TEST_CASE("symmetry and square decomposition up to n = 8") {
    for (int n = 1; n <= 8; ++n) {
      const auto parts = partitions_of(n);
      const CharacterTable& t = character_table(n);
      for (const auto& u : parts) {
        const BigInt dim = t.dimension(t.index_of(u));
        BigInt s2 = 0, a2 = 0;
        for (const auto& l : parts) {
          const BigInt g = kronecker_coeff(l, u, u);
          const BigInt s = symmetric_kronecker_coeff(l, u);
          const BigInt a = alternating_kronecker_coeff(l, u);
          CHECK(s + a == g);
          CHECK(s <= g);
          CHECK(g == kronecker_coeff(u, l, u));
          CHECK(g == kronecker_coeff(u, u, l));
          const BigInt dl = t.dimension(t.index_of(l));
          s2 += s * dl;
          a2 += a * dl;
        }
        CHECK(s2 == dim * (dim + 1) / 2);
        CHECK(a2 == dim * (dim - 1) / 2);
      }
    }
  }

  TEST_CASE("full symmetry of kronecker coefficients at n = 6") {
    const auto parts = partitions_of(6);
    for (const auto& a : parts)
      for (const auto& b : parts)
        for (const auto& c : parts) {
          const BigInt g = kronecker_coeff(a, b, c);
          CHECK(g == kronecker_coeff(b, a, c));
          CHECK(g == kronecker_coeff(c, b, a));
        }
  }

  TEST_CASE("corollary report examples") {
    const auto r21 = check_corollary35(2, 1);
    REQUIRE(r21.entries.size() == 1);
    CHECK(r21.entries[0].m_lambda_bar == Partition{2});
    CHECK(r21.entries[0].sk == 1);
    CHECK(r21.all_positive());

    const auto r22 = check_corollary35(2, 2);
    CHECK(r22.entries.size() == 2);
    CHECK(r22.all_positive());

    const auto r41 = check_corollary35(4, 1);
    REQUIRE(r41.entries.size() == 1);
    CHECK(r41.entries[0].m_lambda_bar == Partition{4});
    CHECK(r41.entries[0].sk == symmetric_kronecker_coeff({4}, {1, 1, 1, 1}));
    CHECK(r41.all_positive());

    CHECK_THROWS_AS(check_corollary35(4, 4), InfeasibleError);
    CHECK_THROWS_AS(check_corollary35(0, 1), InputError);
  }

  TEST_CASE("corollary JSON") {
    const auto j = nlohmann::json::parse(corollary35_to_json(check_corollary35(2, 1)));
    CHECK(j == nlohmann::json::parse(R"([{"lambda_bar":[1],"m_lambda_bar":[2],"sk":"1","positive":true}])"));
  }
}
