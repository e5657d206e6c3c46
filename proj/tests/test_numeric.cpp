#include <doctest.h>

#include <random>

#include "lgct/numeric.hpp"
#include "lgct/parallel.hpp"
#include "oracles.hpp"

using namespace lgct;

TEST_SUITE("numeric") {
  TEST_CASE("factorial and binomial") {
    CHECK(factorial(0) == 1);
    CHECK(factorial(10) == 3628800);
    CHECK(to_string(factorial(25)) == "15511210043330985984000000");
    CHECK(binomial(6, 3) == 20);
    CHECK(binomial(3, 5) == 0);
  }

  TEST_CASE("rational parsing and printing") {
    CHECK(to_string(parse_rational(" -6/4 ")) == "-3/2");
    CHECK(to_string(parse_rational("7")) == "7");
    CHECK(numerator_string(Rational(-1, 4)) == "-1");
    CHECK(denominator_string(Rational(-1, 4)) == "4");
    CHECK_THROWS_AS(parse_rational("1/0"), InputError);
    CHECK_THROWS_AS(parse_rational("abc"), InputError);
    CHECK_THROWS_AS(parse_bigint("1.5"), InputError);
  }

  TEST_CASE("permutation sign") {
    CHECK(permutation_sign(std::vector<int>{0, 1, 2}) == 1);
    CHECK(permutation_sign(std::vector<int>{1, 0, 2}) == -1);
    CHECK(permutation_sign(std::vector<int>{1, 2, 0}) == 1);
    CHECK_THROWS_AS(permutation_sign(std::vector<int>{0, 0}), InputError);
  }

  TEST_CASE("determinant matches cofactor expansion on random matrices") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
      const std::size_t n = 1 + trial % 4;
      RationalMatrix a = oracle::random_matrix(rng, n, n, -4, 4, 3);
      // Leibniz formula as the reference
      std::vector<int> p(n);
      std::iota(p.begin(), p.end(), 0);
      Rational ref = 0;
      do {
        Rational t = permutation_sign(p);
        for (std::size_t r = 0; r < n; ++r) t *= a(r, static_cast<std::size_t>(p[r]));
        ref += t;
      } while (std::next_permutation(p.begin(), p.end()));
      CHECK(determinant(a) == ref);

      std::vector<__int128> ai(n * n);
      RationalMatrix b(n, n);
      for (std::size_t k = 0; k < n * n; ++k) {
        ai[k] = static_cast<int>(trial * 7 + k * 3) % 9 - 4;
        b(k / n, k % n) = static_cast<int>(ai[k]);
      }
      CHECK(to_bigint(determinant_small(ai, n)) == numerator(determinant(b)));
    }
  }

  TEST_CASE("matrix product and identity") {
    RationalMatrix a{{1, 2}, {3, 4}};
    CHECK(a * RationalMatrix::identity(2) == a);
    RationalMatrix sq = a * a;
    CHECK(sq(0, 0) == 7);
    CHECK(sq(1, 1) == 22);
  }

  TEST_CASE("parallel_for visits every task and rethrows") {
    std::vector<int> hits(100, 0);
    parallel_for(hits.size(), 4, [&](std::size_t t, unsigned) { hits[t] += 1; });
    CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
    CHECK_THROWS_AS(parallel_for(10, 3, [](std::size_t t, unsigned) {
                      if (t == 5) throw InputError("boom");
                    }),
                    InputError);
  }
}
