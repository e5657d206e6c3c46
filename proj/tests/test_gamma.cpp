#include <doctest.h>

#include "lgct/gamma.hpp"
#include "oracles.hpp"

using namespace lgct;

namespace {

HomPoly monomial(int vars, std::vector<int> exp, Rational c = 1) {
  int degree = 0;
  for (int e : exp) degree += e;
  HomPoly f(vars, degree);
  f.add_term(exp, c);
  return f;
}

HomPoly random_form(std::mt19937_64& rng, int vars, int degree) {
  HomPoly f(vars, degree);
  std::uniform_int_distribution<int> coef(-3, 3), den(1, 2);
  // every exponent vector with the given degree
  std::vector<int> e(static_cast<std::size_t>(vars), 0);
  auto rec = [&](auto&& self, int j, int left) -> void {
    if (j == vars - 1) {
      e[static_cast<std::size_t>(j)] = left;
      const int c = coef(rng);
      f.add_term(e, Rational(c, den(rng)));
      return;
    }
    for (int x = 0; x <= left; ++x) {
      e[static_cast<std::size_t>(j)] = x;
      self(self, j + 1, left - x);
    }
  };
  rec(rec, 0, degree);
  return f;
}

RationalMatrix elementary(int n, int r, int c) {
  RationalMatrix e(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  e(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = 1;
  return e;
}

}  // namespace

TEST_SUITE("gamma") {
  TEST_CASE("polynomial arithmetic") {
    const HomPoly x = monomial(2, {1, 0}), y = monomial(2, {0, 1});
    HomPoly s = x;
    s += y;
    const HomPoly sq = s * s;
    CHECK(sq.coefficient({2, 0}) == 1);
    CHECK(sq.coefficient({1, 1}) == 2);
    CHECK(sq.coefficient({0, 2}) == 1);
    const std::vector<Rational> pt{2, 3};
    CHECK(sq.evaluate(pt) == 25);
    HomPoly z = sq;
    z *= 0;
    CHECK(z.is_zero());
    CHECK_THROWS_AS(x.restrict_to(3), InputError);
    CHECK(sq.restrict_to(1) == monomial(1, {2}));
    CHECK_THROWS_AS(HomPoly(2, 2).add_term({1, 0}, 1), InputError);
  }

  TEST_CASE("composition evaluates f at g x") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
      const HomPoly f = random_form(rng, 2, 3);
      const RationalMatrix g = oracle::random_matrix(rng, 2, 2, -3, 3, 2);
      const std::vector<Rational> x{Rational(trial + 1, 3), Rational(-2, trial + 1)};
      const std::vector<Rational> gx{g(0, 0) * x[0] + g(0, 1) * x[1], g(1, 0) * x[0] + g(1, 1) * x[1]};
      CHECK(f.compose(g).evaluate(x) == f.evaluate(gx));
    }
  }

  TEST_CASE("polarized coefficient examples") {
    CHECK(polarized_coefficient(monomial(2, {1, 1}), std::vector<int>{0, 1}) == Rational(1, 2));
    CHECK(polarized_coefficient(monomial(1, {2}), std::vector<int>{0, 0}) == 1);
    CHECK(polarized_coefficient(HomPoly(2, 2), std::vector<int>{0, 1}) == 0);
    CHECK_THROWS_AS(polarized_coefficient(monomial(2, {1, 1}), std::vector<int>{0, 2}), InputError);
    CHECK_THROWS_AS(polarized_coefficient(monomial(2, {1, 1}), std::vector<int>{0}), InputError);
  }

  TEST_CASE("theta image examples") {
    const auto img = theta_image(monomial(2, {1, 1}));
    REQUIRE(img.size() == 2);
    CHECK(img[0].coefficient == Rational(1, 2));
    CHECK(img[0].matrices == std::vector<RationalMatrix>{elementary(2, 0, 1)});
    CHECK(img[1].coefficient == Rational(1, 2));
    CHECK(img[1].matrices == std::vector<RationalMatrix>{elementary(2, 1, 0)});

    const auto one = theta_image(monomial(1, {2}));
    REQUIRE(one.size() == 1);
    CHECK(one[0].coefficient == 1);
    CHECK(one[0].matrices == std::vector<RationalMatrix>{elementary(1, 0, 0)});

    std::mt19937_64 rng(9);
    const auto big = theta_image(random_form(rng, 3, 4));
    CHECK(big.size() <= 81);
    for (const auto& t : big) CHECK(t.matrices.size() == 2);
    CHECK_THROWS_WITH_AS(theta_image(monomial(2, {2, 1})), "γ requires even m", InputError);
  }

  TEST_CASE("polarized det power examples") {
    const RationalMatrix id = RationalMatrix::identity(2);
    CHECK(polarized_det_power(2, 1, std::vector<RationalMatrix>{id, id}) == 1);
    CHECK(polarized_det_power(2, 1, std::vector<RationalMatrix>{elementary(2, 0, 0), elementary(2, 1, 1)}) == Rational(1, 2));
    const RationalMatrix x{{0, Rational(1, 2)}, {Rational(1, 2), 0}};
    CHECK(polarized_det_power(2, 1, std::vector<RationalMatrix>{x, x}) == Rational(-1, 4));
    CHECK_THROWS_AS(polarized_det_power(2, 1, std::vector<RationalMatrix>{id}), InputError);
    CHECK_THROWS_AS(polarized_det_power(2, 1, std::vector<RationalMatrix>{id, RationalMatrix::identity(3)}), InputError);
  }

  TEST_CASE("polarization at equal arguments recovers det^power") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 10; ++trial) {
      const RationalMatrix a = oracle::random_matrix(rng, 2, 2, -3, 3, 2);
      const std::vector<RationalMatrix> args(4, a);
      CHECK(polarized_det_power(2, 2, args) == pow(determinant(a), 2));
    }
  }

  TEST_CASE("polarization is symmetric and multilinear") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<RationalMatrix> args;
      for (int k = 0; k < 4; ++k) args.push_back(oracle::random_matrix(rng, 2, 2, -2, 2));
      const Rational base = polarized_det_power(2, 2, args);
      auto shuffled = args;
      std::swap(shuffled[0], shuffled[3]);
      std::swap(shuffled[1], shuffled[2]);
      CHECK(polarized_det_power(2, 2, shuffled) == base);

      const RationalMatrix y = oracle::random_matrix(rng, 2, 2, -2, 2);
      const Rational c(trial - 4, 3);
      auto with_y = args;
      with_y[0] = y;
      auto combo = args;
      RationalMatrix sum = y;
      sum *= c;
      sum += args[0];
      combo[0] = sum;
      CHECK(polarized_det_power(2, 2, combo) == base + c * polarized_det_power(2, 2, with_y));
    }
  }

  TEST_CASE("gamma examples") {
    CHECK(gamma_eval(2, 1, monomial(1, {2})) == 1);
    CHECK(gamma_eval(2, 2, monomial(2, {1, 1})) == Rational(-1, 4));
    CHECK(gamma_eval(2, 2, monomial(2, {2, 0})) == 0);
    CHECK(gamma_eval(2, 2, HomPoly(2, 2)) == 0);
    CHECK_THROWS_WITH_AS(gamma_eval(3, 1, monomial(1, {3})), "γ requires even m", InputError);
    CHECK_THROWS_AS(gamma_eval(2, 3, monomial(2, {1, 1})), InputError);
    CHECK_THROWS_AS(gamma_eval(2, 0, monomial(2, {1, 1})), InputError);
    CHECK_THROWS_AS(gamma_eval(4, 1, monomial(1, {2})), InputError);
  }

  TEST_CASE("gamma matches the brute-force definition on random forms") {
    std::mt19937_64 rng(31);
    for (const auto& [m, i] : std::vector<std::pair<int, int>>{{2, 1}, {2, 2}, {4, 1}, {4, 2}, {2, 3}}) {
      for (int trial = 0; trial < 5; ++trial) {
        const HomPoly f = random_form(rng, i, m);
        CHECK(gamma_eval(m, i, f) == oracle::gamma_bruteforce(m, i, f));
      }
    }
  }

  TEST_CASE("gamma restricts extra variables away") {
    std::mt19937_64 rng(33);
    const HomPoly f = random_form(rng, 3, 2);
    CHECK(gamma_eval(2, 2, f) == gamma_eval(2, 2, f.restrict_to(2)));
  }

  TEST_CASE("gamma is SL-invariant and homogeneous") {
    std::mt19937_64 rng(41);
    for (const auto& [m, i] : std::vector<std::pair<int, int>>{{2, 1}, {2, 2}, {4, 1}, {4, 2}}) {
      for (int trial = 0; trial < 20; ++trial) {
        const HomPoly f = random_form(rng, i, m);
        const Rational base = gamma_eval(m, i, f);
        CHECK(gamma_eval(m, i, f.compose(oracle::random_sl(rng, static_cast<std::size_t>(i)))) == base);
        const Rational c(trial % 7 - 3, 1 + trial % 4);
        HomPoly cf = f;
        cf *= c;
        CHECK(gamma_eval(m, i, cf) == pow(c, static_cast<unsigned>(i)) * base);
        RationalMatrix scale = RationalMatrix::identity(static_cast<std::size_t>(i));
        scale *= Rational(2, 3);
        CHECK(gamma_eval(m, i, f.compose(scale)) == pow(Rational(2, 3), static_cast<unsigned>(i * m)) * base);
      }
    }
  }

  TEST_CASE("power-sum closed form") {
    CHECK(gamma_power_sum_closed_form(2, 1) == 1);
    CHECK(gamma_power_sum_closed_form(2, 2) == 1);
    CHECK(gamma_power_sum_closed_form(4, 2) == Rational(1, 3));
    for (int m = 2; m <= 4; m += 2)
      for (int i = 1; i <= m; ++i) CHECK(gamma_power_sum_check(m, i).equal());
    CHECK_THROWS_AS(gamma_power_sum_check(4, 5), InputError);
  }

  TEST_CASE("feasibility guard reports its estimate") {
    std::mt19937_64 rng(43);
    const HomPoly f = random_form(rng, 4, 4);
    GammaOptions o;
    o.budget = 1e3;
    try {
      gamma_eval(4, 4, f, o);
      FAIL("expected the guard to refuse");
    } catch (const InfeasibleError& e) {
      CHECK(e.estimate() == doctest::Approx(gamma_cost_estimate(4, 4, f)));
      CHECK(e.estimate() > 1e3);
    }
  }

  TEST_CASE("thread count does not change gamma") {
    std::mt19937_64 rng(47);
    const HomPoly f = random_form(rng, 2, 4);
    GammaOptions o;
    o.threads = 3;
    CHECK(gamma_eval(4, 2, f, o) == gamma_eval(4, 2, f));
  }

  TEST_CASE("polynomial JSON") {
    const HomPoly f = monomial(2, {1, 1}, Rational(-3, 2));
    const std::string j = hompoly_to_json(f);
    CHECK(j == R"({"degree":2,"terms":[{"den":"2","exp":[1,1],"num":"-3"}],"vars":2})");
    CHECK(hompoly_from_json(j) == f);
    CHECK(hompoly_from_json(R"({"vars":1,"degree":2,"terms":[{"exp":[2],"num":"5"}]})") == monomial(1, {2}, 5));
    CHECK_THROWS_AS(hompoly_from_json(R"({"vars":1})"), InputError);
    CHECK_THROWS_AS(hompoly_from_json(R"({"vars":1,"degree":2,"terms":[{"exp":[1],"num":"1"}]})"), InputError);
  }
}
