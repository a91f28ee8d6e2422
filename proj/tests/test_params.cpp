#include <doctest.h>

#include "ckn/params.hpp"
#include "sampling.hpp"

using namespace ckn;

namespace {

Params make(int n, Rational p, Rational q, Rational r, Rational a, Rational b, Rational c) {
  return Params{n, p, q, r, a, b, c};
}

}  // namespace

TEST_SUITE("exact-core") {
  TEST_CASE("derived quantities of a plain instance") {
    DerivedQuantities d = derive(make(3, 2, 2, 2, 0, 0, -1));
    CHECK(d.c0 == 0);
    CHECK(d.c1 == -2);
    CHECK(d.p_star.value() == 6);
    CHECK(d.slope_a == Rational(3, 2));
    CHECK(d.slope_b == Rational(1, 2));
    REQUIRE(d.theta_c);
    CHECK(*d.theta_c == Rational(1, 2));
    CHECK_FALSE(d.eta);
    CHECK(d.p_conj.value() == 2);
  }

  TEST_CASE("theta is 0 at c0 and 1 at c1") {
    Params p = make(3, 2, 4, 3, -1, 1, 0);
    p.c = endpoint_c0(p);
    CHECK(*derive(p).theta_c == 0);
    p.c = endpoint_c1(p);
    CHECK(*derive(p).theta_c == 1);
  }

  TEST_CASE("p* is infinite from p = n on") {
    CHECK(derive(make(1, 1, 2, 2, 0, 0, 0)).p_star.is_infinite());
    CHECK(critical_exponent(3, 3).is_infinite());
    CHECK(critical_exponent(3, Rational(5, 2)).value() == 15);
  }

  TEST_CASE("equal slopes give eta and no theta") {
    // (a+3)/2 = (b-2+3)/2
    DerivedQuantities d = derive(make(3, 2, 2, 2, -2, 0, -2));
    CHECK_FALSE(d.theta_c);
    REQUIRE(d.eta);
    CHECK(*d.eta == Rational(1, 2));
  }

  TEST_CASE("theta breve") {
    // (1 - q/r)/(q/p' + 1) with p = 2, q = 1, r = 2
    CHECK(derive(make(2, 2, 1, 2, -2, 0, -2)).theta_breve == Rational(1, 3));
    // p = 1 has p' = infinity
    CHECK(derive(make(1, 1, 1, 4, 0, 0, 0)).theta_breve == Rational(3, 4));
    CHECK(derive(make(2, 2, 2, 4, -2, 0, -2)).theta_breve == Rational(1, 4));
  }

  TEST_CASE("theta bar follows the feasible edge") {
    // r <= q, r <= p*: 1
    CHECK(*derive(make(3, 2, 4, 3, 0, 0, 0)).theta_bar == 1);
    // r <= q, q > p*, r > p*: (1/r - 1/q)/(1/p - 1/n - 1/q)
    Params p = make(3, 2, 12, 8, 0, 0, 0);
    CHECK(*derive(p).theta_bar == (Rational(1, 8) - Rational(1, 12)) / (Rational(1, 2) - Rational(1, 3) - Rational(1, 12)));
    // r > q, q < p*, r <= p*: smallest feasible theta
    Params s = make(3, 2, 2, 4, 0, 0, 0);
    CHECK(*derive(s).theta_bar == (Rational(1, 4) - Rational(1, 2)) / (Rational(1, 2) - Rational(1, 3) - Rational(1, 2)));
    // q = p*
    CHECK_FALSE(derive(make(3, 2, 6, 4, 0, 0, 0)).theta_bar);
    CHECK_FALSE(derive(make(3, 2, 6, 4, 0, 0, 0)).c_bar);
  }

  TEST_CASE("c star") {
    Params p = make(3, 2, 2, 4, 0, 0, 0);
    DerivedQuantities d = derive(p);
    CHECK(d.c_star == Rational(1, 2) * d.c1 + Rational(1, 2) * d.c0);
  }

  TEST_CASE("hoelder conjugate") {
    CHECK(holder_conjugate(2).value() == 2);
    CHECK(holder_conjugate(1).is_infinite());
    CHECK(holder_conjugate(Rational(3, 2)).value() == 3);
    CHECK_THROWS_AS(holder_conjugate(Rational(1, 2)), std::invalid_argument);
  }

  TEST_CASE("kelvin parameters") {
    Params k = kelvin_params(make(3, 2, 2, 2, 0, 0, -1));
    CHECK(k.a == -6);
    CHECK(k.b == -2);
    CHECK(k.c == -5);
    Params fixed = make(3, 2, 5, 4, -3, -1, -3);
    CHECK(kelvin_params(fixed) == fixed);
  }

  TEST_CASE("validation") {
    CHECK(is_valid(make(3, 2, 2, 2, 0, 0, 0), Regime::Full));
    CHECK_FALSE(is_valid(make(3, Rational(1, 2), 2, 2, 0, 0, 0), Regime::Full));
    CHECK_FALSE(is_valid(make(2, 2, Rational(1, 2), 2, 0, 0, 0), Regime::Full));
    CHECK(is_valid(make(1, 2, Rational(1, 2), Rational(1, 3), 0, 0, 0), Regime::Full));
    CHECK(is_valid(make(3, 2, Rational(1, 2), Rational(1, 3), 0, 0, 0), Regime::Radial));
    CHECK_FALSE(is_valid(make(0, 2, 2, 2, 0, 0, 0), Regime::Radial));
    CHECK_FALSE(is_valid(make(3, 2, 0, 2, 0, 0, 0), Regime::Radial));
  }

  TEST_CASE("property: exponent identity and kelvin laws on random tuples") {
    testing::Sampler s(7);
    for (int i = 0; i < 500; ++i) {
      Params p = s.distinct_slope_params();
      DerivedQuantities d = derive(p);
      REQUIRE(d.theta_c);
      const Rational& t = *d.theta_c;
      CHECK((p.c + p.n) / p.r == t * d.slope_b + (1 - t) * d.slope_a);
      CHECK(p.c == t * d.c1 + (1 - t) * d.c0);

      Params k = kelvin_params(p);
      DerivedQuantities dk = derive(k);
      CHECK(kelvin_params(k) == p);
      CHECK(dk.slope_a == -d.slope_a);
      CHECK(dk.slope_b == -d.slope_b);
      CHECK(dk.c0 == -2 * p.n - d.c0);
      CHECK(dk.c1 == -2 * p.n - d.c1);
      CHECK(*dk.theta_c == t);
    }
  }
}
