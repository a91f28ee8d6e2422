#include "ckn/profile.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace ckn;

namespace {

std::vector<RadialProfile> catalog() {
  return {
      RadialProfile::power_cutoff_inner(0.7),
      RadialProfile::power_cutoff_outer(-1.3),
      RadialProfile::smooth_bump(1, 0.5),
      RadialProfile::smooth_bump(0, 1),
      RadialProfile::power_tail(-0.5, 2.5),
      RadialProfile::log_modulated(0.75, 0.5),
      RadialProfile::indicator(2, 3),
      RadialProfile::power_on_unit(0.25),
      RadialProfile::hardy_failing(1.5, 3, 0),
      RadialProfile::hardy_failing(1, 2, 0.1),
      RadialProfile::hardy_failing(0.5, 2, 0.2),
  };
}

std::vector<double> sample_points() {
  std::vector<double> ts;
  for (double s = -6; s <= 6; s += 0.37) ts.push_back(std::exp(s));
  return ts;
}

bool close(double x, double y, double rel = 1e-12) {
  return std::fabs(x - y) <= rel * std::max({std::fabs(x), std::fabs(y), 1e-300});
}

double simpson(auto&& g, double lo, double hi, int n = 2000) {
  double h = (hi - lo) / n, sum = g(lo) + g(hi);
  for (int i = 1; i < n; ++i) sum += g(lo + i * h) * (i % 2 ? 4 : 2);
  return sum * h / 3;
}

}  // namespace

TEST_SUITE("functions") {

TEST_CASE("cutoff takes the values 1, 1/2 and 0") {
  auto zeta = RadialProfile::power_cutoff_inner(0);
  CHECK(zeta.value(0.3) == 1.0);
  CHECK(zeta.value(0.5) == 1.0);
  CHECK(zeta.value(1.0) == 0.0);
  CHECK(zeta.value(0.75) == doctest::Approx(0.5).epsilon(1e-14));
  double prev = 1;
  for (double t = 0.5; t < 1; t += 0.01) {
    CHECK(zeta.value(t) <= prev);
    prev = zeta.value(t);
  }
  auto comp = RadialProfile::power_cutoff_outer(0);
  for (double t : sample_points()) CHECK(zeta.value(t) + comp.value(t) == doctest::Approx(1).epsilon(1e-14));
}

TEST_CASE("catalog formulas") {
  auto tail = RadialProfile::power_tail(0.5, 2);
  auto bump = RadialProfile::smooth_bump(2, 1);
  auto logmod = RadialProfile::log_modulated(1.5, 0.5);
  for (double t : sample_points()) {
    CHECK(close(tail.value(t), std::pow(t, -0.5) * std::pow(1 + t, -1.5)));
    double z = t - 2;
    CHECK(close(bump.value(t), std::fabs(z) < 1 ? std::exp(-1 / (1 - z * z)) : 0.0));
    double w = 0.5 * std::log(t);
    CHECK(close(logmod.value(t), std::fabs(w) < 1 ? std::pow(t, -1.5) * std::exp(-1 / (1 - w * w)) : 0.0));
  }
  auto ind = RadialProfile::indicator(2, 3);
  CHECK(ind.value(2.5) == 1.0);
  CHECK(ind.value(1.9) == 0.0);
  CHECK(ind.value(3.1) == 0.0);
  auto unit = RadialProfile::power_on_unit(0.25);
  CHECK(close(unit.value(0.5), std::pow(0.5, -0.25)));
  CHECK(unit.value(1.5) == 0.0);
}

TEST_CASE("Hardy-failing profile is the integral of its truncated power") {
  for (auto [gamma, log_n, eps] : {std::tuple{1.5, 2.0, 0.0}, {1.0, 1.5, 0.1}, {0.25, 2.0, 0.3}}) {
    auto f = RadialProfile::hardy_failing(gamma, log_n, eps);
    double end = std::exp(log_n);
    for (double t : {0.5, 1.5, 3.0, 5.0, 12.0}) {
      double upper = std::min(t, end);
      double integral = upper > 1 ? simpson([&](double x) { return std::pow(x, -gamma); }, 1, upper) : 0;
      CHECK(f.value(t) == doctest::Approx(integral * std::pow(t, -eps)).epsilon(1e-10));
    }
  }
}

TEST_CASE("derivatives match central differences") {
  for (const auto& f0 : catalog()) {
    for (const auto& f : {f0, f0.dilated(3.0), f0.inverted()}) {
      auto seams = f.breakpoints();
      for (double s = -5; s <= 5; s += 0.173) {
        bool near_seam = false;
        for (double b : seams) near_seam |= std::fabs(s - b) < 1e-3;
        if (near_seam) continue;
        double t = std::exp(s), h = 1e-6 * t;
        double fd = (f.value(t + h) - f.value(t - h)) / (2 * h);
        double d = f.derivative(t);
        CHECK_MESSAGE(std::fabs(fd - d) <= 1e-5 * std::max(1.0, std::fabs(d)), f.kind_name() << " at t=" << t);
      }
    }
  }
}

TEST_CASE("dilations compose and the inversion is an involution") {
  for (const auto& f : catalog()) {
    auto twice = f.dilated(0.3).dilated(7.0);
    auto once = f.dilated(2.1);
    auto back = f.inverted().inverted();
    for (double t : sample_points()) {
      CHECK(close(twice.value(t), once.value(t), 1e-10));
      CHECK(close(f.dilated(0.3).value(t), f.value(0.3 * t), 1e-10));
      CHECK(close(back.value(t), f.value(t)));
      CHECK(close(f.inverted().value(t), f.value(1 / t), 1e-10));
    }
  }
}

TEST_CASE("inverted power tail swaps and negates its exponents") {
  auto f = RadialProfile::power_tail(0.5, 2).inverted();
  auto g = RadialProfile::power_tail(-2, -0.5);
  for (double t : sample_points()) CHECK(close(f.value(t), g.value(t), 1e-10));
}

TEST_CASE("end exponents") {
  auto tail = RadialProfile::power_tail(0.5, 2);
  CHECK(*tail.exponent(true) == -0.5);
  CHECK(*tail.exponent(false) == -2);
  CHECK(*tail.derivative_exponent(true) == -1.5);
  CHECK(*tail.derivative_exponent(false) == -3);
  CHECK(*tail.inverted().exponent(true) == 2);
  CHECK(*RadialProfile::power_tail(0, 2).derivative_exponent(true) == 0);
  auto cutoff = RadialProfile::power_cutoff_inner(1.5);
  CHECK(*cutoff.exponent(true) == -1.5);
  CHECK_FALSE(cutoff.exponent(false));
  CHECK_FALSE(RadialProfile::power_cutoff_inner(0).derivative_exponent(true));
  CHECK_FALSE(RadialProfile::log_modulated(1, 1).exponent(true));
  auto hardy = RadialProfile::hardy_failing(1.5, 2, 0.25);
  CHECK(*hardy.exponent(false) == -0.25);
  CHECK_FALSE(hardy.exponent(true));
}

TEST_CASE("support and piecewise powers") {
  auto f = RadialProfile::power_on_unit(0.25).dilated(2).inverted();
  auto piece = f.piece();
  for (double t : {0.3, 0.7, 1.2, 3.0}) {
    double s = std::log(t);
    double expected = s > piece.s_lo && s < piece.s_hi ? std::exp(piece.log_amplitude - piece.power * s) : 0;
    CHECK(close(f.value(t), expected, 1e-12));
  }
  auto ind = RadialProfile::indicator(2, 3).dilated(0.5);
  CHECK(std::exp(ind.support_lo()) == doctest::Approx(4));
  CHECK(std::exp(ind.support_hi()) == doctest::Approx(6));
}

TEST_CASE("spherical mean, dilation and Kelvin of test functions") {
  auto f = RadialProfile::smooth_bump(1, 0.5);
  CHECK(spherical_mean(TestFunction::radial(f)) == f);
  CHECK(spherical_mean(TestFunction::first_harmonic(f)).kind() == BaseKind::Zero);
  CHECK(spherical_mean(dilate(TestFunction::radial(f), 2.0)) == f.dilated(2.0));
  CHECK_THROWS(spherical_mean(TestFunction::translated(f, 4)));
  CHECK_THROWS(dilate(TestFunction::radial(f), 0));
  CHECK_THROWS(kelvin_function(TestFunction::translated(f, 4)));
  auto moved = dilate(TestFunction::translated(f, 8), 2.0);
  CHECK(moved.offset() == doctest::Approx(4));
  auto k = kelvin_function(kelvin_function(TestFunction::first_harmonic(f)));
  CHECK(k.angular == Angular::FirstHarmonic);
  for (double t : sample_points()) CHECK(close(k.profile.value(t), f.value(t)));
}

TEST_CASE("JSON round trip") {
  for (const auto& f : catalog()) {
    auto g = f.dilated(0.37).inverted();
    g.scale_amplitude_log(1.25);
    CHECK(RadialProfile::from_json(g.to_json()) == g);
    auto u = TestFunction::translated(g, 5);
    auto v = TestFunction::from_json(u.to_json());
    CHECK(v.profile == g);
    CHECK(v.log_offset == u.log_offset);
  }
  CHECK_THROWS(RadialProfile::from_json(Json{{"kind", "Nope"}}));
}

}
