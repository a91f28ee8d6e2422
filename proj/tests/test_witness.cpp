#include "ckn/probe.hpp"
#include "fixtures.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace ckn;
using ckn::testing::reason_fixtures;
using ckn::testing::tuple;

namespace {

double rel_diff(double x, double y) { return std::fabs(x - y) / std::max(std::fabs(x), std::fabs(y)); }

}  // namespace

TEST_SUITE("functions") {

TEST_CASE("each reason fixture gets its own family") {
  auto fixtures = reason_fixtures();
  for (std::size_t i = 0; i < fixtures.size(); ++i) {
    auto reason = static_cast<Reason>(i);
    REQUIRE(classify(fixtures[i]).reason == reason);
    auto w = witness_for(reason, fixtures[i]);
    CHECK(w.reason == reason);
    CHECK(w.first_index <= w.last_index);
    CHECK(w.last_index <= 40);
    CHECK_FALSE(w.description.empty());
    CHECK(w.to_json()["reason"] == to_string(reason));
    auto other = static_cast<Reason>((i + 1) % fixtures.size());
    CHECK_THROWS_AS(witness_for(other, fixtures[i]), std::invalid_argument);
  }
  CHECK_THROWS(witness_for(tuple(3, 2, 2, 2, 0, 0, 0)));
}

TEST_CASE("outside the hull the witness is a single cutoff power") {
  auto below = witness_for(tuple(3, 2, 2, 2, 0, 0, -3));
  CHECK(below.single);
  auto u = below.member(1);
  CHECK(u.profile.kind() == BaseKind::Cutoff);
  CHECK(u.profile.power() == 0);
  auto above = witness_for(tuple(3, 2, 2, 2, 0, 0, 1));
  CHECK(above.member(1).profile.kind() == BaseKind::CutoffComplement);
  CHECK(above.member(1).profile.power() == doctest::Approx(2));
}

TEST_CASE("lifted indicator family against closed-form integrals") {
  // N = 3, p = 2, q = 1, r = 4, a = b = 0, c = c0 = 9
  Params pr = reason_fixtures()[3];
  auto w = witness_for(pr);
  CHECK(w.metric == WitnessMetric::Reduced);
  double area = 4 * std::numbers::pi;
  for (int k = 1; k <= 6; ++k) {
    auto u = w.member(k);
    double lo = std::exp(u.profile.support_lo());
    double n = std::round(lo);
    // u = t^(1/r - (a+N)/q) on (n, n+1): T^4 = |S| (n+1-n), Q = |S| int t^(q/r - 1) = |S| r/q ((n+1)^(1/4) - n^(1/4))
    double t = std::pow(area, 0.25);
    double q = area * 4 * (std::pow(n + 1, 0.25) - std::pow(n, 0.25));
    auto rep = measure(pr, u, std::nullopt);
    CHECK(rel_diff(rep.target.value(), t) < 1e-9);
    CHECK(rel_diff(rep.source.value(), q) < 1e-9);
  }
}

TEST_CASE("Hardy-failing family against closed-form integrals") {
  // N = 3, p = 8, q = 1, r = 1, a = -4, b = 0, c = c1 = -29/8: gamma = 3/8
  Params pr = reason_fixtures()[4];
  auto w = witness_for(pr);
  CHECK_FALSE(w.kelvin);
  CHECK(w.dilation == DilationPolicy::SuppressSource);
  double area = 4 * std::numbers::pi;
  for (int k = 1; k <= 3; ++k) {
    auto u = w.member(k);
    double log_n = u.profile.param(1);
    double n = std::exp(log_n);
    auto rep = measure(pr, u, std::nullopt);
    // |f'|^8 t^2 = t^-1 on (1, n)
    CHECK(rel_diff(rep.gradient.value(), std::pow(area * log_n, 1.0 / 8)) < 1e-8);
    double e = 5.0 / 8;
    double inner = (1 / e) * (log_n - (1 - std::pow(n, -e)) / e);
    double outer = (std::pow(n, e) - 1) / e * std::pow(n, -e) / e;
    CHECK(rel_diff(rep.target.value(), area * (inner + outer)) < 1e-8);
  }
}

TEST_CASE("Hardy-failing witness switches to the Kelvin image for positive slope") {
  // Kelvin image of the Hardy-failing fixture: slope_b = 5/8 > 0
  Params pr = kelvin_params(reason_fixtures()[4]);
  REQUIRE(classify(pr).reason == Reason::EndpointC1SmallR);
  auto w = witness_for(pr);
  CHECK(w.kelvin);
  CHECK(w.member(1).profile.orientation() == -1);
  CHECK(falsify_instance(w).falsified());

  // a = -N: the perturbed family with eps_n = 1/log(n+2)
  Params edge = tuple(3, 2, 1, 1, -3, 1, -2);
  REQUIRE(classify(edge).reason == Reason::EndpointC1SmallR);
  auto we = witness_for(edge);
  double log_n = we.member(2).profile.param(1);
  CHECK(we.member(2).profile.param(2) == doctest::Approx(1 / std::log(std::exp(log_n) + 2)));
  auto rep = falsify_instance(we);
  CHECK_MESSAGE(rep.falsified(), rep.to_json().dump());
}

TEST_CASE("multiplicative witness needs balanced equal slopes") {
  CHECK_THROWS(multiplicative_witness(tuple(3, 2, 2, 2, 0, 0, -1), 0.5));
  auto w = multiplicative_witness(tuple(2, 2, 2, 4, -2, 0, -2), 0.5);
  CHECK(w.metric == WitnessMetric::Multiplicative);
  CHECK(w.member(1).profile.kind() == BaseKind::LogBump);
}

TEST_CASE("verification family has finite norms on embedding instances") {
  for (auto pr : {tuple(3, 2, 2, 2, 0, 0, -1), tuple(3, 2, 2, 2, -2, 0, -2), tuple(2, 3, 2, 3, 1, 0, 0)}) {
    REQUIRE(classify(pr).embeds());
    auto fam = verification_family(pr);
    CHECK(fam.size() == 8);
    for (const auto& u : fam) CHECK(measure(pr, u, std::nullopt).status == ReportStatus::Finite);
  }
}

}
