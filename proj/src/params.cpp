#include "ckn/params.hpp"

#include <string>

namespace ckn {

void validate(const Params& params, Regime regime) {
  if (params.n < 1) throw InvalidParams("dimension n must be at least 1");
  if (params.p < 1) throw InvalidParams("p must be at least 1");
  if (params.q.sign() <= 0) throw InvalidParams("q must be positive");
  if (params.r.sign() <= 0) throw InvalidParams("r must be positive");
  if (regime == Regime::Full && params.n >= 2) {
    if (params.q < 1) throw InvalidParams("q must be at least 1 when n >= 2");
    if (params.r < 1) throw InvalidParams("r must be at least 1 when n >= 2");
  }
}

bool is_valid(const Params& params, Regime regime) {
  try {
    validate(params, regime);
    return true;
  } catch (const InvalidParams&) {
    return false;
  }
}

ExtRational critical_exponent(int n, const Rational& p) {
  if (p >= n) return ExtRational::infinity();
  return Rational(n) * p / (Rational(n) - p);
}

ExtRational holder_conjugate(const Rational& k) {
  if (k < 1) throw std::invalid_argument("Hoelder conjugate needs k >= 1, got " + k.str());
  if (k == 1) return ExtRational::infinity();
  return k / (k - 1);
}

Params kelvin_params(const Params& params) {
  Params out = params;
  Rational two_n = Rational(2 * params.n);
  out.a = -two_n - params.a;
  out.b = 2 * params.p - two_n - params.b;
  out.c = -two_n - params.c;
  return out;
}

namespace {

Rational slope_a_of(const Params& pr) { return (pr.a + pr.n) / pr.q; }
Rational slope_b_of(const Params& pr) { return (pr.b - pr.p + pr.n) / pr.p; }

}  // namespace

Rational endpoint_c0(const Params& params) { return params.r * slope_a_of(params) - params.n; }
Rational endpoint_c1(const Params& params) { return params.r * slope_b_of(params) - params.n; }
bool slopes_differ(const Params& params) { return slope_a_of(params) != slope_b_of(params); }

std::optional<Rational> theta_of(const Params& params, const Rational& c) {
  Rational c0 = endpoint_c0(params);
  Rational c1 = endpoint_c1(params);
  if (c0 == c1) return std::nullopt;
  return (c - c0) / (c1 - c0);
}

Rational theta_condition_coefficient(const Params& params) {
  return params.p.reciprocal() - Rational(1, params.n) - params.q.reciprocal();
}

Rational theta_condition_bound(const Params& params) {
  return params.r.reciprocal() - params.q.reciprocal();
}

bool theta_condition(const Params& params, const Rational& theta) {
  return theta * theta_condition_coefficient(params) <= theta_condition_bound(params);
}

DerivedQuantities derive(const Params& params) {
  DerivedQuantities d;
  d.slope_a = slope_a_of(params);
  d.slope_b = slope_b_of(params);
  d.c0 = endpoint_c0(params);
  d.c1 = endpoint_c1(params);
  d.p_star = critical_exponent(params.n, params.p);
  d.p_conj = holder_conjugate(params.p);
  if (d.slope_a != d.slope_b)
    d.theta_c = (params.c - d.c0) / (d.c1 - d.c0);
  else
    d.eta = d.slope_a;

  Rational q_over_pconj = params.q * (1 - params.p.reciprocal());
  d.theta_breve = (1 - params.q / params.r) / (q_over_pconj + 1);

  // Boundary of {theta in [0,1] : theta*k <= l}: its largest point when r <= q
  // (0 is always feasible), its smallest point when r > q.
  Rational k = theta_condition_coefficient(params);
  Rational l = theta_condition_bound(params);
  if (!k.is_zero()) {
    Rational edge = l / k;
    if (l.sign() >= 0)
      d.theta_bar = k.sign() > 0 ? min(edge, Rational(1)) : Rational(1);
    else if (k.sign() < 0 && edge <= 1)
      d.theta_bar = edge;
  }
  if (d.theta_bar) d.c_bar = *d.theta_bar * d.c1 + (1 - *d.theta_bar) * d.c0;

  Rational q_over_r = params.q / params.r;
  d.c_star = (1 - q_over_r) * d.c1 + q_over_r * d.c0;
  return d;
}

}  // namespace ckn
