#pragma once

#include "ckn/rational.hpp"

#include <optional>
#include <stdexcept>

namespace ckn {

struct InvalidParams : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Dimension, integrability exponents and weight powers of one embedding question:
// does ||u||_{a,q} + ||grad u||_{b,p} control ||u||_{c,r} on R^n minus the origin?
struct Params {
  int n = 1;
  Rational p{1}, q{1}, r{1};
  Rational a, b, c;

  friend bool operator==(const Params&, const Params&) = default;
};

enum class Regime { Full, Radial };

// Full: p >= 1, and q, r >= 1 when n >= 2 (q, r > 0 when n = 1).
// Radial: p >= 1 and q, r > 0.
void validate(const Params& params, Regime regime);
bool is_valid(const Params& params, Regime regime);

struct DerivedQuantities {
  Rational c0;
  Rational c1;
  ExtRational p_star{0};
  Rational slope_a;
  Rational slope_b;
  std::optional<Rational> theta_c;
  std::optional<Rational> eta;
  Rational theta_breve;
  std::optional<Rational> theta_bar;
  Rational c_star;
  std::optional<Rational> c_bar;
  ExtRational p_conj{0};
};

DerivedQuantities derive(const Params& params);

ExtRational critical_exponent(int n, const Rational& p);
ExtRational holder_conjugate(const Rational& k);

// (n, p, q, r, -2n-a, 2p-2n-b, -2n-c)
Params kelvin_params(const Params& params);

Rational endpoint_c0(const Params& params);
Rational endpoint_c1(const Params& params);
bool slopes_differ(const Params& params);

// Position of c between c0 (theta = 0) and c1 (theta = 1); empty when the slopes coincide.
std::optional<Rational> theta_of(const Params& params, const Rational& c);

// theta * (1/p - 1/n - 1/q) <= 1/r - 1/q
bool theta_condition(const Params& params, const Rational& theta);
Rational theta_condition_coefficient(const Params& params);  // 1/p - 1/n - 1/q
Rational theta_condition_bound(const Params& params);        // 1/r - 1/q

}  // namespace ckn
