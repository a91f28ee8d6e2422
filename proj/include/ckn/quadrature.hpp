#pragma once

#include "ckn/profile.hpp"

#include <functional>
#include <optional>
#include <stdexcept>

namespace ckn {

struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct QuadratureConfig {
  double rel_tol = 1e-9;
  double abs_tol = 0;
  int max_subdivisions = 20000;
  int max_tail_panels = 2000;  // outward panels [s, s + w] on an infinite end, w = ln 2 then doubling
  double divergence_threshold = 1e3;
  double exponent_tol = 1e-12;  // net exponents this close to 0 count as the borderline divergent case

  // Defaults with rel_tol taken from CKN_QUAD_TOL when set.
  static QuadratureConfig from_env();
};

enum class NormStatus { Finite, DivergentAtZero, DivergentAtInfinity };

struct NormValue {
  double log_value = -std::numeric_limits<double>::infinity();  // ln of the norm
  double rel_error = 0;
  NormStatus status = NormStatus::Finite;

  bool finite() const { return status == NormStatus::Finite; }
  bool is_zero() const { return finite() && std::isinf(log_value); }
  double value() const;  // +inf when divergent
  Json to_json() const;
};

// Nonnegative integrand on (lo, hi) in the variable s = ln t, given by its logarithm.
struct LogIntegrand {
  std::function<double(double)> log_value;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  std::vector<double> breaks;
  // integrand ~ exp(rate s) at an infinite end; empty: identically zero beyond the outermost cut
  std::optional<double> rate_lo, rate_hi;
};

struct LogIntegral {
  double log_value = -std::numeric_limits<double>::infinity();
  double log_error = -std::numeric_limits<double>::infinity();
  NormStatus status = NormStatus::Finite;
};

// Divergence is decided by the end rates and confirmed by panel growth; a disagreement throws.
LogIntegral integrate_log(LogIntegrand g, const QuadratureConfig& cfg = {});

// Area of the unit sphere S^(n-1) in R^n, as a logarithm.
double log_sphere_area(int n);

// (|S^(n-1)| int_0^inf t^(d+n-1) |f(t)|^s dt)^(1/s)
NormValue weighted_norm_radial(const RadialProfile& f, double d, double s, int n,
                               const QuadratureConfig& cfg = {});
NormValue weighted_norm_radial(const RadialProfile& f, const Rational& d, const Rational& s, int n,
                               const QuadratureConfig& cfg = {});

// ||u||_{d,s} for any angular part.
NormValue weighted_norm(const TestFunction& u, double d, double s, int n, const QuadratureConfig& cfg = {});

// ||grad u||_{b,p}; FirstHarmonic needs n >= 2.
NormValue weighted_norm_gradient(const TestFunction& u, double b, double p, int n,
                                 const QuadratureConfig& cfg = {});
NormValue weighted_norm_gradient(const TestFunction& u, const Rational& b, const Rational& p, int n,
                                 const QuadratureConfig& cfg = {});

enum class ReportStatus { Finite, DivergentTarget, DivergentSource };

struct NormReport {
  NormValue target;    // ||u||_{c,r}
  NormValue source;    // ||u||_{a,q}
  NormValue gradient;  // ||grad u||_{b,p}
  ReportStatus status = ReportStatus::Finite;
  std::optional<double> theta;
  std::optional<double> log_additive_ratio;        // T / (Q + G)
  std::optional<double> log_multiplicative_ratio;  // T / (G^theta Q^(1-theta))
  double error_estimate = 0;                       // largest relative error of the three norms

  Json to_json() const;
};

NormReport measure(const Params& params, const TestFunction& u, std::optional<double> theta,
                   const QuadratureConfig& cfg = {});

std::string to_string(NormStatus s);
std::string to_string(ReportStatus s);

}  // namespace ckn
