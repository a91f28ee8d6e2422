#pragma once

#include "ckn/serialize.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace ckn {

// Building blocks B(y), y > 0, of the profile catalog.
enum class BaseKind {
  Zero,
  Cutoff,            // zeta(y): 1 for y <= 1/2, 0 for y >= 1
  CutoffComplement,  // 1 - zeta(y)
  Bump,              // psi((y - center)/width), psi(z) = exp(-1/(1 - z^2)) on |z| < 1
  PowerTail,         // y^-alpha (1 + y)^(alpha - beta)
  LogBump,           // psi(k ln y)
  Indicator,         // 1 on ln y in (log_lo, log_lo + log_width)
  UnitPower,         // y^-kappa on (0, 1)
  HardyFailing,      // integral_1^min(y, e^L) tau^-gamma dtau, times y^-eps, zero for y <= 1
};

// log|x| and sign of a value that may over- or underflow in linear scale.
struct LogValue {
  double log_abs = -std::numeric_limits<double>::infinity();
  int sign = 0;

  double value() const;
  bool zero() const { return sign == 0; }
};

// Behaviour of B near y -> 0 or y -> infinity: B ~ C y^-kappa (1 + O(y^(+-gap))).
struct EndBehaviour {
  bool vanishes = true;
  double kappa = 0;
  double gap = std::numeric_limits<double>::infinity();  // infinity: no correction term
};

// f(t) = exp(log_amplitude) * t^-power * B(exp(log_scale) * t^orientation)
class RadialProfile {
 public:
  RadialProfile() = default;

  static RadialProfile zero();
  static RadialProfile power_cutoff_inner(double alpha);
  static RadialProfile power_cutoff_outer(double alpha);
  static RadialProfile smooth_bump(double center, double width);
  static RadialProfile power_tail(double alpha, double beta);
  static RadialProfile log_modulated(double eta, double k);
  static RadialProfile indicator(double lo, double hi);
  static RadialProfile indicator_log(double log_lo, double log_width);
  static RadialProfile power_on_unit(double kappa);
  static RadialProfile hardy_failing(double gamma, double log_n, double eps);

  BaseKind kind() const { return kind_; }
  double param(int i) const { return params_[i]; }
  double log_amplitude() const { return log_amplitude_; }
  double power() const { return power_; }
  double log_scale() const { return log_scale_; }
  int orientation() const { return orientation_; }

  RadialProfile& scale_amplitude_log(double log_factor);
  RadialProfile& multiply_power(double extra_power);  // f -> t^-extra_power * f

  // f(lambda t), with lambda = exp(log_lambda)
  RadialProfile dilated_log(double log_lambda) const;
  RadialProfile dilated(double lambda) const;
  // f(1/t)
  RadialProfile inverted() const;

  // Values at t = exp(s).
  LogValue value_log(double s) const;
  LogValue derivative_log(double s) const;
  // Same with the power factor removed: f(t) t^power and f'(t) t^(power + 1).
  LogValue reduced_value_log(double s) const;
  LogValue reduced_derivative_log(double s) const;
  double value(double t) const;
  double derivative(double t) const;

  // Support in s = ln t; infinite ends allowed.
  double support_lo() const;
  double support_hi() const;
  // Seams and transition points in s, sorted.
  std::vector<double> breakpoints() const;

  // f ~ C t^e near the end (at_zero: t -> 0); nullopt when f vanishes identically there.
  std::optional<double> exponent(bool at_zero) const;
  // Same for f'; nullopt also when f is exactly constant there.
  std::optional<double> derivative_exponent(bool at_zero) const;

  // Indicator and UnitPower bases: f = A t^-power on an interval of t.
  bool piecewise_power() const { return kind_ == BaseKind::Indicator || kind_ == BaseKind::UnitPower; }
  struct Piece {
    double s_lo, s_hi;  // f = exp(log_amplitude) t^-power for s_lo < ln t < s_hi, zero elsewhere
    double width;       // s_hi - s_lo without cancellation
    double log_amplitude;
    double power;
  };
  Piece piece() const;

  std::string kind_name() const;
  Json to_json() const;
  static RadialProfile from_json(const Json& j);

  friend bool operator==(const RadialProfile&, const RadialProfile&) = default;

 private:
  struct BaseEval {
    double log_abs;
    int sign;
    double dlog;  // (dB/dv)/B, v = ln y
  };
  BaseEval base(double v) const;
  EndBehaviour base_end(bool y_to_zero) const;
  void base_support(double& v_lo, double& v_hi) const;
  std::vector<double> base_breakpoints() const;
  double v_of(double s) const { return log_scale_ + orientation_ * s; }
  double s_of(double v) const { return (v - log_scale_) / orientation_; }

  BaseKind kind_ = BaseKind::Zero;
  double params_[3] = {0, 0, 0};
  double log_amplitude_ = 0;
  double power_ = 0;
  double log_scale_ = 0;
  int orientation_ = 1;
};

enum class Angular { Radial, FirstHarmonic, Translated };

struct TestFunction {
  RadialProfile profile;
  Angular angular = Angular::Radial;
  double log_offset = 0;  // ln |x0| for Translated

  static TestFunction radial(RadialProfile f) { return {std::move(f), Angular::Radial, 0}; }
  static TestFunction first_harmonic(RadialProfile f) { return {std::move(f), Angular::FirstHarmonic, 0}; }
  static TestFunction translated(RadialProfile f, double distance) {
    return {std::move(f), Angular::Translated, std::log(distance)};
  }
  double offset() const { return std::exp(log_offset); }

  Json to_json() const;
  static TestFunction from_json(const Json& j);
};

// Spherical mean profile; FirstHarmonic averages to zero; Translated is not supported.
RadialProfile spherical_mean(const TestFunction& u);

TestFunction dilate(const TestFunction& u, double lambda);
TestFunction dilate_log(const TestFunction& u, double log_lambda);

// u(x / |x|^2); Translated is not supported.
TestFunction kelvin_function(const TestFunction& u);

std::string to_string(Angular a);

}  // namespace ckn
