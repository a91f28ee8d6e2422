#include "ckn/profile.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ckn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kExponentTol = 1e-12;

double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double logistic(double z) {
  if (z >= 0) return 1 / (1 + std::exp(-z));
  double e = std::exp(z);
  return e / (1 + e);
}

// psi(z) = exp(-1/(1 - z^2)) on |z| < 1, in log form with d(log psi)/dz.
bool bump_log(double z, double& log_abs, double& dlog_dz) {
  if (!(std::fabs(z) < 1)) return false;
  double w = 1 - z * z;
  log_abs = -1 / w;
  dlog_dz = -2 * z / (w * w);
  return true;
}

constexpr std::pair<BaseKind, const char*> kKindNames[] = {
    {BaseKind::Zero, "Zero"},
    {BaseKind::Cutoff, "PowerCutoffInner"},
    {BaseKind::CutoffComplement, "PowerCutoffOuter"},
    {BaseKind::Bump, "SmoothBump"},
    {BaseKind::PowerTail, "PowerTail"},
    {BaseKind::LogBump, "LogModulated"},
    {BaseKind::Indicator, "Indicator1D"},
    {BaseKind::UnitPower, "PowerOnUnit"},
    {BaseKind::HardyFailing, "HardyFailing"},
};

const char* kind_label(BaseKind k) {
  for (const auto& [kind, name] : kKindNames)
    if (kind == k) return name;
  return "?";
}

// Parameter names per kind, in storage order.
std::vector<const char*> param_names(BaseKind k) {
  switch (k) {
    case BaseKind::Bump: return {"center", "width"};
    case BaseKind::PowerTail: return {"alpha", "beta"};
    case BaseKind::LogBump: return {"k"};
    case BaseKind::Indicator: return {"log_lo", "log_width"};
    case BaseKind::UnitPower: return {"kappa"};
    case BaseKind::HardyFailing: return {"gamma", "log_n", "eps"};
    default: return {};
  }
}

}  // namespace

double LogValue::value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }

RadialProfile RadialProfile::zero() { return RadialProfile(); }

RadialProfile RadialProfile::power_cutoff_inner(double alpha) {
  RadialProfile f;
  f.kind_ = BaseKind::Cutoff;
  f.power_ = alpha;
  return f;
}

RadialProfile RadialProfile::power_cutoff_outer(double alpha) {
  RadialProfile f;
  f.kind_ = BaseKind::CutoffComplement;
  f.power_ = alpha;
  return f;
}

RadialProfile RadialProfile::smooth_bump(double center, double width) {
  if (!(width > 0) || !(center + width > 0)) throw std::invalid_argument("smooth bump needs width > 0 and center + width > 0");
  RadialProfile f;
  f.kind_ = BaseKind::Bump;
  f.params_[0] = center;
  f.params_[1] = width;
  return f;
}

RadialProfile RadialProfile::power_tail(double alpha, double beta) {
  RadialProfile f;
  f.kind_ = BaseKind::PowerTail;
  f.params_[0] = alpha;
  f.params_[1] = beta;
  return f;
}

RadialProfile RadialProfile::log_modulated(double eta, double k) {
  if (!(k > 0)) throw std::invalid_argument("log-modulated profile needs k > 0");
  RadialProfile f;
  f.kind_ = BaseKind::LogBump;
  f.params_[0] = k;
  f.power_ = eta;
  return f;
}

RadialProfile RadialProfile::indicator(double lo, double hi) {
  if (!(lo > 0) || !(hi > lo) || !std::isfinite(hi)) throw std::invalid_argument("indicator needs 0 < lo < hi < inf");
  return indicator_log(std::log(lo), std::log(hi / lo));
}

RadialProfile RadialProfile::indicator_log(double log_lo, double log_width) {
  if (!std::isfinite(log_lo) || !(log_width > 0) || !std::isfinite(log_width))
    throw std::invalid_argument("indicator needs a finite start and a positive finite width");
  RadialProfile f;
  f.kind_ = BaseKind::Indicator;
  f.params_[0] = log_lo;
  f.params_[1] = log_width;
  return f;
}

RadialProfile RadialProfile::power_on_unit(double kappa) {
  RadialProfile f;
  f.kind_ = BaseKind::UnitPower;
  f.params_[0] = kappa;
  return f;
}

RadialProfile RadialProfile::hardy_failing(double gamma, double log_n, double eps) {
  if (!(log_n > 0) || eps < 0) throw std::invalid_argument("Hardy-failing profile needs log_n > 0 and eps >= 0");
  RadialProfile f;
  f.kind_ = BaseKind::HardyFailing;
  f.params_[0] = gamma;
  f.params_[1] = log_n;
  f.params_[2] = eps;
  return f;
}

RadialProfile& RadialProfile::scale_amplitude_log(double log_factor) {
  log_amplitude_ += log_factor;
  return *this;
}

RadialProfile& RadialProfile::multiply_power(double extra_power) {
  power_ += extra_power;
  return *this;
}

RadialProfile RadialProfile::dilated_log(double log_lambda) const {
  RadialProfile f = *this;
  f.log_amplitude_ -= power_ * log_lambda;
  f.log_scale_ += orientation_ * log_lambda;
  return f;
}

RadialProfile RadialProfile::dilated(double lambda) const {
  if (!(lambda > 0)) throw std::invalid_argument("dilation factor must be positive");
  return dilated_log(std::log(lambda));
}

RadialProfile RadialProfile::inverted() const {
  RadialProfile f = *this;
  f.power_ = -power_;
  f.orientation_ = -orientation_;
  return f;
}

RadialProfile::BaseEval RadialProfile::base(double v) const {
  const BaseEval none{-kInf, 0, 0};
  switch (kind_) {
    case BaseKind::Zero: return none;
    case BaseKind::Cutoff:
    case BaseKind::CutoffComplement: {
      bool inner = kind_ == BaseKind::Cutoff;
      double y = std::exp(v);
      if (y <= 0.5) return inner ? BaseEval{0, 1, 0} : none;
      if (y >= 1) return inner ? none : BaseEval{0, 1, 0};
      double x = 2 * y - 1;
      double z = -1 / x + 1 / (1 - x);
      double dz_dv = (1 / (x * x) + 1 / ((1 - x) * (1 - x))) * 2 * y;
      if (inner) return {-softplus(z), 1, -logistic(z) * dz_dv};
      return {-softplus(-z), 1, logistic(-z) * dz_dv};
    }
    case BaseKind::Bump: {
      double y = std::exp(v);
      double la, dz;
      if (!bump_log((y - params_[0]) / params_[1], la, dz)) return none;
      return {la, 1, dz * y / params_[1]};
    }
    case BaseKind::PowerTail: {
      double alpha = params_[0], beta = params_[1];
      return {-alpha * v + (alpha - beta) * softplus(v), 1, -alpha + (alpha - beta) * logistic(v)};
    }
    case BaseKind::LogBump: {
      double k = params_[0];
      double la, dz;
      if (!bump_log(k * v, la, dz)) return none;
      return {la, 1, k * dz};
    }
    case BaseKind::Indicator:
      if (v > params_[0] && v - params_[0] < params_[1]) return {0, 1, 0};
      return none;
    case BaseKind::UnitPower:
      if (v < 0) return {-params_[0] * v, 1, -params_[0]};
      return none;
    case BaseKind::HardyFailing: {
      if (v <= 0) return none;
      double gamma = params_[0], log_n = params_[1], eps = params_[2];
      double m = 1 - gamma;
      double w = std::min(v, log_n);
      double log_f;
      if (m == 0)
        log_f = std::log(w);
      else if (m > 0)
        log_f = m * w + std::log(-std::expm1(-m * w)) - std::log(m);
      else
        log_f = std::log(-std::expm1(m * w)) - std::log(-m);
      double dlog = -eps;
      if (v < log_n) {
        if (m == 0)
          dlog += 1 / v;
        else if (m > 0)
          dlog += m / -std::expm1(-m * v);
        else
          dlog += -m / std::expm1(-m * v);
      }
      return {log_f - eps * v, 1, dlog};
    }
  }
  return none;
}

void RadialProfile::base_support(double& v_lo, double& v_hi) const {
  v_lo = -kInf;
  v_hi = kInf;
  switch (kind_) {
    case BaseKind::Zero: v_lo = kInf, v_hi = -kInf; break;
    case BaseKind::Cutoff: v_hi = 0; break;
    case BaseKind::CutoffComplement: v_lo = std::log(0.5); break;
    case BaseKind::Bump:
      if (params_[0] - params_[1] > 0) v_lo = std::log(params_[0] - params_[1]);
      v_hi = std::log(params_[0] + params_[1]);
      break;
    case BaseKind::PowerTail: break;
    case BaseKind::LogBump: v_lo = -1 / params_[0], v_hi = 1 / params_[0]; break;
    case BaseKind::Indicator: v_lo = params_[0], v_hi = params_[0] + params_[1]; break;
    case BaseKind::UnitPower: v_hi = 0; break;
    case BaseKind::HardyFailing: v_lo = 0; break;
  }
}

std::vector<double> RadialProfile::base_breakpoints() const {
  switch (kind_) {
    case BaseKind::Cutoff:
    case BaseKind::CutoffComplement: return {std::log(0.5), 0.0};
    case BaseKind::Bump: {
      std::vector<double> out;
      if (params_[0] - params_[1] > 0) out.push_back(std::log(params_[0] - params_[1]));
      if (params_[0] > 0) out.push_back(std::log(params_[0]));
      out.push_back(std::log(params_[0] + params_[1]));
      return out;
    }
    case BaseKind::PowerTail: return {0.0};
    case BaseKind::LogBump: return {-1 / params_[0], 0.0, 1 / params_[0]};
    case BaseKind::Indicator: return {params_[0], params_[0] + params_[1]};
    case BaseKind::UnitPower: return {0.0};
    case BaseKind::HardyFailing: return {0.0, params_[1]};
    default: return {};
  }
}

EndBehaviour RadialProfile::base_end(bool y_to_zero) const {
  EndBehaviour vanish;
  auto power_like = [](double kappa, double gap) { return EndBehaviour{false, kappa, gap}; };
  switch (kind_) {
    case BaseKind::Zero: return vanish;
    case BaseKind::Cutoff: return y_to_zero ? power_like(0, kInf) : vanish;
    case BaseKind::CutoffComplement: return y_to_zero ? vanish : power_like(0, kInf);
    case BaseKind::Bump:
      if (!y_to_zero || params_[0] - params_[1] >= 0) return vanish;
      return power_like(0, params_[0] == 0 ? 2 : 1);
    case BaseKind::PowerTail: return power_like(y_to_zero ? params_[0] : params_[1], 1);
    case BaseKind::LogBump: return vanish;
    case BaseKind::Indicator: return vanish;
    case BaseKind::UnitPower: return y_to_zero ? power_like(params_[0], kInf) : vanish;
    case BaseKind::HardyFailing: return y_to_zero ? vanish : power_like(params_[2], kInf);
  }
  return vanish;
}

LogValue RadialProfile::reduced_value_log(double s) const {
  BaseEval b = base(v_of(s));
  if (b.sign == 0) return {};
  return {log_amplitude_ + b.log_abs, b.sign};
}

LogValue RadialProfile::reduced_derivative_log(double s) const {
  BaseEval b = base(v_of(s));
  if (b.sign == 0) return {};
  double bracket = -power_ + orientation_ * b.dlog;
  if (bracket == 0) return {};
  return {log_amplitude_ + b.log_abs + std::log(std::fabs(bracket)), bracket > 0 ? b.sign : -b.sign};
}

LogValue RadialProfile::value_log(double s) const {
  LogValue r = reduced_value_log(s);
  if (!r.zero()) r.log_abs -= power_ * s;
  return r;
}

LogValue RadialProfile::derivative_log(double s) const {
  LogValue r = reduced_derivative_log(s);
  if (!r.zero()) r.log_abs -= (power_ + 1) * s;
  return r;
}

double RadialProfile::value(double t) const { return value_log(std::log(t)).value(); }
double RadialProfile::derivative(double t) const { return derivative_log(std::log(t)).value(); }

double RadialProfile::support_lo() const {
  double v_lo, v_hi;
  base_support(v_lo, v_hi);
  return orientation_ > 0 ? s_of(v_lo) : s_of(v_hi);
}

double RadialProfile::support_hi() const {
  double v_lo, v_hi;
  base_support(v_lo, v_hi);
  return orientation_ > 0 ? s_of(v_hi) : s_of(v_lo);
}

std::vector<double> RadialProfile::breakpoints() const {
  std::vector<double> out;
  for (double v : base_breakpoints()) out.push_back(s_of(v));
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<double> RadialProfile::exponent(bool at_zero) const {
  bool y_to_zero = (orientation_ > 0) == at_zero;
  EndBehaviour e = base_end(y_to_zero);
  if (e.vanishes) return std::nullopt;
  return -power_ - orientation_ * e.kappa;
}

std::optional<double> RadialProfile::derivative_exponent(bool at_zero) const {
  bool y_to_zero = (orientation_ > 0) == at_zero;
  EndBehaviour e = base_end(y_to_zero);
  if (e.vanishes) return std::nullopt;
  double ex = -power_ - orientation_ * e.kappa;
  if (std::fabs(ex) > kExponentTol) return ex - 1;
  if (std::isinf(e.gap)) return std::nullopt;
  return at_zero ? e.gap - 1 : -e.gap - 1;
}

RadialProfile::Piece RadialProfile::piece() const {
  if (!piecewise_power()) throw std::logic_error("piece() needs an Indicator or PowerOnUnit profile");
  Piece out{support_lo(), support_hi(), kInf, log_amplitude_, power_};
  if (kind_ == BaseKind::Indicator) out.width = params_[1];
  if (kind_ == BaseKind::UnitPower) {
    // y^-kappa = exp(-kappa log_scale) t^(-orientation kappa)
    out.log_amplitude -= params_[0] * log_scale_;
    out.power += orientation_ * params_[0];
  }
  return out;
}

std::string RadialProfile::kind_name() const { return kind_label(kind_); }

Json RadialProfile::to_json() const {
  Json j;
  j["kind"] = kind_name();
  Json ps = Json::object();
  auto names = param_names(kind_);
  for (std::size_t i = 0; i < names.size(); ++i) ps[names[i]] = params_[i];
  j["params"] = ps;
  j["power"] = power_;
  j["log_amplitude"] = log_amplitude_;
  j["log_scale"] = log_scale_;
  j["orientation"] = orientation_;
  return j;
}

RadialProfile RadialProfile::from_json(const Json& j) {
  RadialProfile f;
  std::string name = j.at("kind").get<std::string>();
  bool found = false;
  for (const auto& [kind, label] : kKindNames)
    if (name == label) f.kind_ = kind, found = true;
  if (!found) throw std::invalid_argument("unknown profile kind '" + name + "'");
  auto names = param_names(f.kind_);
  for (std::size_t i = 0; i < names.size(); ++i) f.params_[i] = j.at("params").at(names[i]).get<double>();
  f.power_ = j.at("power").get<double>();
  f.log_amplitude_ = j.at("log_amplitude").get<double>();
  f.log_scale_ = j.at("log_scale").get<double>();
  f.orientation_ = j.at("orientation").get<int>();
  if (f.orientation_ != 1 && f.orientation_ != -1) throw std::invalid_argument("orientation must be +1 or -1");
  return f;
}

std::string to_string(Angular a) {
  switch (a) {
    case Angular::Radial: return "Radial";
    case Angular::FirstHarmonic: return "FirstHarmonic";
    case Angular::Translated: return "TranslatedRadial";
  }
  return "?";
}

Json TestFunction::to_json() const {
  Json j;
  j["angular"] = to_string(angular);
  if (angular == Angular::Translated) j["log_offset"] = log_offset;
  j["profile"] = profile.to_json();
  return j;
}

TestFunction TestFunction::from_json(const Json& j) {
  TestFunction u;
  std::string a = j.at("angular").get<std::string>();
  if (a == "Radial")
    u.angular = Angular::Radial;
  else if (a == "FirstHarmonic")
    u.angular = Angular::FirstHarmonic;
  else if (a == "TranslatedRadial")
    u.angular = Angular::Translated, u.log_offset = j.at("log_offset").get<double>();
  else
    throw std::invalid_argument("unknown angular part '" + a + "'");
  u.profile = RadialProfile::from_json(j.at("profile"));
  return u;
}

RadialProfile spherical_mean(const TestFunction& u) {
  switch (u.angular) {
    case Angular::Radial: return u.profile;
    case Angular::FirstHarmonic: return RadialProfile::zero();
    case Angular::Translated: break;
  }
  throw std::invalid_argument("spherical mean of a translated function is not supported");
}

TestFunction dilate_log(const TestFunction& u, double log_lambda) {
  TestFunction out = u;
  out.profile = u.profile.dilated_log(log_lambda);
  if (u.angular == Angular::Translated) out.log_offset = u.log_offset - log_lambda;
  return out;
}

TestFunction dilate(const TestFunction& u, double lambda) {
  if (!(lambda > 0)) throw std::invalid_argument("dilation factor must be positive");
  return dilate_log(u, std::log(lambda));
}

TestFunction kelvin_function(const TestFunction& u) {
  if (u.angular == Angular::Translated) throw std::invalid_argument("Kelvin transform of a translated function is not supported");
  TestFunction out = u;
  out.profile = u.profile.inverted();
  return out;
}

}  // namespace ckn
