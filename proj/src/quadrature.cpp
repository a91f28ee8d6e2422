#include "ckn/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <queue>

namespace ckn {

namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
using Gauss = boost::math::quadrature::gauss<double, 7>;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLn2 = std::numbers::ln2;

double log_sum(double x, double y) {
  if (x < y) std::swap(x, y);
  if (y == -kInf) return x;
  return x + std::log1p(std::exp(y - x));
}

struct Panel {
  double a, b;
  double log_val, log_err;
  bool operator<(const Panel& o) const { return log_err < o.log_err; }
};

Panel kronrod_panel(const LogIntegrand& g, double a, double b) {
  const auto& xk = Kronrod::abscissa();
  const auto& wk = Kronrod::weights();
  const auto& wg = Gauss::weights();
  double half = (b - a) / 2, mid = a + half;
  double lv[15];
  lv[0] = g.log_value(mid);
  for (int i = 1; i < 8; ++i) {
    lv[2 * i - 1] = g.log_value(mid - half * xk[i]);
    lv[2 * i] = g.log_value(mid + half * xk[i]);
  }
  double m = *std::max_element(lv, lv + 15);
  if (std::isnan(m) || m == kInf) throw QuadratureError("integrand is not finite on a panel");
  if (m == -kInf) return {a, b, -kInf, -kInf};
  double fv[15];
  for (int i = 0; i < 15; ++i) fv[i] = std::exp(lv[i] - m);
  double k = wk[0] * fv[0], gs = wg[0] * fv[0];
  for (int i = 1; i < 8; ++i) {
    double pair = fv[2 * i - 1] + fv[2 * i];
    k += wk[i] * pair;
    if (i % 2 == 0) gs += wg[i / 2] * pair;
  }
  double mean = k / 2;
  double asc = wk[0] * std::fabs(fv[0] - mean);
  for (int i = 1; i < 8; ++i) asc += wk[i] * (std::fabs(fv[2 * i - 1] - mean) + std::fabs(fv[2 * i] - mean));
  double err = std::fabs(k - gs);
  if (asc != 0 && err != 0) err = asc * std::min(1.0, std::pow(200 * err / asc, 1.5));
  err = std::max(err, 50 * std::numeric_limits<double>::epsilon() * k);
  return {a, b, m + std::log(k * half), m + std::log(err * half)};
}

struct LogResult {
  double log_val = -kInf;
  double log_err = -kInf;
};

LogResult sum_panels(const std::vector<Panel>& panels) {
  LogResult r;
  for (const auto& p : panels) {
    r.log_val = log_sum(r.log_val, p.log_val);
    r.log_err = log_sum(r.log_err, p.log_err);
  }
  return r;
}

// Global adaptive bisection on the panel with the largest error.
LogResult refine(const LogIntegrand& g, const std::vector<Panel>& initial, const QuadratureConfig& cfg,
                 double extra_log_err = -kInf) {
  std::priority_queue<Panel> heap(initial.begin(), initial.end());
  LogResult total = sum_panels(initial);
  if (total.log_val == -kInf) return total;
  double ref = total.log_val;
  double val = std::exp(total.log_val - ref), err = std::exp(total.log_err - ref);
  double extra = std::exp(extra_log_err - ref);
  double log_abs_tol = cfg.abs_tol > 0 ? std::log(cfg.abs_tol) : -kInf;
  int steps = 0;
  auto converged = [&] {
    double e = err + extra;
    return e <= cfg.rel_tol * val || ref + std::log(e) <= log_abs_tol;
  };
  while (!converged()) {
    if (++steps > cfg.max_subdivisions) throw QuadratureError("quadrature did not converge within the subdivision limit");
    Panel worst = heap.top();
    heap.pop();
    double m = worst.a + (worst.b - worst.a) / 2;
    if (!(m > worst.a && m < worst.b)) throw QuadratureError("quadrature panel cannot be bisected further");
    Panel left = kronrod_panel(g, worst.a, m), right = kronrod_panel(g, m, worst.b);
    val += std::exp(left.log_val - ref) + std::exp(right.log_val - ref) - std::exp(worst.log_val - ref);
    err += std::exp(left.log_err - ref) + std::exp(right.log_err - ref) - std::exp(worst.log_err - ref);
    heap.push(left);
    heap.push(right);
    if (steps % 256 == 0) {
      // resum to shed cancellation in the running totals
      val = err = 0;
      auto copy = heap;
      while (!copy.empty()) {
        val += std::exp(copy.top().log_val - ref);
        err += std::exp(copy.top().log_err - ref);
        copy.pop();
      }
    }
  }
  std::vector<Panel> all;
  while (!heap.empty()) all.push_back(heap.top()), heap.pop();
  LogResult out = sum_panels(all);
  out.log_err = log_sum(out.log_err, extra_log_err);
  return out;
}

LogResult integrate_panel(const LogIntegrand& g, double a, double b, const QuadratureConfig& cfg) {
  return refine(g, {kronrod_panel(g, a, b)}, cfg);
}

// Ten outward panels of width ln 2 starting 40 ln 2 past the anchor must not shrink.
bool panels_non_summable(const LogIntegrand& g, double anchor, int direction, const QuadratureConfig& cfg) {
  double start = anchor + direction * 40 * kLn2;
  double prev = 0;
  for (int k = 0; k < 10; ++k) {
    double x0 = start + direction * k * kLn2, x1 = x0 + direction * kLn2;
    double v = integrate_panel(g, std::min(x0, x1), std::max(x0, x1), cfg).log_val;
    if (v == -kInf) return false;
    if (k > 0 && v - prev < std::log1p(-cfg.rel_tol)) return false;
    prev = v;
  }
  return true;
}

LogIntegral integrate_impl(LogIntegrand g, const QuadratureConfig& cfg) {
  std::vector<double> cuts;
  if (std::isfinite(g.lo)) cuts.push_back(g.lo);
  for (double b : g.breaks)
    if (b > g.lo && b < g.hi) cuts.push_back(b);
  if (std::isfinite(g.hi)) cuts.push_back(g.hi);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  if (cuts.empty()) cuts.push_back(0);

  // Ends where the integrand is identically zero past the last cut.
  if (g.lo == -kInf && !g.rate_lo) g.lo = cuts.front();
  if (g.hi == kInf && !g.rate_hi) g.hi = cuts.back();
  LogIntegral out;
  if (!(g.lo < g.hi)) return out;

  auto certify = [&](double anchor, int direction, NormStatus status) {
    if (!panels_non_summable(g, anchor, direction, cfg))
      throw QuadratureError("divergence predicted by the end exponent is not confirmed by panel growth");
    out.status = status;
    return out;
  };
  if (g.lo == -kInf && *g.rate_lo <= cfg.exponent_tol) return certify(cuts.front(), -1, NormStatus::DivergentAtZero);
  if (g.hi == kInf && *g.rate_hi >= -cfg.exponent_tol) return certify(cuts.back(), 1, NormStatus::DivergentAtInfinity);

  std::vector<Panel> panels;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double left = std::max(cuts[i], g.lo), right = std::min(cuts[i + 1], g.hi);
    double w = kLn2;
    while (right - left > 2 * w) {
      panels.push_back(kronrod_panel(g, left, left + w));
      panels.push_back(kronrod_panel(g, right - w, right));
      left += w;
      right -= w;
      w *= 2;
    }
    if (right > left) panels.push_back(kronrod_panel(g, left, right));
  }

  double tail_err = -kInf;
  auto march = [&](double anchor, int direction, double rate) {
    double x = anchor, w = kLn2;
    double log_small = std::log(cfg.rel_tol * 1e-2);
    for (int count = 0;; ++count) {
      if (count >= cfg.max_tail_panels) throw QuadratureError("tail panels did not decay within the panel limit");
      double y = x + direction * w;
      Panel p = kronrod_panel(g, std::min(x, y), std::max(x, y));
      panels.push_back(p);
      double total = sum_panels(panels).log_val;
      double tail = g.log_value(y) - std::log(std::fabs(rate));
      x = y;
      if (count >= 7) {
        if (p.log_val <= total + log_small && tail <= total + log_small) {
          tail_err = log_sum(tail_err, tail);
          return;
        }
        w *= 2;
      }
    }
  };
  if (g.lo == -kInf) march(cuts.front(), -1, *g.rate_lo);
  if (g.hi == kInf) march(cuts.back(), 1, *g.rate_hi);

  LogResult r = refine(g, panels, cfg, tail_err);
  out.log_value = r.log_val;
  out.log_error = r.log_err;
  return out;
}

NormValue to_norm(const LogIntegral& in, double log_measure, double s) {
  NormValue v;
  v.status = in.status;
  if (!v.finite()) {
    v.log_value = kInf;
    return v;
  }
  if (in.log_value == -kInf) return v;
  v.log_value = (log_measure + in.log_value) / s;
  v.rel_error = std::exp(in.log_error - in.log_value) / s;
  return v;
}

std::optional<double> rate(double weight, double s, std::optional<double> exponent) {
  if (!exponent) return std::nullopt;
  return weight + s * *exponent;
}

// Closed form over a piecewise-power profile: int_{s0}^{s1} exp(log_amp + w s) ds, width = s1 - s0.
LogIntegral piece_integral(double s0, double s1, double width, double log_amp, double w, const QuadratureConfig& cfg) {
  LogIntegral out;
  if (s0 == -kInf && w <= cfg.exponent_tol) {
    out.status = NormStatus::DivergentAtZero;
    return out;
  }
  if (s1 == kInf && w >= -cfg.exponent_tol) {
    out.status = NormStatus::DivergentAtInfinity;
    return out;
  }
  if (w == 0)
    out.log_value = log_amp + std::log(width);
  else if (w > 0)
    out.log_value = log_amp + w * s1 + std::log(-std::expm1(-w * width)) - std::log(w);
  else
    out.log_value = log_amp + w * s0 + std::log(-std::expm1(w * width)) - std::log(-w);
  return out;
}

double log_beta(double x, double y) { return std::lgamma(x) + std::lgamma(y) - std::lgamma(x + y); }

// ln of int_{S^(n-1)} |sigma_1|^s
double log_first_harmonic_factor(double s, int n) {
  return log_sphere_area(n - 1) + log_beta((s + 1) / 2, (n - 1) / 2.0);
}

// Weight and profile exponents are combined before multiplying by s; balanced exponents become exactly 0.
double net_exponent(double weight, double s, double power, const QuadratureConfig& cfg) {
  double w = weight - s * power;
  return std::fabs(w) <= cfg.exponent_tol * std::max(1.0, std::fabs(weight)) ? 0.0 : w;
}

LogIntegrand radial_integrand(const RadialProfile& f, double d, double s, int n, const QuadratureConfig& cfg) {
  LogIntegrand g;
  g.log_value = [f, w = net_exponent(d + n, s, f.power(), cfg), s](double x) {
    return w * x + s * f.reduced_value_log(x).log_abs;
  };
  g.lo = f.support_lo();
  g.hi = f.support_hi();
  g.breaks = f.breakpoints();
  g.rate_lo = rate(d + n, s, f.exponent(true));
  g.rate_hi = rate(d + n, s, f.exponent(false));
  return g;
}

LogIntegrand derivative_integrand(const RadialProfile& f, double b, double p, int n, const QuadratureConfig& cfg) {
  LogIntegrand g;
  g.log_value = [f, w = net_exponent(b + n, p, f.power() + 1, cfg), p](double x) {
    return w * x + p * f.reduced_derivative_log(x).log_abs;
  };
  g.lo = f.support_lo();
  g.hi = f.support_hi();
  g.breaks = f.breakpoints();
  g.rate_lo = rate(b + n, p, f.derivative_exponent(true));
  g.rate_hi = rate(b + n, p, f.derivative_exponent(false));
  return g;
}

// ln of 2 int_0^{pi/2} (alpha^2 cos^2 + beta^2 sin^2)^(p/2) sin^(n-2) dphi, max(alpha, beta) = 1.
double log_harmonic_gradient_angle(double alpha, double beta, double p, int n) {
  auto h = [=](double phi) {
    double c = std::cos(phi), s = std::sin(phi);
    double base = alpha * alpha * c * c + beta * beta * s * s;
    double wgt = n == 2 ? 1.0 : std::pow(s, n - 2);
    return std::pow(base, p / 2) * wgt;
  };
  double err;
  double v = Kronrod::integrate(h, 0.0, std::numbers::pi / 2, 15, 1e-13, &err);
  return std::log(2 * v);
}

// ln of int_0^pi |x/D|^d sin^(n-2) dphi with |x|^2 = D^2((1-r)^2 + 4 r cos^2(phi/2)); the two-point sum for n = 1.
double log_translated_angle(double r, double d, int n) {
  if (n == 1) return std::log(std::pow(1 + r, d) + std::pow(1 - r, d));
  auto h = [=](double phi) {
    double c = std::cos(phi / 2);
    double rho2 = (1 - r) * (1 - r) + 4 * r * c * c;
    double wgt = n == 2 ? 1.0 : std::pow(std::sin(phi), n - 2);
    return std::pow(rho2, d / 2) * wgt;
  };
  double err;
  double v = Kronrod::integrate(h, 0.0, std::numbers::pi, 15, 1e-13, &err);
  return std::log(v);
}

void check_exponent(double s, const char* what) {
  if (!(s > 0)) throw std::invalid_argument(std::string(what) + " must be positive");
}

void check_translated(const TestFunction& u) {
  if (!(u.profile.support_hi() < u.log_offset))
    throw std::invalid_argument("translated profile must be supported inside the offset distance");
}

LogIntegrand translated_integrand(const TestFunction& u, double d, double s, int n, bool gradient,
                                  const QuadratureConfig& cfg) {
  const RadialProfile& f = u.profile;
  LogIntegrand g;
  double log_d = u.log_offset;
  double w = net_exponent(n, s, gradient ? f.power() + 1 : f.power(), cfg);
  g.log_value = [f, d, s, n, w, log_d, gradient](double x) {
    LogValue fv = gradient ? f.reduced_derivative_log(x) : f.reduced_value_log(x);
    if (fv.zero()) return -kInf;
    return w * x + s * fv.log_abs + d * log_d + log_translated_angle(std::exp(x - log_d), d, n);
  };
  g.lo = f.support_lo();
  g.hi = f.support_hi();
  g.breaks = f.breakpoints();
  g.rate_lo = rate(n, s, gradient ? f.derivative_exponent(true) : f.exponent(true));
  return g;
}

}  // namespace

LogIntegral integrate_log(LogIntegrand g, const QuadratureConfig& cfg) { return integrate_impl(std::move(g), cfg); }

double NormValue::value() const { return finite() ? std::exp(log_value) : kInf; }

double log_sphere_area(int n) {
  if (n < 1) throw std::invalid_argument("sphere dimension must be at least 0");
  return std::log(2.0) + (n / 2.0) * std::log(std::numbers::pi) - std::lgamma(n / 2.0);
}

QuadratureConfig QuadratureConfig::from_env() {
  QuadratureConfig cfg;
  if (const char* env = std::getenv("CKN_QUAD_TOL")) {
    char* end = nullptr;
    double tol = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(tol > 0) || !(tol < 1))
      throw std::invalid_argument("CKN_QUAD_TOL must be a number in (0, 1)");
    cfg.rel_tol = tol;
  }
  return cfg;
}

NormValue weighted_norm_radial(const RadialProfile& f, double d, double s, int n, const QuadratureConfig& cfg) {
  check_exponent(s, "norm exponent");
  double log_area = log_sphere_area(n);
  if (f.piecewise_power()) {
    auto pc = f.piece();
    return to_norm(piece_integral(pc.s_lo, pc.s_hi, pc.width, s * pc.log_amplitude, d + n - s * pc.power, cfg), log_area, s);
  }
  return to_norm(integrate_impl(radial_integrand(f, d, s, n, cfg), cfg), log_area, s);
}

NormValue weighted_norm_radial(const RadialProfile& f, const Rational& d, const Rational& s, int n,
                               const QuadratureConfig& cfg) {
  return weighted_norm_radial(f, d.to_double(), s.to_double(), n, cfg);
}

NormValue weighted_norm(const TestFunction& u, double d, double s, int n, const QuadratureConfig& cfg) {
  check_exponent(s, "norm exponent");
  switch (u.angular) {
    case Angular::Radial: return weighted_norm_radial(u.profile, d, s, n, cfg);
    case Angular::FirstHarmonic: {
      if (n < 2) throw std::invalid_argument("first-harmonic functions need dimension n >= 2");
      NormValue v = weighted_norm_radial(u.profile, d, s, n, cfg);
      if (v.finite() && !v.is_zero()) v.log_value += (log_first_harmonic_factor(s, n) - log_sphere_area(n)) / s;
      return v;
    }
    case Angular::Translated: {
      check_translated(u);
      double log_measure = n == 1 ? 0.0 : log_sphere_area(n - 1);
      return to_norm(integrate_impl(translated_integrand(u, d, s, n, false, cfg), cfg), log_measure, s);
    }
  }
  return {};
}

NormValue weighted_norm_gradient(const TestFunction& u, double b, double p, int n, const QuadratureConfig& cfg) {
  check_exponent(p, "gradient exponent");
  const RadialProfile& f = u.profile;
  switch (u.angular) {
    case Angular::Radial: {
      if (f.piecewise_power()) {
        auto pc = f.piece();
        if (pc.power == 0) return {};
        double log_amp = p * (pc.log_amplitude + std::log(std::fabs(pc.power)));
        return to_norm(piece_integral(pc.s_lo, pc.s_hi, pc.width, log_amp, b + n - p * (pc.power + 1), cfg), log_sphere_area(n), p);
      }
      return to_norm(integrate_impl(derivative_integrand(f, b, p, n, cfg), cfg), log_sphere_area(n), p);
    }
    case Angular::FirstHarmonic: {
      if (n < 2) throw std::invalid_argument("first-harmonic functions need dimension n >= 2");
      LogIntegrand g;
      // f' and f/t share the factor t^-(power + 1)
      g.log_value = [f, w = net_exponent(b + n, p, f.power() + 1, cfg), p, n](double x) {
        double la = f.reduced_derivative_log(x).log_abs;
        double lb = f.reduced_value_log(x).log_abs;
        double m = std::max(la, lb);
        if (m == -kInf) return -kInf;
        return w * x + p * m + log_harmonic_gradient_angle(std::exp(la - m), std::exp(lb - m), p, n);
      };
      g.lo = f.support_lo();
      g.hi = f.support_hi();
      g.breaks = f.breakpoints();
      auto grad_rate = [&](bool at_zero) -> std::optional<double> {
        auto e = f.exponent(at_zero);
        if (!e) return std::nullopt;
        return b + n + p * (*e - 1);
      };
      g.rate_lo = grad_rate(true);
      g.rate_hi = grad_rate(false);
      return to_norm(integrate_impl(g, cfg), log_sphere_area(n - 1), p);
    }
    case Angular::Translated: {
      check_translated(u);
      double log_measure = n == 1 ? 0.0 : log_sphere_area(n - 1);
      return to_norm(integrate_impl(translated_integrand(u, b, p, n, true, cfg), cfg), log_measure, p);
    }
  }
  return {};
}

NormValue weighted_norm_gradient(const TestFunction& u, const Rational& b, const Rational& p, int n,
                                 const QuadratureConfig& cfg) {
  return weighted_norm_gradient(u, b.to_double(), p.to_double(), n, cfg);
}

NormReport measure(const Params& params, const TestFunction& u, std::optional<double> theta,
                   const QuadratureConfig& cfg) {
  NormReport rep;
  rep.theta = theta;
  rep.target = weighted_norm(u, params.c.to_double(), params.r.to_double(), params.n, cfg);
  rep.source = weighted_norm(u, params.a.to_double(), params.q.to_double(), params.n, cfg);
  rep.gradient = weighted_norm_gradient(u, params.b, params.p, params.n, cfg);
  rep.error_estimate = std::max({rep.target.rel_error, rep.source.rel_error, rep.gradient.rel_error});
  if (!rep.source.finite() || !rep.gradient.finite()) {
    rep.status = ReportStatus::DivergentSource;
    return rep;
  }
  if (!rep.target.finite()) {
    rep.status = ReportStatus::DivergentTarget;
    return rep;
  }
  double lq = rep.source.log_value, lg = rep.gradient.log_value, lt = rep.target.log_value;
  double denom = log_sum(lq, lg);
  if (denom > -kInf) rep.log_additive_ratio = lt - denom;
  if (theta) {
    double th = *theta;
    double lm = 0;
    bool ok = true;
    if (th != 0) ok &= lg > -kInf, lm += th * lg;
    if (th != 1) ok &= lq > -kInf, lm += (1 - th) * lq;
    if (ok) rep.log_multiplicative_ratio = lt - lm;
  }
  return rep;
}

std::string to_string(NormStatus s) {
  switch (s) {
    case NormStatus::Finite: return "Finite";
    case NormStatus::DivergentAtZero: return "DivergentAtZero";
    case NormStatus::DivergentAtInfinity: return "DivergentAtInfinity";
  }
  return "?";
}

std::string to_string(ReportStatus s) {
  switch (s) {
    case ReportStatus::Finite: return "Finite";
    case ReportStatus::DivergentTarget: return "DivergentTarget";
    case ReportStatus::DivergentSource: return "DivergentSource";
  }
  return "?";
}

namespace {

Json log_number(double log_x) {
  Json j;
  if (log_x < 709 && log_x > -745) j["value"] = std::exp(log_x);
  else if (log_x == -kInf) j["value"] = 0.0;
  j["log"] = log_x == -kInf ? Json("-inf") : Json(log_x);
  return j;
}

}  // namespace

Json NormValue::to_json() const {
  Json j;
  j["status"] = to_string(status);
  if (finite()) {
    Json v = log_number(log_value);
    for (auto& [k, x] : v.items()) j[k] = x;
    j["rel_error"] = rel_error;
  }
  return j;
}

Json NormReport::to_json() const {
  Json j;
  j["norm_target"] = target.to_json();
  j["norm_source_q"] = source.to_json();
  j["norm_grad"] = gradient.to_json();
  j["status"] = to_string(status);
  if (log_additive_ratio) j["additive_ratio"] = log_number(*log_additive_ratio);
  if (theta) j["theta"] = *theta;
  if (log_multiplicative_ratio) j["multiplicative_ratio"] = log_number(*log_multiplicative_ratio);
  j["error_estimate"] = error_estimate;
  return j;
}

}  // namespace ckn
