#include "ckn/witness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ckn {

namespace {

constexpr double kLn2 = std::numbers::ln2;

struct Slopes {
  double a, b, c;  // (a+N)/q, (b-p+N)/p, (c+N)/r
};

Slopes slopes(const Params& pr) {
  auto d = derive(pr);
  return {d.slope_a.to_double(), d.slope_b.to_double(), ((pr.c + pr.n) / pr.r).to_double()};
}

// Exponent steps per index so that a ratio growing like 2^(delta * step) at least doubles per index.
int steps_per_index(double delta) {
  if (!(delta > 0)) return 1;
  return std::max(1, static_cast<int>(std::ceil(1 / delta - 1e-12)));
}

int index_cap(int steps, int max_exponent, int cap = 40) { return std::max(1, std::min(cap, max_exponent / steps)); }

TestFunction translated_log(RadialProfile f, double log_distance) {
  return {std::move(f), Angular::Translated, log_distance};
}

double hardy_eps(double log_n) { return 1 / (log_n + std::log1p(2 * std::exp(-log_n))); }

WitnessFamily hull_family(const Params& pr) {
  WitnessFamily w;
  Slopes s = slopes(pr);
  w.single = true;
  w.last_index = 1;
  if (s.c < std::min(s.a, s.b)) {
    w.description = "|x|^-((c+N)/r) zeta(x): target integrand ~ |x|^-N at the origin";
    w.member = [g = s.c](int) { return TestFunction::radial(RadialProfile::power_cutoff_inner(g)); };
  } else {
    w.description = "|x|^-((c+N)/r) (1 - zeta(x)): target integrand ~ |x|^-N at infinity";
    w.member = [g = s.c](int) { return TestFunction::radial(RadialProfile::power_cutoff_outer(g)); };
  }
  return w;
}

WitnessFamily window_family(const Params& pr) {
  WitnessFamily w;
  w.single = true;
  w.last_index = 1;
  if ((pr.a + pr.n).sign() > 0) {
    w.description = "zeta: equal to 1 near the origin, where |x|^c is not integrable";
    w.member = [](int) { return TestFunction::radial(RadialProfile::power_cutoff_inner(0)); };
  } else {
    w.description = "1 - zeta: equal to 1 near infinity, where |x|^c is not integrable";
    w.member = [](int) { return TestFunction::radial(RadialProfile::power_cutoff_outer(0)); };
  }
  return w;
}

WitnessFamily endpoint_c0_family(const Params& pr) {
  WitnessFamily w;
  w.metric = WitnessMetric::Reduced;
  Slopes s = slopes(pr);
  double lift = s.a - 1 / pr.r.to_double();  // u = t^(1/r - (a+N)/q) g
  double delta = std::fabs(1 / pr.q.to_double() - 1 / pr.r.to_double());
  int m = steps_per_index(delta);
  if (pr.r > pr.q) {
    w.last_index = index_cap(m, 1000);
    w.description = "t^(1/r-(a+N)/q) g with g = indicator of (n, n+1), n = 2^(" + std::to_string(m) + "k)";
    w.member = [lift, m](int k) {
      double log_n = m * k * kLn2;
      auto g = RadialProfile::indicator_log(log_n, std::log1p(std::exp(-log_n)));
      return TestFunction::radial(g.multiply_power(lift));
    };
  } else {
    w.last_index = index_cap(m, 30);
    w.description = "t^(1/r-(a+N)/q) g with g = t^(1/n-1/r) on (0,1), n = 2^(" + std::to_string(m) + "k)";
    w.member = [lift, m, r = pr.r.to_double()](int k) {
      double inv_n = std::exp(-m * k * kLn2);
      return TestFunction::radial(RadialProfile::power_on_unit(1 / r - inv_n).multiply_power(lift));
    };
  }
  return w;
}

WitnessFamily endpoint_c1_family(const Params& pr) {
  WitnessFamily w;
  w.dilation = DilationPolicy::SuppressSource;
  Slopes s = slopes(pr);
  w.kelvin = s.b > 0;
  Params base = w.kelvin ? kelvin_params(pr) : pr;
  double gamma = ((base.b + base.n) / base.p).to_double();
  bool perturb = base.a == Rational(-base.n);
  double delta = 1 / pr.r.to_double() - 1 / pr.p.to_double();
  int m = steps_per_index(delta);
  w.last_index = index_cap(m, 60);
  w.description = std::string(w.kelvin ? "Kelvin image of " : "") + "f_n(t) = integral_1^min(t,n) tau^-((b+N)/p) dtau" +
                  (perturb ? " times t^-eps_n, eps_n = 1/log(n+2)" : "") + ", ln n = 2^(" + std::to_string(m) + "k)";
  w.member = [gamma, perturb, m, kelvin = w.kelvin](int k) {
    double log_n = std::exp(m * k * kLn2);
    auto f = RadialProfile::hardy_failing(gamma, log_n, perturb ? hardy_eps(log_n) : 0.0);
    return TestFunction::radial(kelvin ? f.inverted() : f);
  };
  return w;
}

WitnessFamily log_modulated_family(const Params& pr, bool eta_zero) {
  WitnessFamily w;
  Slopes s = slopes(pr);
  double inv_r = 1 / pr.r.to_double();
  double delta = eta_zero ? inv_r - 1 / pr.q.to_double() : inv_r - 1 / min(pr.p, pr.q).to_double();
  int m = steps_per_index(delta);
  w.last_index = index_cap(m, 1000);
  double eta = eta_zero ? 0.0 : s.a;
  w.description = "t^-eta psi(k ln t) with eta = " + std::to_string(eta) + ", k = 2^-(" + std::to_string(m) + "n)";
  w.member = [eta, m](int n) {
    return TestFunction::radial(RadialProfile::log_modulated(eta, std::exp(-m * n * kLn2)));
  };
  return w;
}

WitnessFamily translated_family(const Params& pr) {
  WitnessFamily w;
  Slopes s = slopes(pr);
  auto d = derive(pr);
  double n = pr.n;
  auto ball = RadialProfile::smooth_bump(0, 1);
  bool grows_by_dilation = false;
  if (d.theta_c) {
    double theta = d.theta_c->to_double();
    if (theta >= 0 && theta <= 1) {
      w.dilation = DilationPolicy::BalanceAdditive;
      w.theta = theta;
      double k = theta_condition_coefficient(pr).to_double(), l = theta_condition_bound(pr).to_double();
      int m = steps_per_index(n * (theta * k - l));
      w.last_index = index_cap(m, 1000);
      w.description = "unit ball bump translated to |x0| = 2^(" + std::to_string(m) + "n), dilated to balance Q and G";
      w.member = [ball, m](int i) { return translated_log(ball, m * i * kLn2); };
      return w;
    }
    grows_by_dilation = true;
  } else {
    grows_by_dilation = std::fabs(s.c - s.a) > 1e-12;
  }
  if (grows_by_dilation) {
    // ratio ~ lambda^-(gamma_c - min gamma) as lambda -> inf, lambda^(max gamma - gamma_c) as lambda -> 0
    double lo = std::min(s.a, s.b), hi = std::max(s.a, s.b);
    int dir = s.c < lo ? 1 : -1;
    int m = steps_per_index(dir > 0 ? lo - s.c : s.c - hi);
    w.dilation = DilationPolicy::Fixed;
    w.last_index = index_cap(m, 1000);
    w.description = "unit ball bump at |x0| = 2 dilated by 2^(" + std::string(dir > 0 ? "" : "-") + std::to_string(m) + "n)";
    w.member = [ball](int) { return translated_log(ball, kLn2); };
    w.log_lambda = [dir, m](int i) { return dir * m * i * kLn2; };
    return w;
  }
  double delta = std::min(n / pr.q.to_double(), n / pr.p.to_double() - 1) - n / pr.r.to_double();
  int m = steps_per_index(delta);
  w.last_index = index_cap(m, 1000);
  w.description = "unit ball bump translated to |x0| = 2^(" + std::to_string(m) + "n)";
  w.member = [ball, m](int i) { return translated_log(ball, m * i * kLn2); };
  return w;
}

}  // namespace

WitnessFamily witness_for(Reason reason, const Params& params) {
  Verdict v = classify(params);
  if (v.embeds() || v.reason != reason)
    throw std::invalid_argument("witness reason " + to_string(reason) + " does not match the classification of these parameters");
  WitnessFamily w;
  switch (reason) {
    case Reason::COutsideHull: w = hull_family(params); break;
    case Reason::COutsideOppositeSideWindow: w = window_family(params); break;
    case Reason::EndpointC0WrongR: w = endpoint_c0_family(params); break;
    case Reason::EndpointC1SmallR: w = endpoint_c1_family(params); break;
    case Reason::EqualSlopesSmallR: w = log_modulated_family(params, false); break;
    case Reason::EtaZeroSmallR: w = log_modulated_family(params, true); break;
    case Reason::ROutOfRange:
    case Reason::ThetaConditionFails: w = translated_family(params); break;
  }
  w.reason = reason;
  w.params = params;
  return w;
}

WitnessFamily witness_for(const Params& params) {
  Verdict v = classify(params);
  if (v.embeds()) throw std::invalid_argument("parameters embed; there is no counterexample family");
  return witness_for(*v.reason, params);
}

WitnessFamily multiplicative_witness(const Params& params, double theta) {
  auto d = derive(params);
  if (!d.eta || params.c != endpoint_c0(params))
    throw std::invalid_argument("the log-modulated multiplicative witness needs equal slopes and c = c0 = c1");
  double eta = d.eta->to_double();
  double g = 1 / params.p.to_double() - (eta == 0 ? 1 : 0);
  // T / (G^theta Q^(1-theta)) ~ k^e
  double e = -1 / params.r.to_double() + (1 - theta) / params.q.to_double() + theta * g;
  int dir = e > 0 ? 1 : -1;
  int m = steps_per_index(std::fabs(e));
  WitnessFamily w;
  w.reason = Reason::ThetaConditionFails;
  w.params = params;
  w.metric = WitnessMetric::Multiplicative;
  w.theta = theta;
  w.first_index = 1;
  w.last_index = index_cap(m, 1000, 250);
  w.description = "t^-eta psi(k ln t) with eta = " + std::to_string(eta) + ", k = 2^(" + (dir > 0 ? "" : "-") +
                  std::to_string(m) + "n)";
  w.member = [eta, dir, m](int n) {
    return TestFunction::radial(RadialProfile::log_modulated(eta, std::exp(dir * m * n * kLn2)));
  };
  return w;
}

std::vector<TestFunction> verification_family(const Params& params, Angular angular) {
  Slopes s = slopes(params);
  auto nudge = [](double x, double away) { return std::fabs(x) < 0.125 ? x + away : x; };
  double alpha = nudge(std::min(s.a, s.b) - 0.5, -0.25);
  double beta = nudge(std::max(s.a, s.b) + 0.5, 0.25);
  std::vector<RadialProfile> profiles = {
      RadialProfile::smooth_bump(1, 0.5),  RadialProfile::smooth_bump(2, 1),      RadialProfile::smooth_bump(1.5, 0.25),
      RadialProfile::smooth_bump(4, 3),    RadialProfile::smooth_bump(0.5, 0.25), RadialProfile::smooth_bump(8, 4),
      RadialProfile::power_tail(alpha, beta), RadialProfile::power_tail(alpha - 0.25, beta + 0.25),
  };
  std::vector<TestFunction> out;
  for (auto& f : profiles) out.push_back({f, angular, 0});
  return out;
}

std::string to_string(DilationPolicy p) {
  switch (p) {
    case DilationPolicy::None: return "None";
    case DilationPolicy::BalanceAdditive: return "BalanceAdditive";
    case DilationPolicy::SuppressSource: return "SuppressSource";
    case DilationPolicy::Fixed: return "Fixed";
  }
  return "?";
}

std::string to_string(WitnessMetric m) {
  switch (m) {
    case WitnessMetric::Additive: return "Additive";
    case WitnessMetric::Reduced: return "Reduced";
    case WitnessMetric::Multiplicative: return "Multiplicative";
  }
  return "?";
}

Json WitnessFamily::to_json() const {
  Json j;
  j["reason"] = to_string(reason);
  j["description"] = description;
  j["metric"] = to_string(metric);
  j["dilation"] = to_string(dilation);
  if (theta) j["theta"] = *theta;
  j["kelvin"] = kelvin;
  j["single"] = single;
  j["index_range"] = {first_index, last_index};
  return j;
}

}  // namespace ckn
