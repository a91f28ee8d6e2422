#include "ckn/probe.hpp"

#include "ckn/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ckn {

namespace {

Json log_ratio_json(double log_x) {
  Json j;
  if (std::fabs(log_x) < 700) j["value"] = std::exp(log_x);
  j["log"] = log_x;
  return j;
}

std::optional<double> pick_ratio(const NormReport& r, bool multiplicative) {
  return multiplicative ? r.log_multiplicative_ratio : r.log_additive_ratio;
}

}  // namespace

VerifyReport verify_instance(const Params& params, std::optional<Rational> theta, const std::vector<TestFunction>& family,
                             const std::vector<double>& scales, const QuadratureConfig& cfg) {
  VerifyReport rep;
  rep.params = params;
  rep.theta = theta;
  rep.family = family;
  std::vector<double> lambdas = scales;
  if (std::find(lambdas.begin(), lambdas.end(), 1.0) == lambdas.end()) lambdas.insert(lambdas.begin(), 1.0);
  for (double l : lambdas)
    if (!(l > 0)) throw std::invalid_argument("dilation factors must be positive");
  std::optional<double> th;
  if (theta) th = theta->to_double();

  struct Outcome {
    NormReport report;
    std::string error;
  };
  auto outcomes = parallel_map(family.size() * lambdas.size(), [&](std::size_t i) {
    Outcome o;
    try {
      o.report = measure(params, dilate(family[i / lambdas.size()], lambdas[i % lambdas.size()]), th, cfg);
    } catch (const std::exception& e) {
      o.error = e.what();
    }
    return o;
  });

  for (std::size_t m = 0; m < family.size(); ++m) {
    std::optional<double> at_one;
    for (std::size_t j = 0; j < lambdas.size(); ++j) {
      const Outcome& o = outcomes[m * lambdas.size() + j];
      VerifyEntry e{static_cast<int>(m), lambdas[j], o.report, pick_ratio(o.report, th.has_value())};
      if (!o.error.empty() && rep.failure.empty()) rep.failure = "member " + std::to_string(m) + ": " + o.error;
      if (o.error.empty() && o.report.status != ReportStatus::Finite && rep.failure.empty())
        rep.failure = "member " + std::to_string(m) + " at lambda " + std::to_string(lambdas[j]) + ": " +
                      to_string(o.report.status) + " inside an embedding instance";
      if (e.log_ratio) rep.log_max_ratio = std::max(rep.log_max_ratio.value_or(e.log_ratio.value()), *e.log_ratio);
      if (lambdas[j] == 1.0) at_one = e.log_ratio;
      rep.entries.push_back(std::move(e));
    }
    if (th && at_one) {
      for (std::size_t j = 0; j < lambdas.size(); ++j) {
        const auto& e = rep.entries[rep.entries.size() - lambdas.size() + j];
        if (!e.log_ratio) continue;
        double d = std::fabs(std::expm1(*e.log_ratio - *at_one));
        rep.defect = std::max(rep.defect.value_or(0.0), d);
      }
    }
  }
  return rep;
}

Json VerifyReport::to_json() const {
  Json j;
  j["params"] = ckn::to_json(params);
  j["theta"] = theta ? ckn::to_json(*theta) : Json(nullptr);
  Json fam = Json::array();
  for (const auto& u : family) fam.push_back(u.to_json());
  j["family"] = fam;
  Json members = Json::array();
  for (const auto& e : entries) {
    Json m;
    m["member"] = e.member;
    m["lambda"] = e.lambda;
    m["norms"] = e.report.to_json();
    m["ratio"] = e.log_ratio ? log_ratio_json(*e.log_ratio) : Json(nullptr);
    members.push_back(m);
  }
  j["per_member"] = members;
  j["max_ratio"] = log_max_ratio ? log_ratio_json(*log_max_ratio) : Json(nullptr);
  j["defect"] = defect ? Json(*defect) : Json(nullptr);
  j["status"] = ok() ? "Finite" : "VerificationFailure";
  if (!ok()) j["failure"] = failure;
  return j;
}

FalsifyReport falsify_instance(const WitnessFamily& w, const QuadratureConfig& cfg) {
  FalsifyReport rep;
  rep.params = w.params;
  rep.family = w.to_json();
  rep.threshold = cfg.divergence_threshold;
  const Params& pr = w.params;
  auto d = derive(pr);
  double ga = d.slope_a.to_double(), gb = d.slope_b.to_double();
  bool multiplicative = w.metric == WitnessMetric::Multiplicative;
  std::optional<double> theta = multiplicative ? w.theta : std::nullopt;
  double log_threshold = std::log(cfg.divergence_threshold);

  for (int idx = w.first_index; idx <= w.last_index; ++idx) {
    TraceEntry t;
    t.index = idx;
    try {
      TestFunction u = w.member(idx);
      switch (w.dilation) {
        case DilationPolicy::None: break;
        case DilationPolicy::Fixed: t.log_lambda = w.log_lambda(idx); break;
        case DilationPolicy::BalanceAdditive:
        case DilationPolicy::SuppressSource: {
          NormReport base = measure(pr, u, theta, cfg);
          if (base.status != ReportStatus::Finite || base.source.is_zero() || base.gradient.is_zero()) {
            t.report = base;
            break;
          }
          double lq = base.source.log_value, lg = base.gradient.log_value;
          if (w.dilation == DilationPolicy::BalanceAdditive) {
            double eps = std::ldexp(1.0, -idx);
            double th = std::clamp(w.theta.value_or(0.5), eps, 1 - eps);
            t.log_lambda = (std::log(th / (1 - th)) + lq - lg) / (ga - gb);
          } else {
            t.log_lambda = (-20 * std::numbers::ln2 - lq + lg) / (gb - ga);
          }
          break;
        }
      }
      t.report = measure(pr, t.log_lambda == 0 ? u : dilate_log(u, t.log_lambda), theta, cfg);
    } catch (const std::exception& e) {
      rep.failure = "index " + std::to_string(idx) + ": " + e.what();
      rep.trace.push_back(t);
      break;
    }
    const NormReport& r = t.report;
    if (r.status == ReportStatus::DivergentSource) {
      rep.failure = "index " + std::to_string(idx) + ": witness has a divergent source norm";
      rep.trace.push_back(t);
      break;
    }
    if (r.status == ReportStatus::DivergentTarget) {
      rep.certified_divergence = true;
      rep.trace.push_back(t);
      break;
    }
    if (w.metric == WitnessMetric::Reduced) {
      if (!r.source.is_zero()) t.log_metric = r.target.log_value - r.source.log_value;
    } else {
      t.log_metric = pick_ratio(r, multiplicative);
    }
    rep.trace.push_back(t);
    if (t.log_metric && *t.log_metric > log_threshold) {
      rep.crossed_at = idx;
      break;
    }
  }

  std::optional<double> prev;
  for (const auto& t : rep.trace) {
    if (t.index <= 3 || !t.log_metric) continue;
    if (prev && *t.log_metric < *prev - 1e-9) rep.monotone_after_prefix = false;
    prev = t.log_metric;
  }
  if (rep.failure.empty() && !rep.falsified())
    rep.failure = "metric stayed below " + std::to_string(cfg.divergence_threshold) + " up to index " +
                  std::to_string(w.last_index);
  return rep;
}

Json FalsifyReport::to_json() const {
  Json j;
  j["params"] = ckn::to_json(params);
  j["family"] = family;
  Json tr = Json::array();
  for (const auto& t : trace) {
    Json e;
    e["index"] = t.index;
    e["log_lambda"] = t.log_lambda;
    e["norms"] = t.report.to_json();
    e["metric"] = t.log_metric ? log_ratio_json(*t.log_metric) : Json(nullptr);
    tr.push_back(e);
  }
  j["trace"] = tr;
  j["threshold"] = threshold;
  j["certified_divergence"] = certified_divergence;
  j["crossed_at"] = crossed_at ? Json(*crossed_at) : Json(nullptr);
  j["monotone_after_prefix"] = monotone_after_prefix;
  j["status"] = falsified() ? "Falsified" : "VerificationFailure";
  if (!failure.empty()) j["failure"] = failure;
  return j;
}

}  // namespace ckn
