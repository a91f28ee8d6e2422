#include "ckn/classifier.hpp"

#include <algorithm>
#include <stdexcept>

namespace ckn {

namespace {

struct Layout {
  const Params& pr;
  Rational minus_n;
  Rational c0, c1;
  int side_a;  // sign of a + n
  int side_b;  // sign of b - p + n
  bool distinct;

  explicit Layout(const Params& params)
      : pr(params),
        minus_n(-params.n),
        c0(endpoint_c0(params)),
        c1(endpoint_c1(params)),
        side_a((params.a + params.n).sign()),
        side_b((params.b - params.p + params.n).sign()),
        distinct(c0 != c1) {}

  bool same_side() const { return side_a * side_b >= 0; }
  bool strictly_opposite() const { return side_a * side_b < 0; }
  // b - p <= -n < a, or b - p >= -n > a
  bool window_rule() const { return (side_b <= 0 && side_a > 0) || (side_b >= 0 && side_a < 0); }
  // a <= -n and b - p < -n, or a >= -n and b - p > -n
  bool endpoint_sides() const { return (side_a <= 0 && side_b < 0) || (side_a >= 0 && side_b > 0); }
  bool eta_zero() const { return side_a == 0 && side_b == 0; }

  bool in_hull(const Rational& c) const { return min(c0, c1) <= c && c <= max(c0, c1); }
  bool in_open(const Rational& c, const Rational& x, const Rational& y) const {
    return min(x, y) < c && c < max(x, y);
  }
  // between c0 (included) and -n (excluded)
  bool in_window(const Rational& c) const {
    if (c0 == minus_n) return false;
    return c == c0 || in_open(c, c0, minus_n);
  }
  Rational theta(const Rational& c) const { return (c - c0) / (c1 - c0); }
};

bool r_in_range(const Params& pr) {
  return ExtRational(pr.r) <= max(critical_exponent(pr.n, pr.p), ExtRational(pr.q));
}

Verdict embeds(CaseTag tag) {
  Verdict v;
  v.decision = Decision::Embeds;
  v.case_tag = tag;
  return v;
}

Verdict embeds(RadialCase tag) {
  Verdict v;
  v.decision = Decision::Embeds;
  v.radial_case = tag;
  return v;
}

Verdict fails(Reason reason) {
  Verdict v;
  v.decision = Decision::DoesNotEmbed;
  v.reason = reason;
  return v;
}

// Obstruction order shared by the full-space and radial procedures, after the r-range check.
Reason first_reason(const Layout& g) {
  const Params& pr = g.pr;
  const Rational& c = pr.c;
  if (g.distinct ? !g.in_hull(c) : c != g.c0) return Reason::COutsideHull;
  if (g.window_rule() && !g.in_window(c)) return Reason::COutsideOppositeSideWindow;
  if (g.distinct && c == g.c0 && pr.r != pr.q) return Reason::EndpointC0WrongR;
  if (g.distinct && c == g.c1 && pr.r < pr.p) return Reason::EndpointC1SmallR;
  if (!g.distinct && pr.r < min(pr.p, pr.q)) return Reason::EqualSlopesSmallR;
  if (g.eta_zero() && pr.r < pr.q && c == g.minus_n) return Reason::EtaZeroSmallR;
  return Reason::ThetaConditionFails;
}

}  // namespace

Verdict classify(const Params& params) {
  validate(params, Regime::Full);
  if (!r_in_range(params)) return fails(Reason::ROutOfRange);

  Layout g(params);
  const Params& pr = params;
  const Rational& c = pr.c;
  ExtRational p_star = critical_exponent(pr.n, pr.p);
  ExtRational r_ext(pr.r);

  if (pr.r == pr.q && c == pr.a) return embeds(CaseTag::III);
  if (pr.p <= pr.r && r_ext <= p_star && g.endpoint_sides() && c == g.c1) return embeds(CaseTag::IV);
  if (pr.r >= min(pr.p, pr.q) && !g.distinct && !g.eta_zero() && c == g.c1) return embeds(CaseTag::V);
  if (g.eta_zero() && pr.q < pr.r && r_ext <= p_star && c == g.minus_n) return embeds(CaseTag::VI);
  if (g.same_side() && g.distinct && g.in_open(c, g.c0, g.c1) && theta_condition(pr, g.theta(c)))
    return embeds(CaseTag::I);
  if (g.strictly_opposite() && g.in_open(c, g.c0, g.minus_n) && theta_condition(pr, g.theta(c)))
    return embeds(CaseTag::II);

  return fails(first_reason(g));
}

Verdict classify_radial(const Params& params) {
  validate(params, Regime::Radial);
  Layout g(params);
  const Params& pr = params;
  const Rational& c = pr.c;
  Rational theta_breve = derive(params).theta_breve;

  if (pr.r == pr.q && c == pr.a) return embeds(RadialCase::iv);
  if (pr.r >= pr.p && g.endpoint_sides() && c == g.c1) return embeds(RadialCase::iii);
  if (pr.p != pr.q && min(pr.p, pr.q) <= pr.r && pr.r <= max(pr.p, pr.q) && !g.distinct && !g.eta_zero() &&
      c == g.c0)
    return embeds(RadialCase::iv);
  if (g.eta_zero() && pr.r > pr.q && c == g.minus_n) return embeds(RadialCase::v);
  if (g.same_side() && g.distinct && g.in_open(c, g.c0, g.c1) && g.theta(c) >= theta_breve)
    return embeds(RadialCase::i);
  if (g.strictly_opposite() && g.in_open(c, g.c0, g.minus_n) && g.theta(c) >= theta_breve)
    return embeds(RadialCase::ii);

  return fails(first_reason(g));
}

W0Verdict classify_w0(const Params& params) {
  validate(params, Regime::Full);
  if (params.q < 1 || params.r < 1) throw InvalidParams("the zero-mean criterion needs q, r >= 1");
  Layout g(params);
  const Params& pr = params;
  W0Verdict out;
  if (g.distinct) {
    if (!g.in_hull(pr.c)) return out;
    Rational theta = g.theta(pr.c);
    bool first = (pr.r == pr.q && pr.c == g.c0) || (pr.c != g.c0 && theta_condition(pr, theta));
    bool second = theta * pr.r / pr.p + (1 - theta) * pr.r / pr.q >= 1;
    if (first && second) {
      out.decision = W0Decision::Embeds;
      out.inequality = W0Inequality::Multiplicative;
      out.theta = theta;
    }
    return out;
  }
  if (pr.c != g.c0) return out;
  ExtRational p_star = critical_exponent(pr.n, pr.p);
  ExtRational r_ext(pr.r);
  if (pr.r < min(pr.p, pr.q) || r_ext > max(p_star, ExtRational(pr.q))) return out;
  out.decision = W0Decision::Embeds;
  if (pr.p <= pr.r && r_ext <= p_star) {
    out.inequality = W0Inequality::GradientOnly;
    out.theta = Rational(1);
  } else {
    out.inequality = W0Inequality::Interpolated;
    out.theta = pr.p * (pr.r - pr.q) / (pr.r * (pr.p - pr.q));
  }
  return out;
}

bool AdmissibleInterval::contains(const Rational& c) const {
  bool above = lo_included ? c >= lo : c > lo;
  bool below = hi_included ? c <= hi : c < hi;
  return above && below;
}

bool AdmissibleSet::contains(const Rational& c) const {
  if (interval && interval->contains(c)) return true;
  return std::find(isolated_points.begin(), isolated_points.end(), c) != isolated_points.end();
}

namespace {

struct ThetaRange {
  Rational lo;
  bool lo_in;
  Rational hi;
  bool hi_in;
  bool empty() const { return hi < lo || (lo == hi && !(lo_in && hi_in)); }
};

void clip_below(ThetaRange& t, const Rational& bound, bool inclusive) {
  if (bound < t.hi || (bound == t.hi && !inclusive)) {
    t.hi = bound;
    t.hi_in = inclusive;
  }
}

void clip_above(ThetaRange& t, const Rational& bound, bool inclusive) {
  if (bound > t.lo || (bound == t.lo && !inclusive)) {
    t.lo = bound;
    t.lo_in = inclusive;
  }
}

Params with_c(Params p, const Rational& c) {
  p.c = c;
  return p;
}

}  // namespace

AdmissibleSet admissible_set(const Params& params) {
  validate(params, Regime::Full);
  AdmissibleSet out;
  if (!r_in_range(params)) return out;
  Layout g(params);

  if (!g.distinct) {
    if (classify(with_c(params, g.c0)).embeds()) out.isolated_points.push_back(g.c0);
    return out;
  }

  ThetaRange t{Rational(0), false, Rational(1), false};
  bool any = true;
  if (g.strictly_opposite())
    t.hi = g.theta(g.minus_n);
  else if (!g.same_side())
    any = false;

  Rational k = theta_condition_coefficient(params);
  Rational l = theta_condition_bound(params);
  if (k.sign() > 0)
    clip_below(t, l / k, true);
  else if (k.sign() < 0)
    clip_above(t, l / k, true);
  else if (l.sign() < 0)
    any = false;
  if (t.empty()) any = false;

  bool c0_in = classify(with_c(params, g.c0)).embeds();
  bool c1_in = classify(with_c(params, g.c1)).embeds();

  if (any) {
    if (c0_in && t.lo == 0) t.lo_in = true, c0_in = false;
    if (c1_in && t.hi == 1) t.hi_in = true, c1_in = false;
    Rational span = g.c1 - g.c0;
    Rational first = g.c0 + t.lo * span;
    Rational second = g.c0 + t.hi * span;
    AdmissibleInterval iv;
    if (span.sign() > 0)
      iv = {first, t.lo_in, second, t.hi_in};
    else
      iv = {second, t.hi_in, first, t.lo_in};
    out.interval = iv;
  }
  if (c0_in) out.isolated_points.push_back(g.c0);
  if (c1_in) out.isolated_points.push_back(g.c1);
  std::sort(out.isolated_points.begin(), out.isolated_points.end());
  return out;
}

bool ThetaSet::contains(const Rational& theta) const {
  switch (kind) {
    case Kind::Empty: return false;
    case Kind::Single: return theta == lo;
    case Kind::ClosedRange: return lo <= theta && theta <= hi;
    case Kind::TrivialZero: return theta.is_zero();
  }
  return false;
}

ThetaSet theta_set(const Params& params) {
  if (!classify(params).embeds())
    throw std::logic_error("multiplicative exponents are only defined for embedding instances");
  Layout g(params);
  const Params& pr = params;
  ThetaSet out;
  if (g.distinct) {
    out.kind = ThetaSet::Kind::Single;
    out.lo = out.hi = g.theta(pr.c);
    return out;
  }
  if (g.eta_zero()) {
    if (pr.r == pr.q) {
      out.kind = ThetaSet::Kind::TrivialZero;
    } else if (pr.n >= 2) {
      out.kind = ThetaSet::Kind::Empty;
    } else {
      out.kind = ThetaSet::Kind::Single;
      out.lo = out.hi = derive(params).theta_breve;
    }
    return out;
  }
  ExtRational p_star = critical_exponent(pr.n, pr.p);
  bool gradient_window = pr.p <= pr.r && ExtRational(pr.r) <= p_star;
  Rational lower = pr.p == pr.q ? Rational(0) : pr.p * (pr.r - pr.q) / (pr.r * (pr.p - pr.q));
  if (gradient_window && pr.r <= max(pr.p, pr.q)) {
    out.kind = ThetaSet::Kind::ClosedRange;
    out.lo = lower;
    out.hi = Rational(1);
  } else if (gradient_window) {
    out.kind = ThetaSet::Kind::Single;
    out.lo = out.hi = Rational(1);
  } else {
    out.kind = ThetaSet::Kind::Single;
    out.lo = out.hi = lower;
  }
  return out;
}

bool auto_theta_condition_check(const Params& params) {
  ExtRational bound = min(critical_exponent(params.n, params.p), ExtRational(params.q));
  bool applies = ExtRational(params.r) <= bound;
  if (applies && slopes_differ(params)) {
    // The condition is affine in theta, so both hull endpoints suffice.
    if (!theta_condition(params, Rational(0)) || !theta_condition(params, Rational(1)))
      throw std::logic_error("theta condition violated although r <= min{p*, q}");
  }
  return applies;
}

namespace {

struct Endpoint {
  Rational value;
  bool included;
};

Params local_params(const MultiWeightSpec& spec, const LocalWeight& w) {
  Params p;
  p.n = spec.n;
  p.p = spec.p;
  p.q = spec.q;
  p.r = spec.r;
  p.a = w.a;
  p.b = w.b;
  p.c = w.c;
  return p;
}

std::optional<Endpoint> lower_end(const AdmissibleSet& s) {
  std::optional<Endpoint> e;
  if (s.interval) e = Endpoint{s.interval->lo, s.interval->lo_included};
  for (const auto& x : s.isolated_points)
    if (!e || x < e->value || (x == e->value)) e = Endpoint{x, true};
  return e;
}

std::optional<Endpoint> upper_end(const AdmissibleSet& s) {
  std::optional<Endpoint> e;
  if (s.interval) e = Endpoint{s.interval->hi, s.interval->hi_included};
  for (const auto& x : s.isolated_points)
    if (!e || x > e->value || (x == e->value)) e = Endpoint{x, true};
  return e;
}

bool more_permissive(const Endpoint& cand, const std::optional<Endpoint>& best, bool lower) {
  if (!best) return true;
  if (cand.value != best->value) return lower ? cand.value < best->value : cand.value > best->value;
  return cand.included && !best->included;
}

constexpr int kRelaxSteps = 64;

SiteVerdict judge_site(const MultiWeightSpec& spec, const LocalWeight& w, bool at_infinity) {
  SiteVerdict site;
  Params local = local_params(spec, w);
  validate(local, Regime::Full);
  AdmissibleSet set = admissible_set(local);
  std::optional<Endpoint> end = at_infinity ? upper_end(set) : lower_end(set);

  // Support near a point tolerates larger a, b; support near infinity tolerates smaller ones.
  for (int k = 1; !end && k <= kRelaxSteps; ++k) {
    Rational step = Rational(k, 4) * (at_infinity ? -1 : 1);
    const LocalWeight shifts[] = {{w.a, w.b + step, w.c}, {w.a + step, w.b, w.c}, {w.a + step, w.b + step, w.c}};
    for (const auto& s : shifts) {
      AdmissibleSet relaxed = admissible_set(local_params(spec, s));
      std::optional<Endpoint> e = at_infinity ? upper_end(relaxed) : lower_end(relaxed);
      if (e && more_permissive(*e, end, !at_infinity)) end = e;
    }
    if (end) site.relaxed = true;
  }

  if (end) {
    site.endpoint = end->value;
    site.endpoint_included = end->included;
    bool strict = at_infinity ? w.c < end->value : w.c > end->value;
    site.ok = strict || (w.c == end->value && end->included);
  }
  if (!site.ok) site.reason = classify(local).reason;
  return site;
}

}  // namespace

MultiWeightVerdict multiweight_classify(const MultiWeightSpec& spec) {
  if (spec.singularities.empty()) throw std::invalid_argument("multiweight spec needs at least one singularity");
  MultiWeightVerdict out;
  bool all_ok = true;
  auto record = [&](SiteVerdict site) {
    if (site.relaxed) out.sufficient_only = true;
    if (!site.ok && all_ok) {
      all_ok = false;
      out.reason = site.reason;
    }
    out.sites.push_back(std::move(site));
  };
  for (const auto& s : spec.singularities) {
    SiteVerdict site = judge_site(spec, s.weight, false);
    site.location = s.location;
    record(std::move(site));
  }
  record(judge_site(spec, spec.infinity, true));
  out.decision = all_ok ? Decision::Embeds : Decision::DoesNotEmbed;
  return out;
}

std::string to_string(Decision d) { return d == Decision::Embeds ? "Embeds" : "DoesNotEmbed"; }

std::string to_string(CaseTag t) {
  switch (t) {
    case CaseTag::I: return "I";
    case CaseTag::II: return "II";
    case CaseTag::III: return "III";
    case CaseTag::IV: return "IV";
    case CaseTag::V: return "V";
    case CaseTag::VI: return "VI";
  }
  return "?";
}

std::string to_string(RadialCase t) {
  switch (t) {
    case RadialCase::i: return "i";
    case RadialCase::ii: return "ii";
    case RadialCase::iii: return "iii";
    case RadialCase::iv: return "iv";
    case RadialCase::v: return "v";
  }
  return "?";
}

namespace {

constexpr std::pair<Reason, const char*> kReasonNames[] = {
    {Reason::ROutOfRange, "ROutOfRange"},
    {Reason::COutsideHull, "COutsideHull"},
    {Reason::COutsideOppositeSideWindow, "COutsideOppositeSideWindow"},
    {Reason::EndpointC0WrongR, "EndpointC0WrongR"},
    {Reason::EndpointC1SmallR, "EndpointC1SmallR"},
    {Reason::EqualSlopesSmallR, "EqualSlopesSmallR"},
    {Reason::EtaZeroSmallR, "EtaZeroSmallR"},
    {Reason::ThetaConditionFails, "ThetaConditionFails"},
};

}  // namespace

std::string to_string(Reason r) {
  for (const auto& [reason, name] : kReasonNames)
    if (reason == r) return name;
  return "?";
}

std::optional<Reason> reason_from_string(const std::string& name) {
  for (const auto& [reason, text] : kReasonNames)
    if (name == text) return reason;
  return std::nullopt;
}

std::string to_string(W0Decision d) { return d == W0Decision::Embeds ? "Embeds" : "Unknown"; }

std::string to_string(W0Inequality i) {
  switch (i) {
    case W0Inequality::Multiplicative: return "multiplicative";
    case W0Inequality::GradientOnly: return "gradient_only";
    case W0Inequality::Interpolated: return "interpolated";
  }
  return "?";
}

std::string to_string(ThetaSet::Kind k) {
  switch (k) {
    case ThetaSet::Kind::Empty: return "Empty";
    case ThetaSet::Kind::Single: return "Single";
    case ThetaSet::Kind::ClosedRange: return "ClosedRange";
    case ThetaSet::Kind::TrivialZero: return "TrivialZero";
  }
  return "?";
}

}  // namespace ckn
