#include "ckn/serialize.hpp"

namespace ckn {

namespace {

template <class T>
Json optional_json(const std::optional<T>& x) {
  return x ? to_json(*x) : Json(nullptr);
}

}  // namespace

Json to_json(const Rational& x) { return x.str(); }
Json to_json(const ExtRational& x) { return x.str(); }

Json to_json(const Params& params) {
  Json j;
  j["n"] = params.n;
  j["p"] = to_json(params.p);
  j["q"] = to_json(params.q);
  j["r"] = to_json(params.r);
  j["a"] = to_json(params.a);
  j["b"] = to_json(params.b);
  j["c"] = to_json(params.c);
  return j;
}

Json to_json(const DerivedQuantities& d) {
  Json j;
  j["c0"] = to_json(d.c0);
  j["c1"] = to_json(d.c1);
  j["p_star"] = to_json(d.p_star);
  j["slope_a"] = to_json(d.slope_a);
  j["slope_b"] = to_json(d.slope_b);
  j["theta_c"] = optional_json(d.theta_c);
  j["eta"] = optional_json(d.eta);
  j["theta_breve"] = to_json(d.theta_breve);
  j["theta_bar"] = optional_json(d.theta_bar);
  j["c_star"] = to_json(d.c_star);
  j["c_bar"] = optional_json(d.c_bar);
  j["p_conj"] = to_json(d.p_conj);
  return j;
}

Json to_json(const Verdict& v) {
  Json j;
  j["decision"] = to_string(v.decision);
  if (v.case_tag)
    j["case"] = to_string(*v.case_tag);
  else if (v.radial_case)
    j["case"] = to_string(*v.radial_case);
  else
    j["case"] = nullptr;
  j["reason"] = v.reason ? Json(to_string(*v.reason)) : Json(nullptr);
  return j;
}

Json to_json(const W0Verdict& v) {
  Json j;
  j["decision"] = to_string(v.decision);
  j["inequality"] = v.inequality ? Json(to_string(*v.inequality)) : Json(nullptr);
  j["theta"] = optional_json(v.theta);
  return j;
}

Json to_json(const AdmissibleSet& s) {
  Json j;
  if (s.interval) {
    Json iv;
    iv["lo"] = to_json(s.interval->lo);
    iv["lo_included"] = s.interval->lo_included;
    iv["hi"] = to_json(s.interval->hi);
    iv["hi_included"] = s.interval->hi_included;
    j["interval"] = iv;
  } else {
    j["interval"] = nullptr;
  }
  j["isolated_points"] = Json::array();
  for (const auto& x : s.isolated_points) j["isolated_points"].push_back(to_json(x));
  return j;
}

Json to_json(const ThetaSet& t) {
  Json j;
  j["kind"] = to_string(t.kind);
  switch (t.kind) {
    case ThetaSet::Kind::Single: j["theta"] = to_json(t.lo); break;
    case ThetaSet::Kind::ClosedRange:
      j["lo"] = to_json(t.lo);
      j["hi"] = to_json(t.hi);
      break;
    case ThetaSet::Kind::TrivialZero: j["theta"] = "0"; break;
    case ThetaSet::Kind::Empty: j["note"] = "embedding holds, multiplicative form impossible"; break;
  }
  return j;
}

Json to_json(const MultiWeightSpec& spec) {
  Json j;
  j["n"] = spec.n;
  j["p"] = to_json(spec.p);
  j["q"] = to_json(spec.q);
  j["r"] = to_json(spec.r);
  j["singularities"] = Json::array();
  for (const auto& s : spec.singularities)
    j["singularities"].push_back(
        {{"location", s.location}, {"a", to_json(s.weight.a)}, {"b", to_json(s.weight.b)}, {"c", to_json(s.weight.c)}});
  j["infinity"] = {{"a", to_json(spec.infinity.a)}, {"b", to_json(spec.infinity.b)}, {"c", to_json(spec.infinity.c)}};
  return j;
}

Json to_json(const MultiWeightVerdict& v) {
  Json j;
  j["decision"] = to_string(v.decision);
  j["sufficient_only"] = v.sufficient_only;
  j["reason"] = v.reason ? Json(to_string(*v.reason)) : Json(nullptr);
  j["sites"] = Json::array();
  for (const auto& s : v.sites) {
    Json site;
    site["location"] = s.location ? Json(*s.location) : Json("infinity");
    site["ok"] = s.ok;
    site["relaxed"] = s.relaxed;
    site["endpoint"] = optional_json(s.endpoint);
    site["endpoint_included"] = s.endpoint_included;
    site["reason"] = s.reason ? Json(to_string(*s.reason)) : Json(nullptr);
    j["sites"].push_back(site);
  }
  return j;
}

Json verdict_report(const Params& params, const Verdict& v) {
  Json j = to_json(v);
  j["params"] = to_json(params);
  j["derived"] = to_json(derive(params));
  return j;
}

Rational rational_from_json(const Json& j, const std::string& field) {
  if (j.is_string()) {
    try {
      return Rational::parse(j.get<std::string>());
    } catch (const ParseError& e) {
      throw ParseError(field + ": " + e.what());
    }
  }
  if (j.is_number_integer()) return Rational(j.get<long long>());
  throw ParseError(field + ": expected an exact rational string such as \"-3/4\"");
}

namespace {

const Json& member(const Json& j, const std::string& key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(where + ": missing field '" + key + "'");
  return j.at(key);
}

LocalWeight weight_from_json(const Json& j, const std::string& where) {
  return {rational_from_json(member(j, "a", where), where + ".a"),
          rational_from_json(member(j, "b", where), where + ".b"),
          rational_from_json(member(j, "c", where), where + ".c")};
}

}  // namespace

MultiWeightSpec multiweight_from_json(const Json& j) {
  MultiWeightSpec spec;
  const Json& n = member(j, "n", "spec");
  if (!n.is_number_integer()) throw ParseError("spec.n: expected an integer");
  spec.n = n.get<int>();
  spec.p = rational_from_json(member(j, "p", "spec"), "spec.p");
  spec.q = rational_from_json(member(j, "q", "spec"), "spec.q");
  spec.r = rational_from_json(member(j, "r", "spec"), "spec.r");
  const Json& sing = member(j, "singularities", "spec");
  if (!sing.is_array()) throw ParseError("spec.singularities: expected an array");
  int index = 0;
  for (const auto& s : sing) {
    std::string where = "spec.singularities[" + std::to_string(index) + "]";
    Singularity site;
    site.location = s.contains("location") ? s.at("location").get<int>() : index;
    site.weight = weight_from_json(s, where);
    spec.singularities.push_back(site);
    ++index;
  }
  spec.infinity = weight_from_json(member(j, "infinity", "spec"), "spec.infinity");
  return spec;
}

}  // namespace ckn
