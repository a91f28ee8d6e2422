#pragma once

#include "ckn/classifier.hpp"
#include "ckn/params.hpp"

#include <json.hpp>

namespace ckn {

using Json = nlohmann::ordered_json;

Json to_json(const Rational& x);
Json to_json(const ExtRational& x);
Json to_json(const Params& params);
Json to_json(const DerivedQuantities& d);
Json to_json(const Verdict& v);
Json to_json(const W0Verdict& v);
Json to_json(const AdmissibleSet& s);
Json to_json(const ThetaSet& t);
Json to_json(const MultiWeightSpec& spec);
Json to_json(const MultiWeightVerdict& v);

// Verdict plus the echoed parameters and derived quantities.
Json verdict_report(const Params& params, const Verdict& v);

// Rationals are read from JSON strings ("-3/4") or integers; floats are rejected.
Rational rational_from_json(const Json& j, const std::string& field);
MultiWeightSpec multiweight_from_json(const Json& j);

}  // namespace ckn
