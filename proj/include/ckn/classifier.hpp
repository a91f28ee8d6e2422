#pragma once

#include "ckn/params.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ckn {

enum class Decision { Embeds, DoesNotEmbed };

// Sufficient conditions for the full-space embedding; reported in priority order
// III, IV, V, VI, I, II when several hold.
enum class CaseTag { I, II, III, IV, V, VI };

// Conditions of the radial characterization.
enum class RadialCase { i, ii, iii, iv, v };

// Obstructions, checked in this order; the first one that applies is reported.
enum class Reason {
  ROutOfRange,
  COutsideHull,
  COutsideOppositeSideWindow,
  EndpointC0WrongR,
  EndpointC1SmallR,
  EqualSlopesSmallR,
  EtaZeroSmallR,
  ThetaConditionFails,
};

struct Verdict {
  Decision decision = Decision::DoesNotEmbed;
  std::optional<CaseTag> case_tag;
  std::optional<RadialCase> radial_case;
  std::optional<Reason> reason;

  bool embeds() const { return decision == Decision::Embeds; }
};

Verdict classify(const Params& params);
Verdict classify_radial(const Params& params);

enum class W0Decision { Embeds, Unknown };

// Which inequality the sufficient condition on the zero-mean subspace delivers.
enum class W0Inequality {
  Multiplicative,  // ||u||_{c,r} <= C ||grad u||^theta ||u||^(1-theta), theta = theta_c
  GradientOnly,    // ||u||_{c,r} <= C ||grad u||_{b,p}, equal slopes and p <= r <= p*
  Interpolated,    // equal slopes, theta = p(r-q)/(r(p-q)) or 0 when p = q = r
};

struct W0Verdict {
  W0Decision decision = W0Decision::Unknown;
  std::optional<W0Inequality> inequality;
  std::optional<Rational> theta;
};

W0Verdict classify_w0(const Params& params);

struct AdmissibleInterval {
  Rational lo;
  bool lo_included = false;
  Rational hi;
  bool hi_included = false;

  bool contains(const Rational& c) const;
};

struct AdmissibleSet {
  std::optional<AdmissibleInterval> interval;
  std::vector<Rational> isolated_points;

  bool contains(const Rational& c) const;
  bool empty() const { return !interval && isolated_points.empty(); }
};

// The exact set of c for which classify embeds; params.c is ignored.
AdmissibleSet admissible_set(const Params& params);

struct ThetaSet {
  enum class Kind { Empty, Single, ClosedRange, TrivialZero };
  Kind kind = Kind::Empty;
  Rational lo;  // Single: the value
  Rational hi;

  bool contains(const Rational& theta) const;
};

// Exponents for which the multiplicative inequality is proved; requires classify to embed.
ThetaSet theta_set(const Params& params);

// True when r <= min{p*, q}. The theta condition is then re-checked at both hull
// endpoints and a violation throws std::logic_error.
bool auto_theta_condition_check(const Params& params);

struct LocalWeight {
  Rational a, b, c;
};

struct Singularity {
  int location = 0;
  LocalWeight weight;
};

struct MultiWeightSpec {
  int n = 1;
  Rational p{1}, q{1}, r{1};
  std::vector<Singularity> singularities;
  LocalWeight infinity;
};

struct SiteVerdict {
  std::optional<int> location;  // empty for the site at infinity
  bool ok = false;
  bool relaxed = false;  // the comparison endpoint came from relaxed local weights
  std::optional<Rational> endpoint;
  bool endpoint_included = false;
  std::optional<Reason> reason;  // classify reason for the local problem when not ok
};

struct MultiWeightVerdict {
  Decision decision = Decision::DoesNotEmbed;
  bool sufficient_only = false;  // some endpoint came from relaxation
  std::vector<SiteVerdict> sites;
  std::optional<Reason> reason;
};

MultiWeightVerdict multiweight_classify(const MultiWeightSpec& spec);

std::string to_string(Decision d);
std::string to_string(CaseTag t);
std::string to_string(RadialCase t);
std::string to_string(Reason r);
std::string to_string(W0Decision d);
std::string to_string(W0Inequality i);
std::string to_string(ThetaSet::Kind k);
std::optional<Reason> reason_from_string(const std::string& name);

}  // namespace ckn
