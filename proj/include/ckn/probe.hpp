#pragma once

#include "ckn/quadrature.hpp"
#include "ckn/witness.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ckn {

struct VerifyEntry {
  int member = 0;
  double lambda = 1;
  NormReport report;
  std::optional<double> log_ratio;  // multiplicative when theta is set, additive otherwise
};

struct VerifyReport {
  Params params;
  std::optional<Rational> theta;
  std::vector<TestFunction> family;
  std::vector<VerifyEntry> entries;
  std::optional<double> log_max_ratio;
  std::optional<double> defect;  // max |ratio(lambda) - ratio(1)| / ratio(1); multiplicative only
  std::string failure;           // empty when every norm was finite

  bool ok() const { return failure.empty(); }
  Json to_json() const;
};

inline const std::vector<double> kDefaultScales = {0.125, 0.5, 1, 2, 8};

// Measures each member at each dilation; lambda = 1 is always included.
VerifyReport verify_instance(const Params& params, std::optional<Rational> theta, const std::vector<TestFunction>& family,
                             const std::vector<double>& scales = kDefaultScales, const QuadratureConfig& cfg = {});

struct TraceEntry {
  int index = 0;
  double log_lambda = 0;
  NormReport report;
  std::optional<double> log_metric;
};

struct FalsifyReport {
  Params params;
  Json family;
  std::vector<TraceEntry> trace;
  bool certified_divergence = false;  // target norm infinite with finite source norms
  std::optional<int> crossed_at;      // first index with metric above the threshold
  bool monotone_after_prefix = true;  // metric non-decreasing after index 3
  double threshold = 0;
  std::string failure;

  bool falsified() const { return failure.empty() && (certified_divergence || crossed_at); }
  Json to_json() const;
};

// Walks the family until the metric exceeds cfg.divergence_threshold or the target norm is certified divergent.
FalsifyReport falsify_instance(const WitnessFamily& witness, const QuadratureConfig& cfg = {});

}  // namespace ckn
