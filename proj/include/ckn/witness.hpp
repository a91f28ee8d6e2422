#pragma once

#include "ckn/classifier.hpp"
#include "ckn/profile.hpp"

#include <functional>
#include <optional>
#include <string>

namespace ckn {

// How each member is dilated before it is measured.
enum class DilationPolicy {
  None,
  BalanceAdditive,  // lambda maximizing T / (Q + G) given the measured norms
  SuppressSource,   // lambda with Q = 2^-20 G
  Fixed,            // lambda = exp(log_lambda(index))
};

enum class WitnessMetric {
  Additive,        // T / (Q + G)
  Reduced,         // T / Q, for jump profiles whose gradient term is scaled away
  Multiplicative,  // T / (G^theta Q^(1-theta))
};

struct WitnessFamily {
  Reason reason = Reason::ROutOfRange;
  Params params;
  WitnessMetric metric = WitnessMetric::Additive;
  DilationPolicy dilation = DilationPolicy::None;
  std::optional<double> theta;  // Multiplicative metric, BalanceAdditive
  bool kelvin = false;          // members are Kelvin images of a family built for kelvin_params(params)
  bool single = false;          // one function whose target norm diverges
  int first_index = 1;
  int last_index = 40;
  std::string description;
  std::function<TestFunction(int)> member;
  std::function<double(int)> log_lambda;  // Fixed dilation

  Json to_json() const;
};

// The counterexample family for a non-embedding reason; throws when classify gives another verdict.
WitnessFamily witness_for(Reason reason, const Params& params);
WitnessFamily witness_for(const Params& params);

// Dilated log-modulated profiles against the multiplicative form with exponent theta.
WitnessFamily multiplicative_witness(const Params& params, double theta);

// Smooth annular bumps and two power tails with finite norms at every scale for embedding instances.
std::vector<TestFunction> verification_family(const Params& params, Angular angular = Angular::Radial);

std::string to_string(DilationPolicy p);
std::string to_string(WitnessMetric m);

}  // namespace ckn
