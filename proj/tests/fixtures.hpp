#pragma once

#include "ckn/params.hpp"

#include <utility>
#include <vector>

namespace ckn::testing {

inline Params tuple(int n, Rational p, Rational q, Rational r, Rational a, Rational b, Rational c) {
  return {n, std::move(p), std::move(q), std::move(r), std::move(a), std::move(b), std::move(c)};
}

// One non-embedding instance per reason, in reason order.
inline std::vector<Params> reason_fixtures() {
  return {
      tuple(3, 1, 1, 8, 0, 0, 15),                  // ROutOfRange
      tuple(3, 2, 2, 2, 0, 0, -3),                  // COutsideHull
      tuple(3, 2, 2, 2, 0, -2, Rational(-7, 2)),    // COutsideOppositeSideWindow
      tuple(3, 2, 1, 4, 0, 0, 9),                   // EndpointC0WrongR
      tuple(3, 8, 1, 1, -4, 0, Rational(-29, 8)),   // EndpointC1SmallR
      tuple(3, 4, 4, 1, 1, 5, -2),                  // EqualSlopesSmallR
      tuple(3, 1, 8, 1, -3, -2, -3),                // EtaZeroSmallR
      tuple(3, 1, 8, 8, 0, 0, Rational(39, 4)),     // ThetaConditionFails
  };
}

}  // namespace ckn::testing
