#pragma once

#include <cstdint>
#include <vector>

#include "higgsflow/exactfield.hpp"
#include "higgsflow/polyalg.hpp"

// Transition data of the inverse Cartier transform of the uniformizing Higgs
// bundle on P^1 - {0, 1, lambda, infinity}, for the log Frobenius lifts
// z -> z^p and w -> w^p with w = (z - lambda)/(z - 1).

namespace higgsflow {

/// C(p, i)/p mod p for i = 1..p-1, computed from exact binomials.  Entries 0
/// and p are unused and set to 0.
const std::vector<std::uint32_t>& binomial_over_p(std::uint32_t p);

/// The cocycle a = A / (u z^p) with A the undivided numerator and u = 1 - lambda0^p.
struct CocyclePolynomial {
  WittParameter witt;
  Poly numerator;
  FieldElement unit;

  const ReductionContext& context() const noexcept { return numerator.context(); }
  std::uint32_t p() const noexcept { return context().p(); }
  /// A / u, so that a = normalized() / z^p.
  Poly normalized() const { return numerator * unit.inverse(); }
};

/// A = (1/p) [(z^p - F(l))(z-1)^p - (z-l)^p (z^p - 1)] computed in W_2[z].
/// Throws ForbiddenResidue, InternalDivisibilityFailure.
CocyclePolynomial build_A_primitive(const WittRingElement& lifted,
                                    WittConvention convention = WittConvention::Twisted);

/// The expanded binomial-sum form of the same numerator.  Throws ForbiddenResidue.
CocyclePolynomial build_A_closed(const FieldElement& lambda0, const FieldElement& lambda1,
                                 WittConvention convention = WittConvention::Twisted);

/// M = [[(z-1)^p, 0], [a (z-1)^{-p}, (z-1)^{-p}]] on the overlap of the two charts.
struct TransitionMatrix {
  FieldElement lambda0;
  Mat2 m;

  const ReductionContext& context() const noexcept { return lambda0.context(); }
  std::uint32_t p() const noexcept { return context().p(); }
};

TransitionMatrix build_transition(const CocyclePolynomial& cocycle);

}  // namespace higgsflow
