#pragma once

#include <optional>
#include <vector>

#include "higgsflow/frobcocycle.hpp"
#include "higgsflow/tcriterion.hpp"

// Brute-force splitting type from dimensions of global sections.  The bundle is
// glued from the chart U_beta = P^1 - {1, lambda0} and U_alpha = P^1 - {0, inf}
// by v_alpha = M v_beta.  Twisting by m allows a pole of order m at z = 1 in
// v_alpha (a zero of order -m when m < 0).

namespace higgsflow {

/// Default ansatz bound 2p + |m| + 4.
int default_section_bound(std::uint32_t p, int m);

/// Dimension of the section space for one bound, without the stability check.
/// Requires bound >= 2p + |m| + 2.
int h0_at_bound(const TransitionMatrix& m, int twist, int bound);

/// h0 at the given (or default) bound, asserting the same value at bound + 2.
/// Throws UnstableDimension, InvalidRange (bound too small).
int h0_of_twist(const TransitionMatrix& m, int twist, std::optional<int> bound = std::nullopt);

/// max(0, m+1-n) + max(0, m+1+n): h0 of (O(n) + O(-n))(m).
int split_profile(int n, int m) noexcept;

struct CechResult {
  SplittingType splitting;
  std::vector<int> profile;  // h0(m) for m = -1 .. n+1
};

/// Reads n from h0(0) and h0(-1), then checks the whole profile.
/// Throws ProfileMismatch, UnstableDimension.
CechResult cech_splitting(const TransitionMatrix& m);

/// Throws ForbiddenResidue and whatever cech_splitting raises.
SplittingType splitting_from_cech(const WittRingElement& lifted,
                                  WittConvention convention = WittConvention::Twisted);

}  // namespace higgsflow
