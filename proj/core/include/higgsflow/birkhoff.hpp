#pragma once

#include <cstdint>
#include <string_view>

#include "higgsflow/frobcocycle.hpp"
#include "higgsflow/polyalg.hpp"
#include "higgsflow/tcriterion.hpp"

// Constructive diagonalization P M Q = diag((z-1)^{p-c}, (z-1)^{c-p}) of the
// transition matrix, with P over k[z, 1/z] and Q regular away from {1, lambda0}.

namespace higgsflow {

/// Solution of f A + g z^p = h (z-1)^{2p} with gcd(f, g) = (z-1)^l and
/// c = max(deg f, deg g) minimal.
struct Step1Result {
  Poly f;
  Poly g;
  Poly h;
  int l = 0;
  int c = 0;
};

/// B_c: rows 0..c of R restricted to columns 0..p-1 and p+c+1..2p-1.
/// It is the remainder-system copy of T_{p-c-1}.
FqMatrix remainder_block(const RemainderSystem& rs, int c);

/// c = p - n0 where n0 is the first m with B_{p-1-m} of full rank (n0 = p if none);
/// f is the monic null vector of B_c with the highest leading index.
/// Throws DegreeTooLarge; CertificateCheckFailed if the congruence or gcd shape fails.
Step1Result birkhoff_step1(const Poly& a);

enum class SigmaBranch { None, CaseA, CaseB };
std::string_view to_string(SigmaBranch branch) noexcept;

/// Everything needed to rebuild and check P and Q.  The Step-1 triple (f, g, h)
/// refers to the undivided numerator A; g_hat = g/u and h_hat = h/u refer to
/// A/u, the numerator of a over z^p, so f (A/u) + g_hat z^p = h_hat (z-1)^{2p}.
struct FactorizationCertificate {
  CocyclePolynomial cocycle;
  Poly f;
  Poly g;
  Poly h;
  int l = 0;
  int c = 0;
  Poly g_hat;
  Poly h_hat;
  Poly beta;   // beta'
  Poly gamma;  // gamma'
  LaurentPoly alpha;
  SigmaBranch branch = SigmaBranch::None;

  int p() const noexcept { return static_cast<int>(cocycle.p()); }
  int n() const noexcept { return p() - c; }

  /// [[alpha, beta'], [-h_hat/z^p, f]]
  Mat2 P() const;
  /// [[f (z-1)^{-c}, -beta' (z-1)^{c-2p}], [g_hat (z-1)^{-c}, gamma' (z-1)^{c-2p}]]
  Mat2 Q() const;
  /// diag((z-1)^{p-c}, (z-1)^{c-p})
  Mat2 target() const;
};

/// Bezout solve, degree reduction, sigma adjustment; verifies every certificate
/// invariant exactly before returning.  Throws CertificateCheckFailed.
FactorizationCertificate birkhoff_step2(const CocyclePolynomial& cocycle, const Step1Result& step1);

struct BirkhoffResult {
  SplittingType splitting;
  FactorizationCertificate certificate;
};

BirkhoffResult run_birkhoff(const WittRingElement& lifted);

/// n = p - c.  Throws ForbiddenResidue and anything Step 1 / Step 2 raise.
SplittingType splitting_from_birkhoff(const WittRingElement& lifted);

/// Evaluates P M Q - target at 20 random points of an extension field with at
/// least 4p + 8 elements (avoiding 0, 1, lambda0) and checks that det P and
/// det Q are units times monomials.
bool verify_certificate(const TransitionMatrix& m, const FactorizationCertificate& cert,
                        std::uint64_t seed = 0x5eed);

/// The extension degree used by verify_certificate for F_{p^d}.
int verification_degree(std::uint32_t p, int d);

}  // namespace higgsflow
