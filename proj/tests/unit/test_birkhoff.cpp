#include <gtest/gtest.h>

#include <random>

#include "higgsflow/birkhoff.hpp"

using namespace higgsflow;

namespace {

Poly P(const ReductionContext& c, std::vector<std::int64_t> coeffs) {
  std::vector<FieldElement> v;
  for (auto x : coeffs) v.push_back(c.field(x));
  return Poly(c, std::move(v));
}

}  // namespace

TEST(Step1, MicroCaseOne) {
  const ReductionContext& c = make_context(3, 1);
  const Step1Result s = birkhoff_step1(P(c, {0, 2, 0, 0, 0, 1}));
  EXPECT_EQ(s.f, P(c, {2, 0, 1}));
  EXPECT_EQ(s.g, P(c, {1, 1, 1}));
  EXPECT_EQ(s.l, 1);
  EXPECT_EQ(s.c, 2);
}

TEST(Step1, MicroCaseTwo) {
  const ReductionContext& c = make_context(3, 1);
  const Step1Result s = birkhoff_step1(P(c, {1, 2, 0, 2, 0, 1}));
  EXPECT_EQ(s.f, P(c, {2, 0, 1, 1}));
  EXPECT_EQ(s.g, P(c, {1, 2}));
  EXPECT_EQ(s.l, 0);
  EXPECT_EQ(s.c, 3);
}

TEST(Step1, ZeroCocycle) {
  const ReductionContext& c = make_context(5, 1);
  const Step1Result s = birkhoff_step1(Poly(c));
  EXPECT_EQ(s.f, P(c, {1}));
  EXPECT_TRUE(s.g.is_zero());
  EXPECT_EQ(s.l, 0);
  EXPECT_EQ(s.c, 0);
}

TEST(Step1, DegreeTooLarge) {
  const ReductionContext& c = make_context(3, 1);
  try {
    birkhoff_step1(Poly::z_power(c, 6));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegreeTooLarge);
  }
}

TEST(Certificate, MicroCasesVerify) {
  const ReductionContext& c = make_context(3, 1);
  for (auto [lambda, n] : {std::pair{-1, 1}, {2, 0}}) {
    const auto lifted = c.witt(lambda);
    const BirkhoffResult r = run_birkhoff(lifted);
    EXPECT_EQ(r.splitting.n, n);
    EXPECT_EQ(r.splitting.periodic, n == 1);
    EXPECT_EQ(r.splitting.method, SplittingMethod::Birkhoff);
    const TransitionMatrix m = build_transition(r.certificate.cocycle);
    EXPECT_EQ(r.certificate.P() * m.m * r.certificate.Q(), r.certificate.target());
    EXPECT_TRUE(verify_certificate(m, r.certificate));
  }
  const BirkhoffResult mc1 = run_birkhoff(c.witt(-1));
  EXPECT_EQ(mc1.certificate.target(),
            (Mat2{{{{RationalExpr(P(c, {1}), 0, 1), RationalExpr(c)}, {RationalExpr(c), RationalExpr(P(c, {1}), 0, -1)}}}}));
  EXPECT_EQ(mc1.certificate.branch, SigmaBranch::CaseA);
  EXPECT_EQ(run_birkhoff(c.witt(2)).certificate.branch, SigmaBranch::None);
}

TEST(Certificate, InvariantsHold) {
  for (std::uint32_t p : {5u, 7u}) {
    const ReductionContext& c = make_context(p, 1);
    for (std::int64_t l = 0; l < static_cast<std::int64_t>(p * p); ++l) {
      if (l % p == 0 || l % p == 1) continue;
      const FactorizationCertificate cert = run_birkhoff(c.witt(l)).certificate;
      const Poly target = linear_power(c.field(1), 2 * p);
      ASSERT_EQ(cert.f * cert.cocycle.numerator + cert.g * Poly::z_power(c, p), cert.h * target);
      ASSERT_LE(cert.f.degree(), static_cast<int>(p));
      ASSERT_LE(cert.g.degree(), static_cast<int>(p) - 1);
      ASSERT_EQ(cert.f * cert.gamma + cert.g_hat * cert.beta, target);
      ASSERT_LE(cert.beta.degree(), 2 * static_cast<int>(p) - cert.c);
      ASSERT_LE(cert.gamma.degree(), 2 * static_cast<int>(p) - cert.c);
      ASSERT_TRUE(cert.P().det().is_monomial_unit());
      ASSERT_TRUE(cert.Q().det().is_monomial_unit());
      // minimality: one degree lower admits no solution
      const RemainderSystem rs = remainder_system(cert.cocycle.numerator);
      if (cert.c > 0) ASSERT_EQ(mat_rank(remainder_block(rs, cert.c - 1)), cert.c);
      ASSERT_EQ(mat_rank(remainder_block(rs, cert.c)), cert.c);
    }
  }
}

TEST(Certificate, AgreesWithTCriterion) {
  for (std::uint32_t p : {3u, 5u, 7u}) {
    const ReductionContext& c = make_context(p, 1);
    for (std::int64_t l = 0; l < static_cast<std::int64_t>(p * p); ++l) {
      if (l % p == 0 || l % p == 1) continue;
      const WittParameter w = witt_decompose(c.witt(l), WittConvention::Twisted);
      ASSERT_EQ(splitting_from_birkhoff(c.witt(l)).n, splitting_from_T(w.lambda0, w.lambda1).n);
    }
  }
}

TEST(Certificate, RandomizedLargerFields) {
  std::mt19937_64 rng(41);
  for (const auto& [p, d] : {std::pair{11, 1}, {13, 1}, {5, 2}, {7, 2}}) {
    const ReductionContext& c = make_context(p, d);
    for (int k = 0; k < 25;) {
      const FieldElement l0 = c.field_element(rng() % c.q());
      if (l0.is_zero() || l0.is_one()) continue;
      ++k;
      const WittRingElement lifted = witt_compose(l0, c.field_element(rng() % c.q()), WittConvention::Twisted);
      const BirkhoffResult r = run_birkhoff(lifted);
      const WittParameter w = witt_decompose(lifted, WittConvention::Twisted);
      ASSERT_EQ(r.splitting.n, splitting_from_T(w.lambda0, w.lambda1).n);
      ASSERT_TRUE(verify_certificate(build_transition(r.certificate.cocycle), r.certificate, rng()));
    }
  }
}

TEST(Certificate, PerturbationIsRejected) {
  const ReductionContext& c = make_context(5, 1);
  for (std::int64_t l : {2, 3, 8, 13, 22}) {
    const BirkhoffResult r = run_birkhoff(c.witt(l));
    const TransitionMatrix m = build_transition(r.certificate.cocycle);
    FactorizationCertificate bad_f = r.certificate;
    bad_f.f = bad_f.f + P(c, {1});
    EXPECT_FALSE(verify_certificate(m, bad_f));
    FactorizationCertificate bad_a = r.certificate;
    bad_a.alpha = bad_a.alpha + LaurentPoly(P(c, {1}), 0);
    EXPECT_FALSE(verify_certificate(m, bad_a));
  }
}

TEST(Certificate, VerificationDegree) {
  EXPECT_EQ(verification_degree(3, 1), 4);
  EXPECT_EQ(verification_degree(3, 2), 4);
  EXPECT_EQ(verification_degree(5, 1), 4);
  EXPECT_EQ(verification_degree(13, 1), 3);
  EXPECT_EQ(verification_degree(13, 2), 4);
  EXPECT_EQ(verification_degree(101, 1), 2);
  EXPECT_EQ(verification_degree(101, 2), 2);
  for (std::uint32_t p : {3u, 5u, 7u, 31u, 97u}) {
    for (int d : {1, 2}) {
      const int e = verification_degree(p, d);
      EXPECT_EQ(e % d, 0);
      std::uint64_t q = 1;
      for (int i = 0; i < e; ++i) q *= p;
      EXPECT_GE(q, 4ULL * p + 8);
    }
  }
}

TEST(Certificate, ForbiddenResidue) {
  const ReductionContext& c = make_context(3, 1);
  EXPECT_THROW(splitting_from_birkhoff(c.witt(4)), Error);
}
