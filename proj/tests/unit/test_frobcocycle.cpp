#include <gtest/gtest.h>

#include <random>

#include "higgsflow/frobcocycle.hpp"

using namespace higgsflow;

namespace {

Poly P(const ReductionContext& c, std::vector<std::int64_t> coeffs) {
  std::vector<FieldElement> v;
  for (auto x : coeffs) v.push_back(c.field(x));
  return Poly(c, std::move(v));
}

// Integer polynomials mod m, low degree first.
using IPoly = std::vector<std::int64_t>;

IPoly imul(const IPoly& a, const IPoly& b, std::int64_t m) {
  IPoly out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = (out[i + j] + a[i] * b[j]) % m;
  }
  return out;
}

IPoly ipow(const IPoly& a, unsigned e, std::int64_t m) {
  IPoly out{1};
  for (unsigned i = 0; i < e; ++i) out = imul(out, a, m);
  return out;
}

// The numerator over Z/p^2 for d = 1, where Frobenius on W_2(F_p) is trivial,
// divided by p.  Independent of the library's Witt arithmetic.
Poly oracle_A(const ReductionContext& c, std::int64_t lambda) {
  const std::int64_t p = c.p();
  const std::int64_t m = p * p;
  lambda = ((lambda % m) + m) % m;
  IPoly zp(static_cast<std::size_t>(p) + 1, 0);
  zp[static_cast<std::size_t>(p)] = 1;
  IPoly left = zp;
  left[0] = (m - lambda) % m;
  IPoly right = zp;
  right[0] = m - 1;
  const IPoly t1 = imul(left, ipow({m - 1, 1}, static_cast<unsigned>(p), m), m);
  const IPoly t2 = imul(ipow({(m - lambda) % m, 1}, static_cast<unsigned>(p), m), right, m);
  std::vector<FieldElement> out;
  for (std::size_t i = 0; i < t1.size(); ++i) {
    const std::int64_t v = ((t1[i] - t2[i]) % m + m) % m;
    EXPECT_EQ(v % p, 0);
    out.push_back(c.field(v / p));
  }
  return Poly(c, std::move(out));
}

}  // namespace

TEST(Binomial, MatchesInverseIdentity) {
  for (std::uint32_t p : {3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u}) {
    const auto& b = binomial_over_p(p);
    ASSERT_EQ(b.size(), p + 1);
    for (std::uint32_t i = 1; i < p; ++i) {
      // i * C(p,i)/p == (-1)^{i-1} mod p
      const std::uint64_t lhs = (static_cast<std::uint64_t>(b[i]) * i) % p;
      const std::uint64_t rhs = (i % 2 == 1) ? 1 : p - 1;
      ASSERT_EQ(lhs, rhs) << "p=" << p << " i=" << i;
    }
  }
}

TEST(Cocycle, PrimitiveExamples) {
  const ReductionContext& c = make_context(3, 1);
  const CocyclePolynomial a = build_A_primitive(c.witt(-1));
  EXPECT_EQ(a.numerator, P(c, {0, 2, 0, 0, 0, 1}));
  EXPECT_EQ(a.unit, c.field(2));
  EXPECT_EQ(build_A_primitive(c.witt(2)).numerator, P(c, {1, 2, 0, 2, 0, 1}));
  for (int bad : {1, 4, 0, 3}) {
    try {
      build_A_primitive(c.witt(bad));
      FAIL() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::ForbiddenResidue);
    }
  }
}

TEST(Cocycle, ClosedExamples) {
  const ReductionContext& c = make_context(3, 1);
  EXPECT_EQ(build_A_closed(c.field(2), c.field(0)).numerator, P(c, {0, 2, 0, 0, 0, 1}));
  EXPECT_EQ(build_A_closed(c.field(2), c.field(1)).numerator, P(c, {1, 2, 0, 2, 0, 1}));
  EXPECT_THROW(build_A_closed(c.field(1), c.field(0)), Error);
}

TEST(Cocycle, PrimitiveMatchesIntegerOracle) {
  for (std::uint32_t p : {3u, 5u, 7u, 11u}) {
    const ReductionContext& c = make_context(p, 1);
    for (std::int64_t l = 0; l < static_cast<std::int64_t>(p * p); ++l) {
      if (l % p == 0 || l % p == 1) continue;
      ASSERT_EQ(build_A_primitive(c.witt(l)).numerator, oracle_A(c, l)) << "p=" << p << " l=" << l;
    }
  }
}

TEST(Cocycle, ClosedEqualsPrimitiveExhaustive) {
  for (std::uint32_t p : {3u, 5u, 7u}) {
    const ReductionContext& c = make_context(p, 1);
    for (std::uint64_t a = 2; a < p; ++a) {
      for (std::uint64_t b = 0; b < p; ++b) {
        const FieldElement l0 = c.field_element(a);
        const FieldElement l1 = c.field_element(b);
        for (auto conv : {WittConvention::Standard, WittConvention::Twisted}) {
          ASSERT_EQ(build_A_primitive(witt_compose(l0, l1, conv), conv).numerator,
                    build_A_closed(l0, l1, conv).numerator);
        }
      }
    }
  }
}

TEST(Cocycle, ClosedEqualsPrimitiveTwistedQuadratic) {
  for (std::uint32_t p : {3u, 5u}) {
    const ReductionContext& c = make_context(p, 2);
    for (std::uint64_t a = 0; a < c.q(); ++a) {
      const FieldElement l0 = c.field_element(a);
      if (l0.is_zero() || l0.is_one()) continue;
      for (std::uint64_t b = 0; b < c.q(); ++b) {
        const FieldElement l1 = c.field_element(b);
        ASSERT_EQ(build_A_primitive(witt_compose(l0, l1, WittConvention::Twisted)).numerator,
                  build_A_closed(l0, l1).numerator);
      }
    }
  }
}

TEST(Cocycle, LambdaOneEntersLinearly) {
  const ReductionContext& c = make_context(7, 1);
  for (std::uint64_t a = 2; a < 7; ++a) {
    const Poly base = build_A_closed(c.field_element(a), c.field(0)).numerator;
    for (std::int64_t b = 1; b < 7; ++b) {
      const Poly shifted = build_A_closed(c.field_element(a), c.field(b)).numerator;
      ASSERT_EQ(shifted - base, (Poly::z_power(c, 7) - P(c, {1})) * -c.field(b));
    }
  }
}

TEST(Cocycle, DegreeBoundRandomized) {
  std::mt19937_64 rng(21);
  const std::uint32_t primes[] = {3, 5, 7, 11, 13, 17, 19, 23, 29, 31};
  for (int k = 0; k < 200; ++k) {
    const std::uint32_t p = primes[rng() % 10];
    const ReductionContext& c = make_context(p, 1);
    const std::int64_t l = static_cast<std::int64_t>(rng() % (p * p));
    if (l % p == 0 || l % p == 1) continue;
    ASSERT_LE(build_A_primitive(c.witt(l)).numerator.degree(), static_cast<int>(2 * p - 1));
  }
}

TEST(Transition, ShapeAndDeterminant) {
  const ReductionContext& c = make_context(3, 1);
  const CocyclePolynomial a = build_A_primitive(c.witt(-1));
  const TransitionMatrix m = build_transition(a);
  EXPECT_EQ(m.m.det(), RationalExpr(P(c, {1})));
  EXPECT_EQ(m.m.e[0][0], RationalExpr(P(c, {1}), 0, 3));
  EXPECT_TRUE(m.m.e[0][1].is_zero());
  // a (z-1)^{-3} with a = (z^5 + 2z)/(2 z^3)
  EXPECT_EQ(m.m.e[1][0], RationalExpr(P(c, {0, 2, 0, 0, 0, 1}) * c.field(2).inverse(), -3, -3));
  EXPECT_EQ(m.m.e[1][1], RationalExpr(P(c, {1}), 0, -3));
}

TEST(Transition, DeterminantAtRandomPoints) {
  std::mt19937_64 rng(22);
  for (std::uint32_t p : {5u, 7u, 11u}) {
    const ReductionContext& c = make_context(p, 1);
    const ReductionContext& big = make_context(p, 2);
    const FieldEmbedding e(c, big);
    const std::int64_t l = 2 + static_cast<std::int64_t>(rng() % (p - 2)) + p * static_cast<std::int64_t>(rng() % p);
    const TransitionMatrix m = build_transition(build_A_primitive(c.witt(l)));
    for (int k = 0; k < 20;) {
      const FieldElement x = big.field_element(rng() % big.q());
      if (x.is_zero() || x.is_one() || x == e(m.lambda0)) continue;
      ++k;
      const FieldElement d = m.m.e[0][0].evaluate(x, e) * m.m.e[1][1].evaluate(x, e) -
                             m.m.e[0][1].evaluate(x, e) * m.m.e[1][0].evaluate(x, e);
      ASSERT_TRUE(d.is_one());
    }
  }
}
