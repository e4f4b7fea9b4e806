#include <gtest/gtest.h>

#include <random>

#include "higgsflow/frobcocycle.hpp"
#include "higgsflow/tcriterion.hpp"

using namespace higgsflow;

namespace {

std::vector<FieldElement> row(const ReductionContext& c, std::vector<std::int64_t> v) {
  std::vector<FieldElement> out;
  for (auto x : v) out.push_back(c.field(x));
  return out;
}

std::vector<FieldElement> t_row(const CriterionMatrix& t, int i) {
  std::vector<FieldElement> out;
  for (int j = 0; j < t.t.cols(); ++j) out.push_back(t.t(i, j));
  return out;
}

}  // namespace

TEST(TMatrix, WorkedRow) {
  const ReductionContext& c = make_context(3, 1);
  for (std::int64_t l1 = 0; l1 < 3; ++l1) {
    const CriterionMatrix t = build_T(c.field(2), c.field(l1));
    EXPECT_EQ(t.t.rows(), 3);
    EXPECT_EQ(t.t.cols(), 7);
    EXPECT_EQ(t_row(t, 1), row(c, {2, l1, 2, 0, 0, 0, 0}));
  }
  EXPECT_THROW(build_T(c.field(0), c.field(0)), Error);
  EXPECT_THROW(build_T(c.field(1), c.field(0)), Error);
}

TEST(TMatrix, DiagonalAndTail) {
  for (std::uint32_t p : {5u, 7u, 11u}) {
    const ReductionContext& c = make_context(p, 1);
    const CriterionMatrix t = build_T(c.field(3), c.field(4));
    for (int i = 1; i <= static_cast<int>(p); ++i) {
      EXPECT_EQ(t.t(i - 1, i - 1), c.field(4));
      for (int j = 2 * static_cast<int>(p) - i + 1; j <= 2 * static_cast<int>(p) + 1; ++j) {
        EXPECT_TRUE(t.t(i - 1, j - 1).is_zero());
      }
    }
  }
}

TEST(TMatrix, Submatrix) {
  const ReductionContext& c = make_context(3, 1);
  const CriterionMatrix t = build_T(c.field(2), c.field(0));
  EXPECT_EQ(t_submatrix(t, 1), FqMatrix::from_rows(c, {{0, 2, 0, 1}, {2, 0, 2, 0}}));
  EXPECT_EQ(t_submatrix(t, 0), FqMatrix::from_rows(c, {{0, 2, 0}, {2, 0, 2}, {0, 2, 0}}));
  try {
    t_submatrix(t, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IndexOutOfRange);
  }
}

TEST(TCriterion, PeriodicityPairExamples) {
  const ReductionContext& c = make_context(3, 1);
  EXPECT_TRUE(periodicity_pair(c.field(2), c.field(0)));
  EXPECT_FALSE(periodicity_pair(c.field(2), c.field(1)));
  EXPECT_FALSE(periodicity_pair(c.field(2), c.field(2)));
  EXPECT_EQ(splitting_from_T(c.field(2), c.field(1)).n, 0);
  const SplittingType s = splitting_from_T(c.field(2), c.field(0));
  EXPECT_EQ(s.n, 1);
  EXPECT_TRUE(s.periodic);
  EXPECT_EQ(s.method, SplittingMethod::TCriterion);
}

TEST(TCriterion, PairEquivalentToSplittingOne) {
  for (std::uint32_t p : {3u, 5u, 7u}) {
    const ReductionContext& c = make_context(p, 1);
    for (std::uint64_t a = 2; a < p; ++a) {
      for (std::uint64_t b = 0; b < p; ++b) {
        const FieldElement l0 = c.field_element(a), l1 = c.field_element(b);
        ASSERT_EQ(periodicity_pair(l0, l1), splitting_from_T(l0, l1).n == 1);
      }
    }
  }
}

TEST(TCriterion, MakeSplittingRange) {
  EXPECT_TRUE(make_splitting(1, SplittingMethod::Cech).periodic);
  EXPECT_FALSE(make_splitting(0, SplittingMethod::Cech).periodic);
}

TEST(Remainder, Examples) {
  const ReductionContext& c = make_context(3, 1);
  const Poly a = build_A_closed(c.field(2), c.field(0)).numerator;
  const RemainderSystem rs = remainder_system(a);
  EXPECT_EQ(rs.r.rows(), 4);
  EXPECT_EQ(rs.r.cols(), 6);
  EXPECT_EQ(rs.r.leading_block(1, 6), FqMatrix::from_rows(c, {{0, 2, 0, 0, 0, 1}}));
  EXPECT_EQ(rs.r.leading_block(2, 6),
            FqMatrix::from_rows(c, {{0, 2, 0, 0, 0, 1}, {2, 0, 2, 2, 0, 0}}));
  try {
    remainder_system(Poly::z_power(c, 6));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegreeTooLarge);
  }
}

TEST(Remainder, Reconstruction) {
  const ReductionContext& c = make_context(7, 1);
  const Poly a = build_A_closed(c.field(3), c.field(5)).numerator;
  const RemainderSystem rs = remainder_system(a);
  const Poly m = linear_power(c.field(1), 14);
  for (int i = 0; i <= 7; ++i) {
    ASSERT_EQ(rs.quotients[static_cast<std::size_t>(i)] * m + rs.remainders[static_cast<std::size_t>(i)],
              a.shifted(i));
  }
}

TEST(Remainder, IndexIdentityWorked) {
  const ReductionContext& c = make_context(3, 1);
  const CriterionMatrix t = build_T(c.field(2), c.field(0));
  const RemainderSystem rs = remainder_system(build_A_closed(c.field(2), c.field(0)).numerator);
  for (int j = 0; j < 3; ++j) EXPECT_EQ(t.t(0, j), rs.r(0, j));
  EXPECT_EQ(t.t(0, 3), rs.r(0, 5));
  EXPECT_EQ(t.t(0, 3), c.field(1));
  EXPECT_FALSE(first_T_R_mismatch(t, rs).has_value());
}

TEST(Remainder, IndexIdentityExhaustive) {
  for (std::uint32_t p : {3u, 5u, 7u}) {
    const ReductionContext& c = make_context(p, 1);
    for (std::uint64_t a = 2; a < p; ++a) {
      for (std::uint64_t b = 0; b < p; ++b) ASSERT_TRUE(validate_T_R(c.field_element(a), c.field_element(b)));
    }
  }
}

TEST(TCriterion, ScalingLeavesRanksUnchanged) {
  std::mt19937_64 rng(31);
  for (int k = 0; k < 60; ++k) {
    const std::uint32_t p = (k % 2 == 0) ? 5 : 7;
    const ReductionContext& c = make_context(p, 1);
    const FieldElement l0 = c.field_element(2 + rng() % (p - 2));
    const FieldElement l1 = c.field_element(rng() % p);
    const FieldElement s = c.field_element(1 + rng() % (p - 1));
    const Poly a = build_A_closed(l0, l1).numerator;
    const RemainderSystem r1 = remainder_system(a);
    const RemainderSystem r2 = remainder_system(a * s);
    for (int rows = 1; rows <= static_cast<int>(p); ++rows) {
      ASSERT_EQ(mat_rank(r1.r.leading_block(rows, 2 * p)), mat_rank(r2.r.leading_block(rows, 2 * p)));
    }
  }
}

TEST(TCriterion, DetT0IsMonicOfDegreeP) {
  for (std::uint32_t p : {3u, 5u, 7u, 11u}) {
    const ReductionContext& c = make_context(p, 1);
    for (std::uint64_t a = 2; a < p; ++a) {
      const Poly d = det_T0_polynomial(c.field_element(a));
      ASSERT_EQ(d.degree(), static_cast<int>(p));
      ASSERT_TRUE(d.leading().is_one());
      int periodic = 0;
      for (std::uint64_t b = 0; b < p; ++b) periodic += periodicity_pair(c.field_element(a), c.field_element(b));
      ASSERT_LE(periodic, static_cast<int>(p));
    }
  }
  // p = 3, lambda0 = 2: det T0 = l1^3 + l1
  const ReductionContext& c = make_context(3, 1);
  const Poly d = det_T0_polynomial(c.field(2));
  const ReductionContext& big = d.context();
  std::vector<FieldElement> expect{big.field(0), big.field(1), big.field(0), big.field(1)};
  EXPECT_EQ(d, Poly(big, expect));
}
