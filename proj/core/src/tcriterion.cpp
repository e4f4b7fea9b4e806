#include "higgsflow/tcriterion.hpp"

#include "higgsflow/frobcocycle.hpp"

namespace higgsflow {

namespace {

void require_allowed(const FieldElement& lambda0) {
  if (lambda0.is_zero() || lambda0.is_one()) {
    throw Error(ErrorCode::ForbiddenResidue, "lambda0 = " + to_string(lambda0) + " lies in {0, 1}");
  }
}

FieldElement signed_scalar(const ReductionContext& ctx, int sign_exponent, std::uint32_t value) {
  const std::int64_t v = value;
  return ctx.field(sign_exponent % 2 == 0 ? v : -v);
}

}  // namespace

CriterionMatrix build_T(const FieldElement& lambda0, const FieldElement& lambda1) {
  require_allowed(lambda0);
  const ReductionContext& ctx = lambda0.context();
  const int p = static_cast<int>(ctx.p());
  const auto& scal = binomial_over_p(ctx.p());

  std::vector<FieldElement> pw(static_cast<std::size_t>(p) + 1, ctx.field(1));
  for (int k = 1; k <= p; ++k) pw[static_cast<std::size_t>(k)] = pw[static_cast<std::size_t>(k) - 1] * lambda0;
  const FieldElement one = ctx.field(1);
  const auto l0 = [&](int k) { return pw[static_cast<std::size_t>(k)]; };
  const auto c = [&](int k) { return scal[static_cast<std::size_t>(k)]; };

  FqMatrix t(ctx, p, 2 * p + 1);
  for (int i = 1; i <= p; ++i) {
    for (int j = 1; j <= 2 * p + 1; ++j) {
      FieldElement v = ctx.field(0);
      if (i == j) {
        v = lambda1;
      } else if (i > j) {
        v = signed_scalar(ctx, i - j + 1, c(p - i + j)) * (one - l0(i - j));
      } else if (j <= p) {
        v = signed_scalar(ctx, j - i + 1, c(p - j + i)) * (l0(p - j + i) - l0(p));
      } else if (j <= 2 * p - i) {
        v = signed_scalar(ctx, i + j - p - 1, c(i + j - p - 1)) * (one - l0(i + j - p - 1));
      }
      t(i - 1, j - 1) = v;
    }
  }
  return CriterionMatrix{lambda0, lambda1, std::move(t)};
}

FqMatrix t_submatrix(const CriterionMatrix& t, int m) {
  const int p = t.p();
  if (m < 0 || m > p - 1) throw Error(ErrorCode::IndexOutOfRange, "T_m needs 0 <= m <= p-1, got m = " + std::to_string(m));
  return t.t.leading_block(p - m, p + m);
}

bool periodicity_pair(const FieldElement& lambda0, const FieldElement& lambda1) {
  const CriterionMatrix t = build_T(lambda0, lambda1);
  const int p = t.p();
  return mat_det(t_submatrix(t, 0)).is_zero() && mat_rank(t_submatrix(t, 1)) == p - 1;
}

std::string_view to_string(SplittingMethod method) noexcept {
  switch (method) {
    case SplittingMethod::TCriterion: return "t";
    case SplittingMethod::Birkhoff: return "birkhoff";
    case SplittingMethod::Cech: return "cech";
  }
  return "?";
}

SplittingType make_splitting(int n, SplittingMethod method) { return SplittingType{n, method, n == 1}; }

SplittingType splitting_from_T(const FieldElement& lambda0, const FieldElement& lambda1) {
  const CriterionMatrix t = build_T(lambda0, lambda1);
  const int p = t.p();
  for (int m = 0; m < p; ++m) {
    if (mat_rank(t_submatrix(t, m)) == p - m) return make_splitting(m, SplittingMethod::TCriterion);
  }
  return make_splitting(p, SplittingMethod::TCriterion);
}

RemainderSystem remainder_system(const Poly& a) {
  const ReductionContext& ctx = a.context();
  const int p = static_cast<int>(ctx.p());
  if (a.degree() > 2 * p - 1) {
    throw Error(ErrorCode::DegreeTooLarge, "deg A = " + std::to_string(a.degree()) + " exceeds 2p-1");
  }
  const Poly modulus = linear_power(ctx.field(1), static_cast<unsigned>(2 * p));

  RemainderSystem rs{a, FqMatrix(ctx, p + 1, 2 * p), {}, {}};
  auto [q, r] = poly_divrem(a, modulus);
  for (int i = 0; i <= p; ++i) {
    if (i > 0) {
      // z R_{i-1} has degree <= 2p; one reduction step by the monic modulus.
      const FieldElement top = r.coeff(2 * p - 1);
      r = r.shifted(1) - modulus * top;
      q = q.shifted(1) + Poly::constant(top);
    }
    for (int j = 0; j < 2 * p; ++j) rs.r(i, j) = r.coeff(j);
    rs.quotients.push_back(q);
    rs.remainders.push_back(r);
  }
  return rs;
}

std::optional<IndexMismatch> first_T_R_mismatch(const CriterionMatrix& t, const RemainderSystem& rs) {
  const int p = t.p();
  if (rs.p() != p) throw Error(ErrorCode::DimensionMismatch, "T and R belong to different primes");
  const auto T = [&](int i1, int j1) { return t.t(i1 - 1, j1 - 1); };
  for (int i = 0; i <= p - 1; ++i) {
    for (int j = 0; j <= p - 1; ++j) {
      if (!(rs.r(i, j) == T(i + 1, j + 1))) return IndexMismatch{i, j};
    }
    for (int j = p + i + 1; j <= 2 * p - 1; ++j) {
      if (!(rs.r(i, j) == T(i + 1, 3 * p - j))) return IndexMismatch{i, j};
    }
  }
  return std::nullopt;
}

bool validate_T_R(const FieldElement& lambda0, const FieldElement& lambda1) {
  const CocyclePolynomial cocycle = build_A_closed(lambda0, lambda1);
  const RemainderSystem rs = remainder_system(cocycle.numerator);
  return !first_T_R_mismatch(build_T(lambda0, lambda1), rs).has_value();
}

}  // namespace higgsflow

namespace higgsflow {

Poly det_T0_polynomial(const FieldElement& lambda0) {
  const ReductionContext& ctx = lambda0.context();
  const int p = static_cast<int>(ctx.p());
  const ReductionContext& big = make_context(p, 2 * ctx.degree());
  const FieldEmbedding embed(ctx, big);
  const FieldElement l0 = embed(lambda0);

  std::vector<FieldElement> xs, ys;
  for (int k = 0; k <= p; ++k) {
    xs.push_back(big.field_element(static_cast<std::uint64_t>(k)));
    ys.push_back(mat_det(t_submatrix(build_T(l0, xs.back()), 0)));
  }
  // Lagrange form.
  Poly result(big);
  for (int k = 0; k <= p; ++k) {
    Poly basis = Poly::z_power(big, 0);
    FieldElement denom = big.field(1);
    for (int j = 0; j <= p; ++j) {
      if (j == k) continue;
      basis = basis * (Poly::z_power(big, 1) - Poly::constant(xs[static_cast<std::size_t>(j)]));
      denom *= xs[static_cast<std::size_t>(k)] - xs[static_cast<std::size_t>(j)];
    }
    result += basis * (ys[static_cast<std::size_t>(k)] / denom);
  }
  return result;
}

}  // namespace higgsflow
