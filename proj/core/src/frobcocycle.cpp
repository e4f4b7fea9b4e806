#include "higgsflow/frobcocycle.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <mutex>

namespace higgsflow {

const std::vector<std::uint32_t>& binomial_over_p(std::uint32_t p) {
  static std::mutex mutex;
  static std::map<std::uint32_t, std::vector<std::uint32_t>> cache;
  std::lock_guard lock(mutex);
  auto [it, inserted] = cache.try_emplace(p);
  if (inserted) {
    using boost::multiprecision::cpp_int;
    std::vector<std::uint32_t>& row = it->second;
    row.assign(p + 1, 0);
    cpp_int binom = 1;
    for (std::uint32_t i = 1; i < p; ++i) {
      binom = binom * (p - i + 1) / i;
      if (binom % p != 0) throw Error(ErrorCode::InternalDivisibilityFailure, "p does not divide C(p, i)");
      row[i] = static_cast<std::uint32_t>(cpp_int(binom / p) % p);
    }
  }
  return it->second;
}

CocyclePolynomial build_A_primitive(const WittRingElement& lifted, WittConvention convention) {
  const ReductionContext& ctx = lifted.context();
  WittParameter witt = witt_decompose(lifted, convention);
  const unsigned p = ctx.p();

  const WittPoly zp = WittPoly::z_power(ctx, static_cast<int>(p));
  const WittPoly one = WittPoly::z_power(ctx, 0);
  const WittPoly frob = WittPoly::constant(frobenius_w2(lifted));
  const WittPoly bracket = (zp - frob) * linear_power(ctx.witt(1), p) - linear_power(lifted, p) * (zp - one);
  Poly numerator = divide_by_p(bracket);
  if (numerator.degree() > 2 * static_cast<int>(p) - 1) {
    throw Error(ErrorCode::InternalDivisibilityFailure, "z^{2p} terms failed to cancel");
  }
  const FieldElement unit = ctx.field(1) - witt.lambda0.pow(p);
  return CocyclePolynomial{std::move(witt), std::move(numerator), unit};
}

CocyclePolynomial build_A_closed(const FieldElement& lambda0, const FieldElement& lambda1,
                                 WittConvention convention) {
  const ReductionContext& ctx = lambda0.context();
  const WittRingElement lifted = witt_compose(lambda0, lambda1, convention);
  const std::uint32_t p = ctx.p();
  const auto& scal = binomial_over_p(p);

  std::vector<FieldElement> c(2 * static_cast<std::size_t>(p), ctx.field(0));
  const FieldElement one = ctx.field(1);
  const FieldElement l0p = lambda0.pow(p);
  FieldElement l0i = one;
  for (std::uint32_t i = 1; i < p; ++i) {
    l0i *= lambda0;
    const FieldElement s = ctx.field(i % 2 == 0 ? scal[i] : -static_cast<std::int64_t>(scal[i]));
    c[2 * p - i] += s * (one - l0i);
    c[p - i] += s * (l0i - l0p);
  }
  c[p] -= lambda1;
  c[0] += lambda1;
  return CocyclePolynomial{witt_decompose(lifted, convention), Poly(ctx, std::move(c)), one - l0p};
}

TransitionMatrix build_transition(const CocyclePolynomial& cocycle) {
  const ReductionContext& ctx = cocycle.context();
  const int p = static_cast<int>(ctx.p());
  const Poly one = Poly::z_power(ctx, 0);
  Mat2 m{{{{RationalExpr(one, 0, p), RationalExpr(ctx)},
           {RationalExpr(cocycle.normalized(), -p, -p), RationalExpr(one, 0, -p)}}}};
  return TransitionMatrix{cocycle.witt.lambda0, std::move(m)};
}

}  // namespace higgsflow
