#include "higgsflow/cechoracle.hpp"

#include <algorithm>
#include <cstdlib>

namespace higgsflow {

namespace {

// Coefficient vectors of (P z^t) mod (z - root)^k for t = 0..count-1.
std::vector<std::vector<FieldElement>> shifted_remainders(const Poly& p, const FieldElement& root, int k, int count) {
  const ReductionContext& ctx = p.context();
  std::vector<std::vector<FieldElement>> out;
  out.reserve(static_cast<std::size_t>(count));
  if (k <= 0) {
    out.assign(static_cast<std::size_t>(count), {});
    return out;
  }
  const Poly modulus = linear_power(root, static_cast<unsigned>(k));
  Poly r = poly_divrem(p, modulus).second;
  for (int t = 0; t < count; ++t) {
    if (t > 0) r = r.shifted(1) - modulus * r.coeff(k - 1);
    std::vector<FieldElement> v(static_cast<std::size_t>(k), ctx.field(0));
    for (int j = 0; j < k; ++j) v[static_cast<std::size_t>(j)] = r.coeff(j);
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

int default_section_bound(std::uint32_t p, int m) { return 2 * static_cast<int>(p) + std::abs(m) + 4; }

int h0_at_bound(const TransitionMatrix& tm, int twist, int bound) {
  const ReductionContext& ctx = tm.context();
  const int p = static_cast<int>(ctx.p());
  if (bound < 2 * p + std::abs(twist) + 2) {
    throw Error(ErrorCode::InvalidRange, "section bound below 2p + |m| + 2");
  }
  // v_beta_j = N_j / ((z-1)^B (z-lambda0)^B), deg N_j <= 2B.
  const int per = 2 * bound + 1;
  const int unknowns = 2 * per;
  const FieldElement one = ctx.field(1);

  std::vector<std::vector<FieldElement>> rows;  // each row is one linear condition
  for (int i = 0; i < 2; ++i) {
    int a_min = 0, b_min = 0;
    bool any = false;
    for (int j = 0; j < 2; ++j) {
      const RationalExpr& e = tm.m.e[i][j];
      if (e.is_zero()) continue;
      a_min = any ? std::min(a_min, e.z_exponent()) : e.z_exponent();
      b_min = any ? std::min(b_min, e.one_exponent()) : e.one_exponent();
      any = true;
    }
    if (!any) continue;
    // v_alpha_i = z^{a_min} (z-1)^{b_min - B} (z-lambda0)^{-B} W_i.
    const int need_l0 = bound;
    const int need_one = std::max(0, bound - b_min - twist);
    std::vector<std::vector<FieldElement>> c_l0(static_cast<std::size_t>(need_l0),
                                                std::vector<FieldElement>(static_cast<std::size_t>(unknowns), ctx.field(0)));
    std::vector<std::vector<FieldElement>> c_one(static_cast<std::size_t>(need_one),
                                                 std::vector<FieldElement>(static_cast<std::size_t>(unknowns), ctx.field(0)));
    for (int j = 0; j < 2; ++j) {
      const RationalExpr& e = tm.m.e[i][j];
      if (e.is_zero()) continue;
      const Poly pij = e.numerator().shifted(e.z_exponent() - a_min) *
                       linear_power(one, static_cast<unsigned>(e.one_exponent() - b_min));
      const auto at_l0 = shifted_remainders(pij, tm.lambda0, need_l0, per);
      const auto at_one = shifted_remainders(pij, one, need_one, per);
      for (int t = 0; t < per; ++t) {
        const std::size_t col = static_cast<std::size_t>(j * per + t);
        for (int r = 0; r < need_l0; ++r) c_l0[static_cast<std::size_t>(r)][col] = at_l0[static_cast<std::size_t>(t)][static_cast<std::size_t>(r)];
        for (int r = 0; r < need_one; ++r) c_one[static_cast<std::size_t>(r)][col] = at_one[static_cast<std::size_t>(t)][static_cast<std::size_t>(r)];
      }
    }
    for (auto& r : c_l0) rows.push_back(std::move(r));
    for (auto& r : c_one) rows.push_back(std::move(r));
  }
  if (rows.empty()) return unknowns;
  FqMatrix sys(ctx, static_cast<int>(rows.size()), unknowns);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (int c = 0; c < unknowns; ++c) sys(static_cast<int>(r), c) = rows[r][static_cast<std::size_t>(c)];
  }
  return unknowns - mat_rank(sys);
}

int h0_of_twist(const TransitionMatrix& tm, int twist, std::optional<int> bound) {
  const int b = bound.value_or(default_section_bound(tm.p(), twist));
  const int h = h0_at_bound(tm, twist, b);
  const int again = h0_at_bound(tm, twist, b + 2);
  if (h != again) {
    throw Error(ErrorCode::UnstableDimension, "h0 changed from " + std::to_string(h) + " to " + std::to_string(again) +
                                                  " when the bound went from " + std::to_string(b) + " to " +
                                                  std::to_string(b + 2));
  }
  return h;
}

int split_profile(int n, int m) noexcept { return std::max(0, m + 1 - n) + std::max(0, m + 1 + n); }

CechResult cech_splitting(const TransitionMatrix& tm) {
  const int s = h0_of_twist(tm, 0);
  int n = 0;
  if (s >= 3) {
    n = s - 1;
  } else if (s == 2) {
    n = h0_of_twist(tm, -1) == 1 ? 1 : 0;
  } else {
    throw Error(ErrorCode::ProfileMismatch, "h0(0) = " + std::to_string(s) + " fits no splitting type");
  }
  CechResult out{make_splitting(n, SplittingMethod::Cech), {}};
  for (int m = -1; m <= n + 1; ++m) {
    const int h = m == 0 ? s : h0_of_twist(tm, m);
    out.profile.push_back(h);
    if (h != split_profile(n, m)) {
      throw Error(ErrorCode::ProfileMismatch, "h0(" + std::to_string(m) + ") = " + std::to_string(h) +
                                                  " but O(" + std::to_string(n) + ") + O(-" + std::to_string(n) +
                                                  ") predicts " + std::to_string(split_profile(n, m)));
    }
  }
  return out;
}

SplittingType splitting_from_cech(const WittRingElement& lifted, WittConvention convention) {
  return cech_splitting(build_transition(build_A_primitive(lifted, convention))).splitting;
}

}  // namespace higgsflow
