#include "higgsflow/birkhoff.hpp"

#include <random>

namespace higgsflow {

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorCode::CertificateCheckFailed, what); }

Poly z_minus_one_power(const ReductionContext& ctx, int e) {
  return linear_power(ctx.field(1), static_cast<unsigned>(e));
}

Poly from_vector(const ReductionContext& ctx, const std::vector<FieldElement>& v) { return Poly(ctx, v); }

}  // namespace

FqMatrix remainder_block(const RemainderSystem& rs, int c) {
  const int p = rs.p();
  if (c < 0 || c > p) throw Error(ErrorCode::IndexOutOfRange, "block index c must lie in [0, p]");
  std::vector<int> cols;
  for (int j = 0; j < p; ++j) cols.push_back(j);
  for (int j = p + c + 1; j <= 2 * p - 1; ++j) cols.push_back(j);
  return rs.r.select(c + 1, cols);
}

Step1Result birkhoff_step1(const Poly& a) {
  const ReductionContext& ctx = a.context();
  const int p = static_cast<int>(ctx.p());
  const RemainderSystem rs = remainder_system(a);

  int n0 = p;
  for (int m = 0; m < p; ++m) {
    const int rows = p - m;
    if (mat_rank(remainder_block(rs, rows - 1)) == rows) {
      n0 = m;
      break;
    }
  }
  const int c = p - n0;

  const auto basis = mat_left_nullspace(remainder_block(rs, c));
  if (basis.empty()) fail("remainder block B_" + std::to_string(c) + " has trivial left null space");
  const Poly f = from_vector(ctx, basis.back());

  std::vector<FieldElement> gc(static_cast<std::size_t>(p), ctx.field(0));
  Poly h(ctx);
  for (int i = 0; i <= f.degree(); ++i) {
    const FieldElement fi = f.coeff(i);
    if (fi.is_zero()) continue;
    for (int j = 0; j < p; ++j) gc[static_cast<std::size_t>(j)] -= fi * rs.r(i, p + j);
    h += rs.quotients[static_cast<std::size_t>(i)] * fi;
  }
  const Poly g(ctx, std::move(gc));

  const Poly zp = Poly::z_power(ctx, p);
  if (!(f * a + g * zp == h * z_minus_one_power(ctx, 2 * p))) fail("step 1 congruence f A + g z^p = h (z-1)^{2p} fails");

  const Poly gcd = poly_ext_gcd(f, g).gcd;
  const int l = multiplicity_at(gcd, ctx.field(1));
  if (gcd.degree() != l) {
    // A factor coprime to z-1 would give a solution of smaller degree.
    fail("gcd(f, g) has a factor coprime to z-1 at minimal c");
  }
  if (std::max(f.degree(), g.degree()) != c) fail("max(deg f, deg g) differs from the rank scan value c");
  return Step1Result{f, g, h, l, c};
}

std::string_view to_string(SigmaBranch branch) noexcept {
  switch (branch) {
    case SigmaBranch::None: return "none";
    case SigmaBranch::CaseA: return "A";
    case SigmaBranch::CaseB: return "B";
  }
  return "?";
}

Mat2 FactorizationCertificate::P() const {
  return Mat2{{{{RationalExpr(alpha), RationalExpr(beta)},
                {RationalExpr(-h_hat, -p(), 0), RationalExpr(f)}}}};
}

Mat2 FactorizationCertificate::Q() const {
  const int two_p = 2 * p();
  return Mat2{{{{RationalExpr(f, 0, -c), RationalExpr(-beta, 0, c - two_p)},
                {RationalExpr(g_hat, 0, -c), RationalExpr(gamma, 0, c - two_p)}}}};
}

Mat2 FactorizationCertificate::target() const {
  const ReductionContext& ctx = cocycle.context();
  const Poly one = Poly::z_power(ctx, 0);
  return Mat2{{{{RationalExpr(one, 0, p() - c), RationalExpr(ctx)},
                {RationalExpr(ctx), RationalExpr(one, 0, c - p())}}}};
}

namespace {

void check_exact_invariants(const FactorizationCertificate& cert) {
  const ReductionContext& ctx = cert.cocycle.context();
  const int p = cert.p();
  const Poly zp = Poly::z_power(ctx, p);
  const Poly target = z_minus_one_power(ctx, 2 * p);

  if (!(cert.f * cert.cocycle.numerator + cert.g * zp == cert.h * target)) fail("f A + g z^p != h (z-1)^{2p}");
  if (cert.f.degree() > p || cert.g.degree() > p - 1) fail("deg f <= p or deg g <= p-1 violated");
  if (!(poly_ext_gcd(cert.f, cert.g).gcd == z_minus_one_power(ctx, cert.l))) fail("gcd(f, g) != (z-1)^l");
  if (!(cert.f * cert.gamma + cert.g_hat * cert.beta == target)) fail("f gamma' + g beta' != (z-1)^{2p}");
  if (cert.beta.degree() > 2 * p - cert.c || cert.gamma.degree() > 2 * p - cert.c) {
    fail("deg beta', deg gamma' <= 2p - c violated");
  }
  const TransitionMatrix m = build_transition(cert.cocycle);
  const Mat2 P = cert.P();
  const Mat2 Q = cert.Q();
  if (!(P * m.m * Q == cert.target())) fail("P M Q is not diag((z-1)^{p-c}, (z-1)^{c-p})");
  if (!P.det().is_monomial_unit() || !Q.det().is_monomial_unit()) fail("det P or det Q is not a unit monomial");
}

}  // namespace

FactorizationCertificate birkhoff_step2(const CocyclePolynomial& cocycle, const Step1Result& s1) {
  const ReductionContext& ctx = cocycle.context();
  const int p = static_cast<int>(ctx.p());
  const FieldElement uinv = cocycle.unit.inverse();
  const Poly a_hat = cocycle.normalized();
  const Poly g_hat = s1.g * uinv;
  const Poly h_hat = s1.h * uinv;
  const Poly target = z_minus_one_power(ctx, 2 * p);
  const Poly zp = Poly::z_power(ctx, p);
  const Poly one_l = z_minus_one_power(ctx, s1.l);

  const ExtGcd eg = poly_ext_gcd(s1.f, g_hat);
  if (!(eg.gcd == one_l)) fail("gcd(f, g) != (z-1)^l in step 2");
  const Poly f_bar = poly_exact_div(s1.f, one_l);
  const Poly g_bar = poly_exact_div(g_hat, one_l);
  const Poly lift = z_minus_one_power(ctx, 2 * p - s1.l);

  Poly beta(ctx), gamma(ctx);
  if (s1.f.degree() >= g_hat.degree()) {
    beta = poly_divrem(eg.v * lift, f_bar).second;
    gamma = poly_exact_div(target - g_hat * beta, s1.f);
  } else {
    gamma = poly_divrem(eg.u * lift, g_bar).second;
    beta = poly_exact_div(target - s1.f * gamma, g_hat);
  }

  SigmaBranch branch = SigmaBranch::None;
  if (s1.l > 0) {
    Poly coef(ctx), rhs(ctx);
    if (!f_bar.evaluate(ctx.field(1)).is_zero()) {
      branch = SigmaBranch::CaseA;  // (z-1)^l | h (beta - sigma f_bar) - z^p
      coef = h_hat * f_bar;
      rhs = h_hat * beta - zp;
    } else {
      branch = SigmaBranch::CaseB;  // (z-1)^l | A - (gamma + sigma g_bar) h
      coef = g_bar * h_hat;
      rhs = a_hat - gamma * h_hat;
    }
    const auto inv = poly_inverse_mod(coef, one_l);
    if (!inv) fail(std::string("sigma equation is not solvable in case ") + std::string(to_string(branch)));
    const Poly sigma = poly_divrem(rhs * *inv, one_l).second;
    beta = beta - sigma * f_bar;
    gamma = gamma + sigma * g_bar;
  }

  // alpha = -(A beta' - z^p gamma') / ((z-1)^{2p} z^p) makes the first row of P M
  // equal (gamma', beta') (z-1)^{-p}.
  const Poly x = a_hat * beta - zp * gamma;
  auto [alpha_num, rem] = poly_divrem(x, target);
  if (!rem.is_zero()) fail("A beta' - z^p gamma' is not divisible by (z-1)^{2p}");

  FactorizationCertificate cert{cocycle, s1.f, s1.g, s1.h, s1.l, s1.c, g_hat, h_hat,
                                beta, gamma, LaurentPoly(-alpha_num, -p), branch};
  check_exact_invariants(cert);
  return cert;
}

BirkhoffResult run_birkhoff(const WittRingElement& lifted) {
  const CocyclePolynomial cocycle = build_A_primitive(lifted);
  const Step1Result s1 = birkhoff_step1(cocycle.numerator);
  FactorizationCertificate cert = birkhoff_step2(cocycle, s1);
  const SplittingType st = make_splitting(cert.n(), SplittingMethod::Birkhoff);
  return BirkhoffResult{st, std::move(cert)};
}

SplittingType splitting_from_birkhoff(const WittRingElement& lifted) { return run_birkhoff(lifted).splitting; }

int verification_degree(std::uint32_t p, int d) {
  const auto size = [p](int e) {
    std::uint64_t s = 1;
    for (int i = 0; i < e; ++i) s *= p;
    return s;
  };
  const std::uint64_t minimum = 4ULL * p + 8;
  const std::uint64_t preferred = std::max<std::uint64_t>(minimum, 64ULL * p);
  for (int e = d; e <= kMaxExtensionDegree; e += d) {
    if (size(e) >= preferred) return e;
  }
  for (int e = (kMaxExtensionDegree / d) * d; e >= d; e -= d) {
    if (size(e) >= minimum) return e;
  }
  throw Error(ErrorCode::DegreeOutOfRange, "no admissible verification field");
}

bool verify_certificate(const TransitionMatrix& m, const FactorizationCertificate& cert, std::uint64_t seed) {
  const ReductionContext& ctx = m.context();
  if (&cert.cocycle.context() != &ctx) return false;
  const ReductionContext& big = make_context(ctx.p(), verification_degree(ctx.p(), ctx.degree()));
  const FieldEmbedding embed(ctx, big);
  const FieldElement l0 = embed(m.lambda0);

  const Mat2 P = cert.P();
  const Mat2 Q = cert.Q();
  const Mat2 D = cert.target();
  const auto value = [&](const Mat2& x, const FieldElement& pt) {
    std::array<std::array<FieldElement, 2>, 2> out;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) out[i][j] = x.e[i][j].evaluate(pt, embed);
    }
    return out;
  };
  const auto mul = [](const auto& a, const auto& b) {
    auto out = a;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
    }
    return out;
  };

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> pick(0, big.q() - 1);
  constexpr int kPoints = 20;
  for (int found = 0; found < kPoints;) {
    const FieldElement x = big.field_element(pick(rng));
    if (x.is_zero() || x.is_one() || x == l0) continue;
    ++found;
    if (mul(mul(value(P, x), value(m.m, x)), value(Q, x)) != value(D, x)) return false;
  }
  return P.det().is_monomial_unit() && Q.det().is_monomial_unit();
}

}  // namespace higgsflow
