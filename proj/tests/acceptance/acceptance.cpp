// One PASS/FAIL line per acceptance criterion.  Exit status is nonzero when
// any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "higgsflow/birkhoff.hpp"
#include "higgsflow/cechoracle.hpp"
#include "higgsflow/scanharness.hpp"

using namespace higgsflow;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

Poly P(const ReductionContext& c, std::vector<std::int64_t> coeffs) {
  std::vector<FieldElement> v;
  for (auto x : coeffs) v.push_back(c.field(x));
  return Poly(c, std::move(v));
}

std::string where(std::uint32_t p, std::int64_t l) {
  return "p=" + std::to_string(p) + " lambda~=" + std::to_string(l);
}

Outcome micro_case(std::int64_t lambda, const std::vector<std::int64_t>& a, std::int64_t l0, std::int64_t l1,
                   const std::vector<std::int64_t>& f, const std::vector<std::int64_t>& g, int l, int c, int n) {
  Outcome o;
  const ReductionContext& k = make_context(3, 1);
  const WittRingElement lifted = k.witt(lambda);
  const WittParameter w = witt_decompose(lifted, WittConvention::Twisted);
  if (!(w.lambda0 == k.field(l0) && w.lambda1 == k.field(l1))) o.fail("Witt coordinates differ");
  const CocyclePolynomial prim = build_A_primitive(lifted);
  if (!(prim.numerator == P(k, a))) o.fail("primitive A differs");
  if (!(build_A_closed(k.field(l0), k.field(l1)).numerator == P(k, a))) o.fail("closed A differs");
  const Step1Result s = birkhoff_step1(prim.numerator);
  if (!(s.f == P(k, f) && s.g == P(k, g) && s.l == l && s.c == c)) o.fail("step 1 output differs");
  const int nt = splitting_from_T(k.field(l0), k.field(l1)).n;
  const int nb = splitting_from_birkhoff(lifted).n;
  const int nc = splitting_from_cech(lifted).n;
  if (nt != n || nb != n || nc != n) {
    o.fail("n_t=" + std::to_string(nt) + " n_birkhoff=" + std::to_string(nb) + " n_cech=" + std::to_string(nc));
  }
  if (periodicity_pair(k.field(l0), k.field(l1)) != (n == 1)) o.fail("periodicity_pair disagrees");
  if (n == 0 && mat_det(t_submatrix(build_T(k.field(l0), k.field(l1)), 0)) != k.field(2)) o.fail("det T0 != 2");
  return o;
}

Outcome criterion1() { return micro_case(-1, {0, 2, 0, 0, 0, 1}, 2, 0, {2, 0, 1}, {1, 1, 1}, 1, 2, 1); }

Outcome criterion2() { return micro_case(2, {1, 2, 0, 2, 0, 1}, 2, 1, {2, 0, 1, 1}, {1, 2}, 0, 3, 0); }

Outcome criterion3() {
  Outcome o;
  long cases = 0;
  for (std::uint32_t p : {3u, 5u, 7u}) {
    const ReductionContext& k = make_context(p, 1);
    for (std::int64_t l = 0; l < static_cast<std::int64_t>(p * p); ++l) {
      if (l % p == 0 || l % p == 1) continue;
      ++cases;
      const WittRingElement lifted = k.witt(l);
      const WittParameter w = witt_decompose(lifted, WittConvention::Twisted);
      const int nt = splitting_from_T(w.lambda0, w.lambda1).n;
      const BirkhoffResult b = run_birkhoff(lifted);
      const int nc = splitting_from_cech(lifted).n;
      if (nt != b.splitting.n || nt != nc) {
        o.fail(where(p, l) + " n_t=" + std::to_string(nt) + " n_birkhoff=" + std::to_string(b.splitting.n) +
               " n_cech=" + std::to_string(nc));
      }
      if (!validate_T_R(w.lambda0, w.lambda1)) o.fail(where(p, l) + " T/R index identity fails");
      if (!verify_certificate(build_transition(b.certificate.cocycle), b.certificate, static_cast<std::uint64_t>(l))) {
        o.fail(where(p, l) + " certificate rejected");
      }
    }
  }
  if (o.ok) o.detail = std::to_string(cases) + " inputs, 0 mismatches";
  return o;
}

Outcome criterion4() {
  Outcome o;
  for (std::uint32_t p : {3u, 5u, 7u, 11u}) {
    const ReductionContext& k = make_context(p, 1);
    for (std::uint64_t a = 2; a < p; ++a) {
      const Poly d = det_T0_polynomial(k.field_element(a));
      if (d.degree() != static_cast<int>(p) || !d.leading().is_one()) {
        o.fail("det T0 not monic of degree p at p=" + std::to_string(p) + " lambda0=" + std::to_string(a));
      }
    }
  }
  for (std::uint32_t p : {3u, 5u, 7u}) {
    const ScanReport r = run_enumerate(p, MethodSet{});
    if (r.enumerate->max_per_lambda0 > static_cast<int>(p)) o.fail("more than p periodic lambda1 at p=" + std::to_string(p));
  }
  return o;
}

Outcome criterion5() {
  Outcome o;
  const ScanReport r = run_enumerate(3, MethodSet{true, true, true});
  if (r.enumerate->periodic_pairs != 1) o.fail(std::to_string(r.enumerate->periodic_pairs) + " periodic pairs");
  for (const auto& row : r.rows) {
    if (row.periodic && !(row.lambda0 == "2" && row.lambda1 == "0")) o.fail("periodic pair " + row.lambda0 + "," + row.lambda1);
  }
  if (r.mismatches() != 0) o.fail("method mismatch in enumeration");
  if (o.ok) o.detail = "(lambda0, lambda1) = (2, 0)";
  return o;
}

Outcome criterion6() {
  Outcome o;
  std::mt19937_64 rng(6);
  const std::uint32_t primes[] = {3, 5, 7, 11, 13};
  int perturbed = 0;
  for (int k = 0; k < 100;) {
    const std::uint32_t p = primes[rng() % 5];
    const int d = 1 + static_cast<int>(rng() % 2);
    const ReductionContext& c = make_context(p, d);
    const FieldElement l0 = c.field_element(rng() % c.q());
    if (l0.is_zero() || l0.is_one()) continue;
    ++k;
    const WittRingElement lifted = witt_compose(l0, c.field_element(rng() % c.q()), WittConvention::Twisted);
    const BirkhoffResult b = run_birkhoff(lifted);
    const TransitionMatrix m = build_transition(b.certificate.cocycle);
    const std::string at = "p=" + std::to_string(p) + " d=" + std::to_string(d) + " lambda~=" + to_string(lifted);
    if (!verify_certificate(m, b.certificate, rng())) o.fail(at + " certificate rejected");
    FactorizationCertificate bad = b.certificate;
    bad.f = bad.f + Poly::z_power(c, 0);
    if (verify_certificate(m, bad, rng())) o.fail(at + " perturbed f accepted");
    bad = b.certificate;
    bad.alpha = bad.alpha + LaurentPoly(Poly::z_power(c, 0), static_cast<int>(rng() % 5) - 2);
    if (verify_certificate(m, bad, rng())) o.fail(at + " perturbed alpha accepted");
    bad = b.certificate;
    bad.gamma = bad.gamma + Poly::z_power(c, 1);
    if (verify_certificate(m, bad, rng())) o.fail(at + " perturbed gamma accepted");
    perturbed += 3;
  }
  if (o.ok) o.detail = "100 certificates verified, " + std::to_string(perturbed) + " perturbations rejected";
  return o;
}

Outcome criterion7() {
  Outcome o;
  long cases = 0;
  for (std::uint32_t p : {3u, 5u, 7u}) {
    for (int d : {1, 2}) {
      const ReductionContext& c = make_context(p, d);
      for (auto conv : {WittConvention::Standard, WittConvention::Twisted}) {
        for (std::uint64_t i = 0; i < c.q() * c.q(); ++i) {
          const WittRingElement x = c.witt_element(i);
          const FieldElement r = c.reduce(x);
          if (r.is_zero() || r.is_one()) continue;
          const WittParameter w = witt_decompose(x, conv);
          if (!(witt_compose(w.lambda0, w.lambda1, conv) == x) || !(w.lambda0 == r)) {
            o.fail("p=" + std::to_string(p) + " d=" + std::to_string(d) + " round trip fails at " + to_string(x));
          }
          ++cases;
        }
      }
      for (std::uint64_t a = 0; a < c.q(); ++a) {
        const FieldElement x = c.field_element(a);
        if (!(c.reduce(teichmuller(x)) == x)) o.fail("teichmuller does not lift " + to_string(x));
        for (std::uint64_t b = 0; b < c.q(); ++b) {
          const FieldElement y = c.field_element(b);
          if (!(teichmuller(x * y) == teichmuller(x) * teichmuller(y))) {
            o.fail("teichmuller not multiplicative at " + to_string(x) + ", " + to_string(y));
          }
          ++cases;
        }
      }
    }
  }
  if (o.ok) o.detail = std::to_string(cases) + " checks";
  return o;
}

Outcome criterion8() {
  Outcome o;
  ScanOptions opts;
  opts.range = {5, 97};
  opts.methods = MethodSet{true, true, false};
  const ScanReport first = run_verify_beauville(opts);
  opts.jobs = 4;
  const ScanReport second = run_verify_beauville(opts);
  if (first.entries.size() != 17) o.fail(std::to_string(first.entries.size()) + " entry summaries");
  if (to_json(first) != to_json(second)) o.fail("report differs between runs");
  for (std::size_t i = 0; i < first.entries.size() && i < second.entries.size(); ++i) {
    if (first.entries[i].exceptional_primes != second.entries[i].exceptional_primes) o.fail("unstable exceptional primes");
  }
  if (first.mismatches() != 0) o.fail(std::to_string(first.mismatches()) + " cross-method mismatches");

  opts.range = {3, 3};
  opts.jobs = 1;
  const ScanReport small = run_verify_beauville(opts);
  bool minus_one = false, two = false;
  for (const auto& row : small.rows) {
    if (row.lambda == "-1") minus_one = row.periodic && row.n_t == 1;
    if (row.lambda == "2") two = !row.periodic && row.n_t == 0;
  }
  if (!minus_one) o.fail("lambda=-1 at p=3 not periodic");
  if (!two) o.fail("lambda=2 at p=3 not exceptional");
  if (o.ok) {
    int periodic = 0, good = 0;
    for (const auto& e : first.entries) {
      periodic += e.periodic;
      good += e.good;
    }
    o.detail = "17 summaries, " + std::to_string(periodic) + "/" + std::to_string(good) + " periodic good places";
  }
  return o;
}

}  // namespace

int main() {
  const std::function<Outcome()> criteria[] = {criterion1, criterion2, criterion3, criterion4,
                                               criterion5, criterion6, criterion7, criterion8};
  const double budget[] = {1, 1, 120, 60, 60, 60, 60, 300};
  int failures = 0;
  for (int i = 0; i < 8; ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.ok && secs > budget[i]) o.fail("took longer than " + std::to_string(static_cast<int>(budget[i])) + " s");
    failures += !o.ok;
    std::printf("criterion %d: %s (%.2f s)%s%s\n", i + 1, o.ok ? "PASS" : "FAIL", secs, o.detail.empty() ? "" : " ",
                o.detail.c_str());
  }
  std::fflush(stdout);
  return failures == 0 ? 0 : 1;
}
