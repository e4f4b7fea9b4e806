#include "higgsflow/scanharness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "higgsflow/birkhoff.hpp"
#include "higgsflow/cechoracle.hpp"
#include "higgsflow/frobcocycle.hpp"
#include "higgsflow/tcriterion.hpp"

#ifndef HIGGSFLOW_VERSION
#define HIGGSFLOW_VERSION "0.0.0"
#endif

namespace higgsflow {

namespace {

using Json = nlohmann::ordered_json;

// Runs f(0..n-1) on up to `jobs` threads; results keep index order and the
// first exception (by index) is rethrown.
template <class R, class F>
std::vector<R> parallel_map(std::size_t n, int jobs, F&& f) {
  std::vector<std::optional<R>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        slots[i].emplace(f(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int threads = std::clamp(jobs, 1, static_cast<int>(std::max<std::size_t>(n, 1)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  std::vector<R> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

std::uint32_t parse_u32(std::string_view s) {
  std::uint32_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::ParseError, "not a non-negative integer: '" + std::string(s) + "'");
  }
  return v;
}

void check_range(const PrimeRange& r, std::uint32_t max) {
  if (r.lo < 3 || r.hi > max || r.lo > r.hi) {
    throw Error(ErrorCode::InvalidRange, "prime range " + std::to_string(r.lo) + ":" + std::to_string(r.hi) +
                                             " must lie within [3, " + std::to_string(max) + "]");
  }
}

void check_methods(const MethodSet& m, std::uint32_t max_p) {
  if (!m.t && !m.birkhoff && !m.cech) throw Error(ErrorCode::MethodUnavailable, "no method selected");
  if (m.cech && max_p > kCechMaxPrime) {
    throw Error(ErrorCode::MethodUnavailable, "cech is limited to p <= " + std::to_string(kCechMaxPrime));
  }
}

bool row_less(const ScanRow& a, const ScanRow& b) {
  return std::tie(a.lambda, a.p, a.place) < std::tie(b.lambda, b.p, b.place);
}

std::optional<int> agreed_n(const ScanRow& row) {
  if (!row.agree || row.bad) return std::nullopt;
  for (const auto& n : {row.n_t, row.n_birkhoff, row.n_cech}) {
    if (n) return n;
  }
  return std::nullopt;
}

EntrySummary summarize(const std::string& label, const std::vector<ScanRow>& rows) {
  EntrySummary s;
  s.lambda = label;
  std::set<std::uint32_t> exceptional;
  for (const ScanRow& r : rows) {
    if (r.lambda != label) continue;
    ++s.rows;
    if (r.bad) {
      ++s.bad;
      continue;
    }
    ++s.good;
    if (!r.agree) {
      ++s.mismatches;
      continue;
    }
    if (r.periodic) {
      ++s.periodic;
    } else {
      exceptional.insert(r.p);
    }
  }
  s.exceptional_primes.assign(exceptional.begin(), exceptional.end());
  return s;
}

std::string padded(std::uint64_t value, std::uint64_t max) {
  const std::size_t width = std::to_string(max).size();
  std::string s = std::to_string(value);
  return std::string(width - std::min(width, s.size()), '0') + s;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string opt_csv(const std::optional<int>& v) { return v ? std::to_string(*v) : std::string(); }

Json opt_json(const std::optional<int>& v) { return v ? Json(*v) : Json(nullptr); }

Json row_json(const ScanRow& r) {
  Json j;
  j["lambda"] = r.lambda;
  j["p"] = r.p;
  j["place"] = r.place;
  j["d"] = r.d;
  j["lambda0"] = r.bad ? Json(nullptr) : Json(r.lambda0);
  j["lambda1"] = r.bad ? Json(nullptr) : Json(r.lambda1);
  j["n_t"] = opt_json(r.n_t);
  j["n_birkhoff"] = opt_json(r.n_birkhoff);
  j["n_cech"] = opt_json(r.n_cech);
  j["periodic"] = r.periodic;
  j["agree"] = r.agree;
  j["bad_reason"] = r.bad ? Json(std::string(to_string(*r.bad))) : Json(nullptr);
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

std::string fmt_rate(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", x);
  return buf;
}

std::string join_primes(const std::vector<std::uint32_t>& ps) {
  if (ps.empty()) return "none";
  std::string s;
  for (std::size_t i = 0; i < ps.size(); ++i) s += (i ? " " : "") + std::to_string(ps[i]);
  return s;
}

}  // namespace

std::string_view library_version() noexcept { return HIGGSFLOW_VERSION; }

MethodSet parse_methods(std::string_view text) {
  MethodSet m{false, false, false};
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const std::string_view tok = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    if (tok == "t") {
      m.t = true;
    } else if (tok == "birkhoff") {
      m.birkhoff = true;
    } else if (tok == "cech") {
      m.cech = true;
    } else {
      throw Error(ErrorCode::ParseError, "unknown method '" + std::string(tok) + "' (expected t, birkhoff, cech)");
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return m;
}

std::string to_string(const MethodSet& m) {
  std::string s;
  const auto add = [&s](bool on, std::string_view name) {
    if (!on) return;
    if (!s.empty()) s += ',';
    s += name;
  };
  add(m.t, "t");
  add(m.birkhoff, "birkhoff");
  add(m.cech, "cech");
  return s;
}

PrimeRange parse_prime_range(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    const std::uint32_t p = parse_u32(text);
    return {p, p};
  }
  return {parse_u32(text.substr(0, colon)), parse_u32(text.substr(colon + 1))};
}

std::vector<std::uint32_t> primes_in(const PrimeRange& range) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t n = range.lo; n <= range.hi; ++n) {
    if (is_prime(n)) out.push_back(n);
  }
  return out;
}

int ScanReport::mismatches() const noexcept {
  return static_cast<int>(std::count_if(rows.begin(), rows.end(), [](const ScanRow& r) { return !r.agree; }));
}

bool SelftestSummary::passed() const noexcept {
  return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.passed; });
}

ScanRow evaluate_row(std::string label, const ReductionDatum& datum, const MethodSet& methods) {
  ScanRow row;
  row.lambda = std::move(label);
  row.p = datum.p;
  row.place = datum.place;
  row.d = datum.d;
  if (!datum.good()) {
    row.bad = datum.bad;
    return row;
  }
  const WittParameter& w = *datum.witt;
  row.lambda0 = to_string(w.lambda0);
  row.lambda1 = to_string(w.lambda1);

  const auto attempt = [&row](std::string_view name, auto&& compute, std::optional<int>& slot) {
    try {
      slot = compute();
    } catch (const Error& e) {
      if (!row.error.empty()) row.error += "; ";
      row.error += std::string(name) + ": " + e.what();
    }
  };
  if (methods.t) attempt("t", [&] { return splitting_from_T(w.lambda0, w.lambda1).n; }, row.n_t);
  if (methods.birkhoff) attempt("birkhoff", [&] { return splitting_from_birkhoff(w.lifted).n; }, row.n_birkhoff);
  if (methods.cech) attempt("cech", [&] { return splitting_from_cech(w.lifted).n; }, row.n_cech);

  std::optional<int> first;
  row.agree = row.error.empty();
  for (const auto& n : {row.n_t, row.n_birkhoff, row.n_cech}) {
    if (!n) continue;
    if (!first) first = n;
    if (*n != *first) row.agree = false;
  }
  row.periodic = row.agree && first && *first == 1;
  return row;
}

namespace {

std::vector<ScanRow> scan_rows(const std::vector<const LambdaSpec*>& specs, const ScanOptions& options) {
  const std::vector<std::uint32_t> primes = primes_in(options.range);
  const std::size_t tasks = specs.size() * primes.size();
  auto chunks = parallel_map<std::vector<ScanRow>>(tasks, options.jobs, [&](std::size_t i) {
    const LambdaSpec& spec = *specs[i / primes.size()];
    std::vector<ScanRow> rows;
    for (const ReductionDatum& d : reduce_at_prime(spec, primes[i % primes.size()], options.convention,
                                                   options.both_embeddings)) {
      rows.push_back(evaluate_row(spec.label, d, options.methods));
    }
    return rows;
  });
  std::vector<ScanRow> rows;
  for (auto& c : chunks) {
    for (auto& r : c) rows.push_back(std::move(r));
  }
  std::stable_sort(rows.begin(), rows.end(), row_less);
  return rows;
}

ScanReport make_report(std::string command, WittConvention convention, std::uint64_t seed) {
  ScanReport r;
  r.version = std::string(library_version());
  r.convention = convention;
  r.seed = seed;
  r.command = std::move(command);
  return r;
}

}  // namespace

ScanReport run_scan(const LambdaSpec& spec, const ScanOptions& options) {
  check_range(options.range, kScanMaxPrime);
  check_methods(options.methods, options.range.hi);
  ScanReport report = make_report("scan", options.convention, options.seed);
  report.rows = scan_rows({&spec}, options);
  report.entries.push_back(summarize(spec.label, report.rows));
  return report;
}

ScanReport run_verify_beauville(const ScanOptions& options) {
  check_range(options.range, kBeauvilleMaxPrime);
  check_methods(options.methods, options.range.hi);
  ScanReport report = make_report("beauville", options.convention, options.seed);
  std::vector<const LambdaSpec*> specs;
  for (const BeauvilleEntry& e : beauville_catalog()) specs.push_back(&e.spec);
  report.rows = scan_rows(specs, options);
  for (const LambdaSpec* s : specs) report.entries.push_back(summarize(s->label, report.rows));
  return report;
}

ScanReport run_enumerate(std::uint32_t p, const MethodSet& methods, int jobs) {
  if (p < 3 || p > kEnumerateMaxPrime || !is_prime(p)) {
    throw Error(ErrorCode::InvalidRange, "enumerate needs a prime 3 <= p <= " + std::to_string(kEnumerateMaxPrime));
  }
  check_methods(methods, p);
  const ReductionContext& ctx = make_context(p, 1);
  const std::uint64_t p2 = static_cast<std::uint64_t>(p) * p;

  std::vector<WittParameter> params;
  for (std::uint32_t a = 2; a < p; ++a) {
    for (std::uint32_t b = 0; b < p; ++b) {
      const WittRingElement l = witt_compose(ctx.field(a), ctx.field(b), WittConvention::Twisted);
      params.push_back(witt_decompose(l, WittConvention::Twisted));
    }
  }
  ScanReport report = make_report("enumerate", WittConvention::Twisted, 0);
  report.rows = parallel_map<ScanRow>(params.size(), jobs, [&](std::size_t i) {
    const ReductionDatum datum{p, 0, 1, params[i], std::nullopt};
    return evaluate_row(padded(params[i].lifted.index(), p2 - 1), datum, methods);
  });
  std::stable_sort(report.rows.begin(), report.rows.end(), row_less);

  EnumerateStats st;
  std::map<std::string, int> per_l0;
  std::map<std::uint64_t, std::optional<int>> n_of;
  for (std::size_t i = 0; i < params.size(); ++i) {
    per_l0.try_emplace(to_string(params[i].lambda0), 0);
  }
  for (const ScanRow& r : report.rows) {
    if (r.periodic) {
      ++st.periodic_pairs;
      ++per_l0[r.lambda0];
    }
    n_of[std::stoull(r.lambda)] = agreed_n(r);
  }
  for (std::uint32_t a = 2; a < p; ++a) {
    const std::string key = to_string(ctx.field(a));
    st.periodic_per_lambda0.emplace_back(key, per_l0[key]);
    st.max_per_lambda0 = std::max(st.max_per_lambda0, per_l0[key]);
  }

  // Moebius orbits in W_2: does n depend on the representative?
  std::set<std::uint64_t> seen;
  for (const auto& [idx, n] : n_of) {
    if (seen.count(idx)) continue;
    std::vector<std::uint64_t> members;
    for (const OrbitMember& m : w2_orbit(ctx.witt_element(idx))) {
      if (m.admissible) members.push_back(m.value->index());
    }
    std::sort(members.begin(), members.end());
    seen.insert(members.begin(), members.end());
    ++st.orbits;
    std::set<int> values;
    std::string desc;
    for (const std::uint64_t m : members) {
      const auto it = n_of.find(m);
      const std::optional<int> v = it == n_of.end() ? std::nullopt : it->second;
      if (v) values.insert(*v);
      desc += (desc.empty() ? "" : ", ") + padded(m, p2 - 1) + ":n=" + (v ? std::to_string(*v) : std::string("?"));
    }
    if (values.size() > 1) {
      if (st.orbits_with_varying_n == 0) st.first_varying_orbit = desc;
      ++st.orbits_with_varying_n;
    }
  }
  report.enumerate = std::move(st);
  EntrySummary all;
  all.lambda = "all";
  for (const ScanRow& r : report.rows) {
    ++all.rows;
    ++all.good;
    if (!r.agree) {
      ++all.mismatches;
    } else if (r.periodic) {
      ++all.periodic;
    }
  }
  report.entries.push_back(std::move(all));
  return report;
}

// ---------------------------------------------------------------------------
// self test

namespace {

struct Suite {
  SuiteResult result;
  explicit Suite(std::string name) { result.name = std::move(name); }
  // Records a case; keeps the first failure.
  void check(bool ok, const std::function<std::string()>& describe) {
    ++result.cases;
    if (!ok && result.passed) {
      result.passed = false;
      result.counterexample = describe();
    }
  }
};

std::vector<std::uint32_t> odd_primes_upto(std::uint32_t max_p) { return primes_in({3, max_p}); }

template <class F>
void for_each_pair(const ReductionContext& ctx, F&& f) {
  for (std::uint64_t a = 0; a < ctx.q(); ++a) {
    const FieldElement l0 = ctx.field_element(a);
    if (l0.is_zero() || l0.is_one()) continue;
    for (std::uint64_t b = 0; b < ctx.q(); ++b) f(l0, ctx.field_element(b));
  }
}

std::string pair_text(const FieldElement& l0, const FieldElement& l1) {
  const ReductionContext& ctx = l0.context();
  return "p=" + std::to_string(ctx.p()) + " d=" + std::to_string(ctx.degree()) + " lambda0=" + to_string(l0) +
         " lambda1=" + to_string(l1);
}

SuiteResult suite_witt(std::uint32_t max_p) {
  Suite s("witt_roundtrip");
  for (const std::uint32_t p : odd_primes_upto(std::min<std::uint32_t>(max_p, 7))) {
    for (int d = 1; d <= 2; ++d) {
      const ReductionContext& ctx = make_context(p, d);
      for (const WittConvention conv : {WittConvention::Standard, WittConvention::Twisted}) {
        for_each_pair(ctx, [&](const FieldElement& l0, const FieldElement& l1) {
          const WittParameter w = witt_decompose(witt_compose(l0, l1, conv), conv);
          s.check(w.lambda0 == l0 && w.lambda1 == l1,
                  [&] { return pair_text(l0, l1) + " convention=" + std::string(to_string(conv)); });
        });
        for (std::uint64_t i = 0; i < ctx.q() * ctx.q(); ++i) {
          const WittRingElement x = ctx.witt_element(i);
          const FieldElement r = ctx.reduce(x);
          if (r.is_zero() || r.is_one()) continue;
          s.check(witt_compose(r, witt_decompose(x, conv).lambda1, conv) == x,
                  [&] { return "compose(decompose(" + to_string(x) + ")) differs"; });
        }
      }
      for (std::uint64_t a = 0; a < ctx.q(); ++a) {
        const FieldElement x = ctx.field_element(a);
        s.check(ctx.reduce(teichmuller(x)) == x, [&] { return "tau(" + to_string(x) + ") does not reduce to it"; });
        for (std::uint64_t b = 0; b < ctx.q(); ++b) {
          const FieldElement y = ctx.field_element(b);
          s.check(teichmuller(x) * teichmuller(y) == teichmuller(x * y),
                  [&] { return "tau not multiplicative at " + to_string(x) + ", " + to_string(y); });
        }
      }
    }
  }
  return s.result;
}

SuiteResult suite_closed_vs_primitive(std::uint32_t max_p) {
  Suite s("closed_vs_primitive");
  for (const std::uint32_t p : odd_primes_upto(max_p)) {
    for (int d = 1; d <= (p <= 7 ? 2 : 1); ++d) {
      for_each_pair(make_context(p, d), [&](const FieldElement& l0, const FieldElement& l1) {
        const WittRingElement l = witt_compose(l0, l1, WittConvention::Twisted);
        s.check(build_A_primitive(l).numerator == build_A_closed(l0, l1).numerator, [&] { return pair_text(l0, l1); });
      });
    }
  }
  return s.result;
}

SuiteResult suite_t_r(std::uint32_t max_p, InjectedFault fault) {
  Suite s("t_r_identity");
  for (const std::uint32_t p : odd_primes_upto(max_p)) {
    for_each_pair(make_context(p, 1), [&](const FieldElement& l0, const FieldElement& l1) {
      const CocyclePolynomial a = build_A_closed(l0, l1);
      const RemainderSystem rs = remainder_system(fault == InjectedFault::DropUnit ? a.normalized() : a.numerator);
      const CriterionMatrix t = build_T(l0, l1);
      const auto bad = first_T_R_mismatch(t, rs);
      s.check(!bad, [&] {
        const int i = bad->row, j = bad->col;
        const int tj = j < static_cast<int>(p) ? j + 1 : 3 * static_cast<int>(p) - j;
        return pair_text(l0, l1) + ": R[" + std::to_string(i) + "][" + std::to_string(j) + "] = " +
               to_string(rs.r(i, j)) + " but T[" + std::to_string(i + 1) + "][" + std::to_string(tj) +
               "] = " + to_string(t.t(i, tj - 1));
      });
    });
  }
  return s.result;
}

SuiteResult suite_agreement(std::uint32_t max_p) {
  Suite s("three_method_agreement");
  for (const std::uint32_t p : odd_primes_upto(max_p)) {
    const ReductionContext& ctx = make_context(p, 1);
    for (std::uint64_t i = 0; i < ctx.q() * ctx.q(); ++i) {
      const WittRingElement l = ctx.witt_element(i);
      const FieldElement r = ctx.reduce(l);
      if (r.is_zero() || r.is_one()) continue;
      const ReductionDatum datum{p, 0, 1, witt_decompose(l, WittConvention::Twisted), std::nullopt};
      const ScanRow row = evaluate_row(std::to_string(i), datum, MethodSet{true, true, true});
      s.check(row.agree, [&] {
        return "p=" + std::to_string(p) + " lambda~=" + std::to_string(i) + " n_t=" + opt_csv(row.n_t) +
               " n_birkhoff=" + opt_csv(row.n_birkhoff) + " n_cech=" + opt_csv(row.n_cech) +
               (row.error.empty() ? "" : " error: " + row.error);
      });
    }
  }
  return s.result;
}

SuiteResult suite_certificates(std::uint32_t max_p, std::uint64_t seed) {
  Suite s("certificate_verification");
  const std::vector<std::uint32_t> primes = odd_primes_upto(max_p);
  std::mt19937_64 rng(seed);
  constexpr int kCases = 100;
  for (int k = 0; k < kCases; ++k) {
    const std::uint32_t p = primes[rng() % primes.size()];
    const int d = 1 + static_cast<int>(rng() % 2);
    const ReductionContext& ctx = make_context(p, d);
    const std::uint64_t q = ctx.q();
    const FieldElement l0 = ctx.field_element(2 + rng() % (q - 2));
    const FieldElement l1 = ctx.field_element(rng() % q);
    const WittRingElement l = witt_compose(l0, l1, WittConvention::Twisted);
    try {
      const BirkhoffResult br = run_birkhoff(l);
      const TransitionMatrix m = build_transition(br.certificate.cocycle);
      const std::uint64_t vseed = rng();
      s.check(verify_certificate(m, br.certificate, vseed), [&] { return pair_text(l0, l1) + ": certificate rejected"; });
      s.check(splitting_from_T(l0, l1).n == br.splitting.n, [&] { return pair_text(l0, l1) + ": n_t != n_birkhoff"; });
      FactorizationCertificate bad_f = br.certificate;
      bad_f.f = bad_f.f + Poly::z_power(ctx, 0);
      s.check(!verify_certificate(m, bad_f, vseed), [&] { return pair_text(l0, l1) + ": perturbed f accepted"; });
      FactorizationCertificate bad_alpha = br.certificate;
      bad_alpha.alpha = bad_alpha.alpha + LaurentPoly(Poly::z_power(ctx, 0), 0);
      s.check(!verify_certificate(m, bad_alpha, vseed),
              [&] { return pair_text(l0, l1) + ": perturbed alpha accepted"; });
    } catch (const Error& e) {
      s.check(false, [&] { return pair_text(l0, l1) + ": " + e.what(); });
    }
  }
  return s.result;
}

SuiteResult suite_monic_det(std::uint32_t max_p) {
  Suite s("monic_determinant");
  for (const std::uint32_t p : odd_primes_upto(max_p)) {
    const ReductionContext& ctx = make_context(p, 1);
    for (std::uint32_t a = 2; a < p; ++a) {
      const Poly det = det_T0_polynomial(ctx.field(a));
      s.check(det.degree() == static_cast<int>(p) && det.leading().is_one(), [&] {
        return "p=" + std::to_string(p) + " lambda0=" + std::to_string(a) + ": det T0 has degree " +
               std::to_string(det.degree()) + " and leading coefficient " + to_string(det.leading());
      });
    }
  }
  return s.result;
}

}  // namespace

SelftestSummary run_selftest(std::uint32_t max_p, std::uint64_t seed, InjectedFault fault) {
  if (max_p < 3 || max_p > kSelftestMaxPrime) {
    throw Error(ErrorCode::InvalidRange, "selftest needs 3 <= maxP <= " + std::to_string(kSelftestMaxPrime));
  }
  SelftestSummary out{max_p, seed, {}};
  out.suites.push_back(suite_witt(max_p));
  out.suites.push_back(suite_closed_vs_primitive(max_p));
  out.suites.push_back(suite_t_r(max_p, fault));
  out.suites.push_back(suite_agreement(max_p));
  out.suites.push_back(suite_certificates(max_p, seed));
  out.suites.push_back(suite_monic_det(max_p));
  return out;
}

// ---------------------------------------------------------------------------
// emission

std::string to_csv(const ScanReport& report) {
  std::string out = "lambda,p,place,d,lambda0,lambda1,n_t,n_birkhoff,n_cech,periodic,agree,bad_reason\n";
  for (const ScanRow& r : report.rows) {
    out += csv_field(r.lambda) + ',' + std::to_string(r.p) + ',' + std::to_string(r.place) + ',' +
           std::to_string(r.d) + ',' + csv_field(r.bad ? "" : r.lambda0) + ',' + csv_field(r.bad ? "" : r.lambda1) +
           ',' + opt_csv(r.n_t) + ',' + opt_csv(r.n_birkhoff) + ',' + opt_csv(r.n_cech) + ',' +
           (r.periodic ? "true" : "false") + ',' + (r.agree ? "true" : "false") + ',' +
           (r.bad ? std::string(to_string(*r.bad)) : std::string()) + '\n';
  }
  return out;
}

std::string to_json(const ScanReport& report) {
  Json j;
  j["meta"] = {{"version", report.version},
               {"convention", std::string(to_string(report.convention))},
               {"seed", report.seed},
               {"command", report.command}};
  Json rows = Json::array();
  for (const ScanRow& r : report.rows) rows.push_back(row_json(r));
  j["rows"] = std::move(rows);

  Json summary;
  summary["rows"] = report.rows.size();
  summary["mismatches"] = report.mismatches();
  Json entries = Json::array();
  for (const EntrySummary& e : report.entries) {
    entries.push_back({{"lambda", e.lambda},
                       {"rows", e.rows},
                       {"good", e.good},
                       {"periodic", e.periodic},
                       {"bad", e.bad},
                       {"mismatches", e.mismatches},
                       {"pass_rate", fmt_rate(e.pass_rate())},
                       {"exceptional_primes", e.exceptional_primes}});
  }
  summary["entries"] = std::move(entries);
  if (report.enumerate) {
    const EnumerateStats& st = *report.enumerate;
    Json per = Json::array();
    for (const auto& [l0, n] : st.periodic_per_lambda0) per.push_back({{"lambda0", l0}, {"periodic_lambda1", n}});
    summary["periodic_pairs"] = st.periodic_pairs;
    summary["periodic_per_lambda0"] = std::move(per);
    summary["max_periodic_per_lambda0"] = st.max_per_lambda0;
    summary["orbits"] = st.orbits;
    summary["orbits_with_varying_n"] = st.orbits_with_varying_n;
    summary["first_varying_orbit"] = st.first_varying_orbit;
  }
  j["summary"] = std::move(summary);
  return j.dump(2) + "\n";
}

std::string to_json(const SelftestSummary& s) {
  Json j;
  j["meta"] = {{"version", std::string(library_version())}, {"seed", s.seed}, {"max_p", s.max_p}};
  Json suites = Json::array();
  for (const SuiteResult& r : s.suites) {
    suites.push_back({{"name", r.name}, {"passed", r.passed}, {"cases", r.cases}, {"counterexample", r.counterexample}});
  }
  j["suites"] = std::move(suites);
  j["passed"] = s.passed();
  return j.dump(2) + "\n";
}

std::string summary_text(const ScanReport& report) {
  std::ostringstream os;
  os << report.command << ": " << report.rows.size() << " rows, " << report.mismatches()
     << " mismatches, convention " << to_string(report.convention) << "\n";
  for (const EntrySummary& e : report.entries) {
    os << "  " << e.lambda << ": periodic " << e.periodic << "/" << e.good << " good places (rate "
       << fmt_rate(e.pass_rate()) << "), bad " << e.bad;
    if (e.mismatches) os << ", MISMATCHES " << e.mismatches;
    os << ", exceptional primes: " << join_primes(e.exceptional_primes) << "\n";
  }
  if (report.enumerate) {
    const EnumerateStats& st = *report.enumerate;
    os << "  periodic pairs: " << st.periodic_pairs << " (max per lambda0: " << st.max_per_lambda0 << ")\n";
    for (const auto& [l0, n] : st.periodic_per_lambda0) os << "    lambda0=" << l0 << ": " << n << "\n";
    os << "  W2 orbits: " << st.orbits << ", with varying n: " << st.orbits_with_varying_n;
    if (!st.first_varying_orbit.empty()) os << " (first: " << st.first_varying_orbit << ")";
    os << "\n";
  }
  for (const ScanRow& r : report.rows) {
    if (r.agree) continue;
    os << "  mismatch: lambda=" << r.lambda << " p=" << r.p << " place=" << r.place << " lambda0=" << r.lambda0
       << " lambda1=" << r.lambda1 << " n_t=" << opt_csv(r.n_t) << " n_birkhoff=" << opt_csv(r.n_birkhoff)
       << " n_cech=" << opt_csv(r.n_cech);
    if (!r.error.empty()) os << " (" << r.error << ")";
    os << "\n";
  }
  return os.str();
}

std::string summary_text(const SelftestSummary& s) {
  std::ostringstream os;
  os << "selftest maxP=" << s.max_p << " seed=" << s.seed << "\n";
  for (const SuiteResult& r : s.suites) {
    os << "  " << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.cases << " cases)";
    if (!r.passed) os << ": " << r.counterexample;
    os << "\n";
  }
  os << (s.passed() ? "all suites passed\n" : "some suites failed\n");
  return os.str();
}

int jobs_from_environment(int fallback) {
  const char* env = std::getenv("HIGGSFLOW_JOBS");
  if (env == nullptr) return fallback;
  int v = 0;
  const std::string_view s(env);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || v < 1) return fallback;
  return v;
}

}  // namespace higgsflow
