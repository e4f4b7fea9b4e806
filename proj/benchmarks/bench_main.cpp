#include <benchmark/benchmark.h>

#include "higgsflow/birkhoff.hpp"
#include "higgsflow/cechoracle.hpp"
#include "higgsflow/scanharness.hpp"

using namespace higgsflow;

namespace {

WittRingElement sample(std::uint32_t p) { return make_context(p, 1).witt(static_cast<std::int64_t>(p) + 2); }

void BM_TCriterion(benchmark::State& state) {
  const auto p = static_cast<std::uint32_t>(state.range(0));
  const WittParameter w = witt_decompose(sample(p), WittConvention::Twisted);
  for (auto _ : state) benchmark::DoNotOptimize(splitting_from_T(w.lambda0, w.lambda1));
}

void BM_Birkhoff(benchmark::State& state) {
  const auto p = static_cast<std::uint32_t>(state.range(0));
  const WittRingElement x = sample(p);
  for (auto _ : state) benchmark::DoNotOptimize(run_birkhoff(x));
}

void BM_VerifyCertificate(benchmark::State& state) {
  const auto p = static_cast<std::uint32_t>(state.range(0));
  const BirkhoffResult r = run_birkhoff(sample(p));
  const TransitionMatrix m = build_transition(r.certificate.cocycle);
  for (auto _ : state) benchmark::DoNotOptimize(verify_certificate(m, r.certificate));
}

void BM_Cech(benchmark::State& state) {
  const auto p = static_cast<std::uint32_t>(state.range(0));
  const WittRingElement x = sample(p);
  for (auto _ : state) benchmark::DoNotOptimize(splitting_from_cech(x));
}

void BM_BuildA(benchmark::State& state) {
  const auto p = static_cast<std::uint32_t>(state.range(0));
  const WittRingElement x = sample(p);
  for (auto _ : state) benchmark::DoNotOptimize(build_A_primitive(x));
}

void BM_Enumerate(benchmark::State& state) {
  const auto p = static_cast<std::uint32_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_enumerate(p, MethodSet{}));
}

void BM_BeauvilleSweep(benchmark::State& state) {
  ScanOptions o;
  o.range = {5, static_cast<std::uint32_t>(state.range(0))};
  o.jobs = jobs_from_environment(1);
  for (auto _ : state) benchmark::DoNotOptimize(run_verify_beauville(o));
}

}  // namespace

BENCHMARK(BM_BuildA)->Arg(7)->Arg(31)->Arg(101);
BENCHMARK(BM_TCriterion)->Arg(7)->Arg(31)->Arg(101);
BENCHMARK(BM_Birkhoff)->Arg(7)->Arg(31)->Arg(101);
BENCHMARK(BM_VerifyCertificate)->Arg(7)->Arg(31);
BENCHMARK(BM_Cech)->Arg(7)->Arg(13);
BENCHMARK(BM_Enumerate)->Arg(7)->Arg(13);
BENCHMARK(BM_BeauvilleSweep)->Arg(31)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
