#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "higgsflow/exactfield.hpp"
#include "higgsflow/numberfield.hpp"

// Prime sweeps, exhaustive enumeration, cross-validation self tests and
// deterministic CSV/JSON emission.

namespace higgsflow {

std::string_view library_version() noexcept;

struct MethodSet {
  bool t = true;
  bool birkhoff = true;
  bool cech = false;

  friend bool operator==(const MethodSet&, const MethodSet&) = default;
};

/// Comma-separated subset of {t, birkhoff, cech}.  Throws ParseError.
MethodSet parse_methods(std::string_view text);
std::string to_string(const MethodSet& methods);

struct PrimeRange {
  std::uint32_t lo = 3;
  std::uint32_t hi = 3;
};

/// "MIN:MAX" or a single prime "P".  Throws ParseError.
PrimeRange parse_prime_range(std::string_view text);
std::vector<std::uint32_t> primes_in(const PrimeRange& range);

inline constexpr std::uint32_t kScanMaxPrime = 10000;
inline constexpr std::uint32_t kBeauvilleMaxPrime = 1000;
inline constexpr std::uint32_t kCechMaxPrime = 31;
inline constexpr std::uint32_t kEnumerateMaxPrime = 31;
inline constexpr std::uint32_t kSelftestMaxPrime = 13;

struct ScanOptions {
  PrimeRange range;
  MethodSet methods;
  WittConvention convention = WittConvention::Twisted;
  bool both_embeddings = false;
  std::uint64_t seed = 42;
  int jobs = 1;
};

struct ScanRow {
  std::string lambda;
  std::uint32_t p = 0;
  int place = 0;
  int d = 1;
  std::string lambda0;
  std::string lambda1;
  std::optional<int> n_t;
  std::optional<int> n_birkhoff;
  std::optional<int> n_cech;
  bool periodic = false;
  bool agree = true;
  std::optional<BadPrimeReason> bad;
  std::string error;  // a method raised; the row counts as a mismatch
};

/// Per-lambda tallies.  Counts are over (prime, place) rows.
struct EntrySummary {
  std::string lambda;
  int rows = 0;
  int good = 0;
  int periodic = 0;
  int bad = 0;
  int mismatches = 0;
  std::vector<std::uint32_t> exceptional_primes;  // good primes with some place n != 1

  double pass_rate() const noexcept { return good == 0 ? 0.0 : static_cast<double>(periodic) / good; }
};

struct EnumerateStats {
  int periodic_pairs = 0;
  std::vector<std::pair<std::string, int>> periodic_per_lambda0;  // (lambda0, count)
  int max_per_lambda0 = 0;
  int orbits = 0;
  int orbits_with_varying_n = 0;
  std::string first_varying_orbit;  // "l~=2:n=0, 8:n=1, ..."
};

struct ScanReport {
  std::string version;
  WittConvention convention = WittConvention::Twisted;
  std::uint64_t seed = 0;
  std::string command;
  std::vector<ScanRow> rows;
  std::vector<EntrySummary> entries;
  std::optional<EnumerateStats> enumerate;

  int mismatches() const noexcept;
};

/// One report row for a reduction datum; computes the requested methods.
ScanRow evaluate_row(std::string label, const ReductionDatum& datum, const MethodSet& methods);

/// Throws InvalidRange (range outside [3, 10000] or empty), MethodUnavailable
/// (cech above p = 31 or no method selected).
ScanReport run_scan(const LambdaSpec& spec, const ScanOptions& options);

/// All (lambda0, lambda1) in F_p^2 with lambda0 not in {0, 1}.  Labels are the
/// zero-padded integer lambda~ mod p^2.  Throws InvalidRange outside [3, 31].
ScanReport run_enumerate(std::uint32_t p, const MethodSet& methods, int jobs = 1);

/// All catalog entries.  Throws InvalidRange outside [3, 1000].
ScanReport run_verify_beauville(const ScanOptions& options);

enum class InjectedFault { None, DropUnit };

struct SuiteResult {
  std::string name;
  bool passed = true;
  long cases = 0;
  std::string counterexample;  // first failure, empty when passed
};

struct SelftestSummary {
  std::uint32_t max_p = 0;
  std::uint64_t seed = 0;
  std::vector<SuiteResult> suites;

  bool passed() const noexcept;
};

/// Throws InvalidRange when max_p is outside [3, 13].
SelftestSummary run_selftest(std::uint32_t max_p, std::uint64_t seed, InjectedFault fault = InjectedFault::None);

std::string to_csv(const ScanReport& report);
std::string to_json(const ScanReport& report);
std::string to_json(const SelftestSummary& summary);
/// Human-readable summary block (pass rates, exceptional primes, mismatches).
std::string summary_text(const ScanReport& report);
std::string summary_text(const SelftestSummary& summary);

/// HIGGSFLOW_JOBS when set and valid, otherwise the fallback.
int jobs_from_environment(int fallback = 1);

}  // namespace higgsflow
