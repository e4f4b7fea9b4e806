#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "higgsflow/scanharness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadInput = 2;
constexpr int kExitMismatch = 3;

struct CommonFlags {
  std::string methods = "t,birkhoff";
  std::string convention = "twisted";
  bool both_embeddings = false;
  std::string format = "csv";
  std::string out = "-";
  std::uint64_t seed = 42;
  std::optional<int> jobs;
};

void add_output_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--format", f.format, "Report format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", f.out, "Output path, or - for stdout");
  cmd->add_option("--jobs", f.jobs, "Worker threads (default: HIGGSFLOW_JOBS or 1)")->check(CLI::PositiveNumber);
}

void add_method_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--methods", f.methods, "Comma-separated subset of t,birkhoff,cech");
}

void add_scan_flags(CLI::App* cmd, CommonFlags& f) {
  add_method_flags(cmd, f);
  cmd->add_option("--witt-convention", f.convention, "Witt coordinate convention for d = 2")
      ->check(CLI::IsMember({"standard", "twisted"}));
  cmd->add_flag("--both-embeddings", f.both_embeddings, "Report both conjugate embeddings at inert primes");
  cmd->add_option("--seed", f.seed, "Seed recorded in the report header");
  add_output_flags(cmd, f);
}

void write_output(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw higgsflow::Error(higgsflow::ErrorCode::ParseError, "cannot open " + path + " for writing");
  os << text;
}

int emit(const higgsflow::ScanReport& report, const CommonFlags& f) {
  write_output(f.out, f.format == "json" ? higgsflow::to_json(report) : higgsflow::to_csv(report));
  std::cerr << higgsflow::summary_text(report);
  return report.mismatches() > 0 ? kExitMismatch : kExitOk;
}

higgsflow::ScanOptions options_from(const CommonFlags& f, const std::string& range) {
  higgsflow::ScanOptions o;
  o.range = higgsflow::parse_prime_range(range);
  o.methods = higgsflow::parse_methods(f.methods);
  o.convention = higgsflow::parse_witt_convention(f.convention);
  o.both_embeddings = f.both_embeddings;
  o.seed = f.seed;
  o.jobs = f.jobs.value_or(higgsflow::jobs_from_environment(1));
  return o;
}

bool is_input_error(higgsflow::ErrorCode code) {
  using higgsflow::ErrorCode;
  switch (code) {
    case ErrorCode::NotPrime:
    case ErrorCode::EvenPrime:
    case ErrorCode::PrimeTooLarge:
    case ErrorCode::DegreeOutOfRange:
    case ErrorCode::ForbiddenResidue:
    case ErrorCode::ReducibleMinpoly:
    case ErrorCode::ForbiddenValue:
    case ErrorCode::DegreeUnsupported:
    case ErrorCode::InvalidRange:
    case ErrorCode::MethodUnavailable:
    case ErrorCode::ParseError:
      return true;
    default:
      return false;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Periodicity of the uniformizing Higgs bundle on P^1 - {0, 1, lambda, infinity} mod p"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(higgsflow::library_version()));

  CommonFlags scan_flags;
  std::optional<std::string> minpoly, rational;
  std::string scan_range = "3:100";
  std::optional<std::uint32_t> scan_prime;
  auto* scan = app.add_subcommand("scan", "Sweep one lambda over a prime range");
  auto* mp = scan->add_option("--minpoly", minpoly, "Minimal polynomial c0,c1[,c2], constant term first");
  auto* ra = scan->add_option("--rational", rational, "Rational lambda a/b");
  mp->excludes(ra);
  auto* pr = scan->add_option("--prime-range", scan_range, "MIN:MAX");
  scan->add_option("--prime", scan_prime, "A single prime")->excludes(pr);
  add_scan_flags(scan, scan_flags);

  CommonFlags enum_flags;
  std::uint32_t enum_prime = 3;
  auto* enumerate = app.add_subcommand("enumerate", "All (lambda0, lambda1) over F_p, 3 <= p <= 31");
  enumerate->add_option("--prime", enum_prime, "The prime p")->required();
  add_method_flags(enumerate, enum_flags);
  add_output_flags(enumerate, enum_flags);

  std::uint32_t max_p = 7;
  std::uint64_t selftest_seed = 42;
  std::string selftest_format = "text";
  std::string fault = "none";
  auto* selftest = app.add_subcommand("selftest", "Cross-validation suites up to maxP <= 13");
  selftest->add_option("--max-p", max_p, "Largest prime in the exhaustive suites");
  selftest->add_option("--seed", selftest_seed, "Seed for the randomized suites");
  selftest->add_option("--format", selftest_format, "Output format")->check(CLI::IsMember({"text", "json"}));
  selftest->add_option("--inject-fault", fault, "Mutation check: drop-unit builds R from A/u")
      ->check(CLI::IsMember({"none", "drop-unit"}));

  CommonFlags beau_flags;
  std::string beau_range = "5:97";
  auto* beauville = app.add_subcommand("beauville", "Evidence table for the 17 Beauville numbers");
  beauville->add_option("--prime-range", beau_range, "MIN:MAX within [3, 1000]");
  add_scan_flags(beauville, beau_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitBadInput;
  }

  try {
    if (scan->parsed()) {
      if (!minpoly && !rational) throw higgsflow::Error(higgsflow::ErrorCode::ParseError, "scan needs --minpoly or --rational");
      const higgsflow::LambdaSpec spec =
          minpoly ? higgsflow::parse_minpoly(*minpoly) : higgsflow::parse_rational(*rational);
      const std::string range = scan_prime ? std::to_string(*scan_prime) : scan_range;
      return emit(higgsflow::run_scan(spec, options_from(scan_flags, range)), scan_flags);
    }
    if (enumerate->parsed()) {
      const auto methods = higgsflow::parse_methods(enum_flags.methods);
      const int jobs = enum_flags.jobs.value_or(higgsflow::jobs_from_environment(1));
      return emit(higgsflow::run_enumerate(enum_prime, methods, jobs), enum_flags);
    }
    if (selftest->parsed()) {
      const auto f = fault == "drop-unit" ? higgsflow::InjectedFault::DropUnit : higgsflow::InjectedFault::None;
      const higgsflow::SelftestSummary s = higgsflow::run_selftest(max_p, selftest_seed, f);
      std::cout << (selftest_format == "json" ? higgsflow::to_json(s) : higgsflow::summary_text(s));
      return s.passed() ? kExitOk : kExitMismatch;
    }
    if (beauville->parsed()) {
      return emit(higgsflow::run_verify_beauville(options_from(beau_flags, beau_range)), beau_flags);
    }
  } catch (const higgsflow::Error& e) {
    std::cerr << "higgsflow: " << e.what() << "\n";
    return is_input_error(e.code()) ? kExitBadInput : kExitMismatch;
  }
  return kExitBadInput;
}
