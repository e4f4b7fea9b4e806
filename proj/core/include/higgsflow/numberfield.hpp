#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "higgsflow/exactfield.hpp"

// Algebraic values of lambda of degree <= 2 over Q, their reductions at primes
// to W_2 parameters, and the built-in catalog of the 17 Beauville numbers.

namespace higgsflow {

struct RootSelector {
  bool all = true;
  int index = 0;  // used when !all: position among the roots at a split prime, sorted by lambda0

  static RootSelector every() { return {}; }
  static RootSelector only(int k) { return {false, k}; }
  friend bool operator==(const RootSelector&, const RootSelector&) = default;
};

struct LambdaSpec {
  std::vector<std::int64_t> minpoly;  // constant term first, primitive, leading coefficient > 0
  std::string label;
  RootSelector roots;

  int degree() const noexcept { return static_cast<int>(minpoly.size()) - 1; }
  std::int64_t leading() const { return minpoly.back(); }
  /// c1^2 - 4 c2 c0 for quadratics, 1 for linear specs.
  std::int64_t discriminant() const;
};

/// Validates and normalizes a coefficient list.  Throws DegreeUnsupported,
/// ReducibleMinpoly (square discriminant), ForbiddenValue (lambda in {0, 1}).
LambdaSpec make_lambda_spec(std::vector<std::int64_t> minpoly, std::string label = {},
                            RootSelector roots = RootSelector::every());

/// "a/b" or "a".  Throws ParseError, ForbiddenValue.
LambdaSpec parse_rational(std::string_view text);
/// "c0,c1[,c2]".  Throws ParseError and make_lambda_spec errors.
LambdaSpec parse_minpoly(std::string_view text);
/// Either form: a comma selects the coefficient list.  The Unicode minus sign is accepted.
LambdaSpec parse_lambda_spec(std::string_view text);

/// lambda = (a + b sqrt(D)) / c; rationals use b = 0, D = 0.
struct RadicalForm {
  std::int64_t a = 0;
  std::int64_t b = 0;
  std::int64_t D = 0;
  std::int64_t c = 1;
  friend bool operator==(const RadicalForm&, const RadicalForm&) = default;
};

struct BeauvilleEntry {
  LambdaSpec spec;
  RadicalForm value;
  std::string note;
};

const std::vector<BeauvilleEntry>& beauville_catalog();

/// Exact check that the minimal polynomial vanishes at the radical expression,
/// carried out in Z[sqrt(D)] after clearing the denominator c.
bool radical_satisfies(const std::vector<std::int64_t>& minpoly, const RadicalForm& value);

enum class BadPrimeReason { DividesLeadingCoeff, DividesDiscriminant, ResidueZero, ResidueOne, PrimeTooSmall };
std::string_view to_string(BadPrimeReason reason) noexcept;

struct ReductionDatum {
  std::uint32_t p = 0;
  int place = 0;
  int d = 1;
  std::optional<WittParameter> witt;
  std::optional<BadPrimeReason> bad;

  bool good() const noexcept { return witt.has_value(); }
};

/// Evaluates the minimal polynomial at x in W_2(F_q).
WittRingElement evaluate_minpoly(const std::vector<std::int64_t>& minpoly, const WittRingElement& x);

/// One datum per place above p.  Split primes give one datum per selected root,
/// ordered by lambda0; an inert prime gives one datum in W_2(F_{p^2}) (both
/// Frobenius-conjugate embeddings when both_embeddings is set, as places 0 and 1).
/// Throws NotPrime and PrimeTooLarge; bad primes are returned as data.
std::vector<ReductionDatum> reduce_at_prime(const LambdaSpec& spec, std::uint32_t p, WittConvention convention,
                                            bool both_embeddings = false);

struct OrbitMember {
  std::string_view map;                   // "l", "1-l", "1/l", "1/(1-l)", "(l-1)/l", "l/(l-1)"
  std::optional<WittRingElement> value;   // empty when the map is undefined at this point
  bool admissible = false;                // value exists and its residue is not 0 or 1
};

/// The images of lambda under the six Moebius maps permuting {0, 1, inf},
/// keeping first occurrences.  Undefined members are kept as markers.
std::vector<OrbitMember> w2_orbit(const WittRingElement& lifted);

}  // namespace higgsflow
