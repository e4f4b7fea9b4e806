#include "higgsflow/numberfield.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

namespace higgsflow {

namespace {

__extension__ typedef __int128 i128;

constexpr std::int64_t kCoeffLimit = std::int64_t{1} << 31;

std::string normalize_text(std::string_view text) {
  std::string out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    // U+2212 MINUS SIGN
    if (i + 2 < text.size() && static_cast<unsigned char>(text[i]) == 0xE2 &&
        static_cast<unsigned char>(text[i + 1]) == 0x88 && static_cast<unsigned char>(text[i + 2]) == 0x92) {
      out.push_back('-');
      i += 2;
    } else if (text[i] != ' ' && text[i] != '\t') {
      out.push_back(text[i]);
    }
  }
  return out;
}

std::int64_t parse_int(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::ParseError, "not an integer: '" + std::string(s) + "'");
  }
  return v;
}

bool is_perfect_square(i128 n) {
  if (n < 0) return false;
  auto r = static_cast<i128>(std::sqrt(static_cast<long double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r * r == n;
}

std::string rational_label(std::int64_t num, std::int64_t den) {
  return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

std::string minpoly_label(const std::vector<std::int64_t>& c) {
  std::string s = "minpoly(";
  for (std::size_t i = 0; i < c.size(); ++i) s += (i ? ";" : "") + std::to_string(c[i]);
  return s + ")";
}

BeauvilleEntry rational_entry(std::int64_t a, std::int64_t b, std::string_view note) {
  LambdaSpec spec = make_lambda_spec({-a, b});
  return BeauvilleEntry{std::move(spec), RadicalForm{a, 0, 0, b}, std::string(note)};
}

BeauvilleEntry quadratic_entry(std::vector<std::int64_t> minpoly, std::string label, RadicalForm value,
                               std::string_view note) {
  return BeauvilleEntry{make_lambda_spec(std::move(minpoly), std::move(label)), value, std::string(note)};
}

ReductionDatum bad_datum(std::uint32_t p, int place, int d, BadPrimeReason reason) {
  return ReductionDatum{p, place, d, std::nullopt, reason};
}

WittRingElement newton_root(const std::vector<std::int64_t>& minpoly, const FieldElement& root) {
  const ReductionContext& ctx = root.context();
  const WittRingElement x = ctx.lift(root);
  WittRingElement deriv = ctx.witt(0);
  for (std::size_t i = minpoly.size(); i-- > 1;) deriv = deriv * x + ctx.witt(minpoly[i] * static_cast<std::int64_t>(i));
  return x - evaluate_minpoly(minpoly, x) / deriv;
}

ReductionDatum make_datum(const LambdaSpec& spec, const WittRingElement& lifted, int place, WittConvention convention) {
  const ReductionContext& ctx = lifted.context();
  const FieldElement l0 = ctx.reduce(lifted);
  if (l0.is_zero()) return bad_datum(ctx.p(), place, ctx.degree(), BadPrimeReason::ResidueZero);
  if (l0.is_one()) return bad_datum(ctx.p(), place, ctx.degree(), BadPrimeReason::ResidueOne);
  if (!evaluate_minpoly(spec.minpoly, lifted).is_zero()) {
    throw Error(ErrorCode::InternalDivisibilityFailure, "reduced root does not satisfy the minimal polynomial mod p^2");
  }
  return ReductionDatum{ctx.p(), place, ctx.degree(), witt_decompose(lifted, convention), std::nullopt};
}

}  // namespace

std::int64_t LambdaSpec::discriminant() const {
  if (degree() == 1) return 1;
  return minpoly[1] * minpoly[1] - 4 * minpoly[2] * minpoly[0];
}

LambdaSpec make_lambda_spec(std::vector<std::int64_t> c, std::string label, RootSelector roots) {
  while (!c.empty() && c.back() == 0) c.pop_back();
  if (c.size() < 2 || c.size() > 3) {
    throw Error(ErrorCode::DegreeUnsupported, "minimal polynomials of degree 1 or 2 only");
  }
  for (const std::int64_t v : c) {
    if (v <= -kCoeffLimit || v >= kCoeffLimit) throw Error(ErrorCode::InvalidRange, "coefficients must lie below 2^31");
  }
  std::int64_t g = 0;
  for (const std::int64_t v : c) g = std::gcd(g, v);
  if (c.back() < 0) g = -g;
  for (std::int64_t& v : c) v /= g;

  if (c[0] == 0) throw Error(ErrorCode::ForbiddenValue, "lambda = 0 is not allowed");
  if (std::accumulate(c.begin(), c.end(), std::int64_t{0}) == 0) {
    throw Error(ErrorCode::ForbiddenValue, "lambda = 1 is not allowed");
  }
  if (c.size() == 3 && is_perfect_square(static_cast<i128>(c[1]) * c[1] - static_cast<i128>(4) * c[2] * c[0])) {
    throw Error(ErrorCode::ReducibleMinpoly, "discriminant is a square; use the rational roots");
  }
  if (label.empty()) label = c.size() == 2 ? rational_label(-c[0], c[1]) : minpoly_label(c);
  return LambdaSpec{std::move(c), std::move(label), roots};
}

LambdaSpec parse_rational(std::string_view raw) {
  const std::string text = normalize_text(raw);
  const auto slash = text.find('/');
  std::int64_t num = parse_int(std::string_view(text).substr(0, slash));
  std::int64_t den = slash == std::string::npos ? 1 : parse_int(std::string_view(text).substr(slash + 1));
  if (den == 0) throw Error(ErrorCode::ParseError, "zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return make_lambda_spec({-num, den}, rational_label(num, den));
}

LambdaSpec parse_minpoly(std::string_view raw) {
  const std::string text = normalize_text(raw);
  std::vector<std::int64_t> c;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    c.push_back(parse_int(std::string_view(text).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return make_lambda_spec(std::move(c));
}

LambdaSpec parse_lambda_spec(std::string_view text) {
  return text.find(',') != std::string_view::npos ? parse_minpoly(text) : parse_rational(text);
}

bool radical_satisfies(const std::vector<std::int64_t>& minpoly, const RadicalForm& v) {
  // c^k m((a + b sqrt D)/c) = sum_i m_i (a + b sqrt D)^i c^{k-i} = X + Y sqrt D.
  const int k = static_cast<int>(minpoly.size()) - 1;
  i128 x = 0, y = 0;
  i128 px = 1, py = 0;  // (a + b sqrt D)^i
  for (int i = 0; i <= k; ++i) {
    i128 scale = minpoly[static_cast<std::size_t>(i)];
    for (int j = i; j < k; ++j) scale *= v.c;
    x += scale * px;
    y += scale * py;
    const i128 nx = px * v.a + py * v.b * v.D;
    const i128 ny = px * v.b + py * v.a;
    px = nx;
    py = ny;
  }
  return x == 0 && (y == 0 || v.D == 0);
}

const std::vector<BeauvilleEntry>& beauville_catalog() {
  static const std::vector<BeauvilleEntry> catalog = [] {
    constexpr std::string_view kRational = "rational Beauville value";
    constexpr std::string_view kEisenstein = "root of z^2 - z + 1, the sixth roots of unity pair";
    constexpr std::string_view kGolden = "one of the six values in Q(sqrt 5)";
    std::vector<BeauvilleEntry> v;
    v.push_back(rational_entry(-1, 1, kRational));
    v.push_back(rational_entry(2, 1, kRational));
    v.push_back(rational_entry(1, 2, kRational));
    v.push_back(rational_entry(-8, 1, kRational));
    v.push_back(rational_entry(9, 1, kRational));
    v.push_back(rational_entry(-1, 8, kRational));
    v.push_back(rational_entry(9, 8, kRational));
    v.push_back(rational_entry(1, 9, kRational));
    v.push_back(rational_entry(8, 9, kRational));
    v.push_back(quadratic_entry({1, -1, 1}, "(1-sqrt(-3))/2", {1, -1, -3, 2}, kEisenstein));
    v.push_back(quadratic_entry({1, -1, 1}, "(1+sqrt(-3))/2", {1, 1, -3, 2}, kEisenstein));
    v.push_back(quadratic_entry({1, 123, 1}, "(-123-55sqrt(5))/2", {-123, -55, 5, 2}, kGolden));
    v.push_back(quadratic_entry({125, -125, 1}, "(125+55sqrt(5))/2", {125, 55, 5, 2}, kGolden));
    v.push_back(quadratic_entry({1, 123, 1}, "(-123+55sqrt(5))/2", {-123, 55, 5, 2}, kGolden));
    v.push_back(quadratic_entry({125, -125, 1}, "(125-55sqrt(5))/2", {125, -55, 5, 2}, kGolden));
    v.push_back(quadratic_entry({1, -125, 125}, "(25-11sqrt(5))/50", {25, -11, 5, 50}, kGolden));
    v.push_back(quadratic_entry({1, -125, 125}, "(25+11sqrt(5))/50", {25, 11, 5, 50}, kGolden));
    return v;
  }();
  return catalog;
}

std::string_view to_string(BadPrimeReason reason) noexcept {
  switch (reason) {
    case BadPrimeReason::DividesLeadingCoeff: return "DividesLeadingCoeff";
    case BadPrimeReason::DividesDiscriminant: return "DividesDiscriminant";
    case BadPrimeReason::ResidueZero: return "ResidueZero";
    case BadPrimeReason::ResidueOne: return "ResidueOne";
    case BadPrimeReason::PrimeTooSmall: return "PrimeTooSmall";
  }
  return "?";
}

WittRingElement evaluate_minpoly(const std::vector<std::int64_t>& minpoly, const WittRingElement& x) {
  const ReductionContext& ctx = x.context();
  WittRingElement acc = ctx.witt(0);
  for (auto it = minpoly.rbegin(); it != minpoly.rend(); ++it) acc = acc * x + ctx.witt(*it);
  return acc;
}

std::vector<ReductionDatum> reduce_at_prime(const LambdaSpec& spec, std::uint32_t p, WittConvention convention,
                                            bool both_embeddings) {
  if (p == 2) return {bad_datum(p, 0, 1, BadPrimeReason::PrimeTooSmall)};
  const ReductionContext& base = make_context(p, 1);
  const auto ip = static_cast<std::int64_t>(p);
  if (spec.leading() % ip == 0) return {bad_datum(p, 0, 1, BadPrimeReason::DividesLeadingCoeff)};

  if (spec.degree() == 1) {
    const WittRingElement root = -base.witt(spec.minpoly[0]) / base.witt(spec.minpoly[1]);
    return {make_datum(spec, root, 0, convention)};
  }

  const std::int64_t disc = spec.discriminant();
  if (disc % ip == 0) return {bad_datum(p, 0, 1, BadPrimeReason::DividesDiscriminant)};

  const bool split = base.is_square(base.field(disc));
  const ReductionContext& ctx = split ? base : make_context(p, 2);
  const FieldElement s = *ctx.sqrt(ctx.field(disc));
  const FieldElement two_a = ctx.field(2 * spec.minpoly[2]);
  std::vector<FieldElement> roots{(-ctx.field(spec.minpoly[1]) + s) / two_a, (-ctx.field(spec.minpoly[1]) - s) / two_a};
  std::sort(roots.begin(), roots.end(), [](const FieldElement& x, const FieldElement& y) { return x.index() < y.index(); });

  std::vector<ReductionDatum> out;
  if (split) {
    for (int k = 0; k < 2; ++k) {
      if (!spec.roots.all && spec.roots.index != k) continue;
      out.push_back(make_datum(spec, newton_root(spec.minpoly, roots[static_cast<std::size_t>(k)]), k, convention));
    }
  } else {
    const int count = both_embeddings ? 2 : 1;
    for (int k = 0; k < count; ++k) {
      out.push_back(make_datum(spec, newton_root(spec.minpoly, roots[static_cast<std::size_t>(k)]), k, convention));
    }
  }
  return out;
}

std::vector<OrbitMember> w2_orbit(const WittRingElement& l) {
  const ReductionContext& ctx = l.context();
  const WittRingElement one = ctx.witt(1);
  const auto invertible = [&](const WittRingElement& x) { return !ctx.reduce(x).is_zero(); };
  const auto quotient = [&](const WittRingElement& num, const WittRingElement& den) -> std::optional<WittRingElement> {
    if (!invertible(den)) return std::nullopt;
    return num / den;
  };
  const std::pair<std::string_view, std::optional<WittRingElement>> images[] = {
      {"l", l},
      {"1-l", one - l},
      {"1/l", quotient(one, l)},
      {"1/(1-l)", quotient(one, one - l)},
      {"(l-1)/l", quotient(l - one, l)},
      {"l/(l-1)", quotient(l, l - one)},
  };
  std::vector<OrbitMember> out;
  for (const auto& [map, value] : images) {
    if (value && std::any_of(out.begin(), out.end(), [&](const OrbitMember& m) { return m.value && *m.value == *value; })) {
      continue;
    }
    bool admissible = false;
    if (value) {
      const FieldElement r = ctx.reduce(*value);
      admissible = !r.is_zero() && !r.is_one();
    }
    out.push_back(OrbitMember{map, value, admissible});
  }
  return out;
}

}  // namespace higgsflow
