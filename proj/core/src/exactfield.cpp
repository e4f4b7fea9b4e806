#include "higgsflow/exactfield.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <utility>

namespace higgsflow {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotPrime: return "NotPrime";
    case ErrorCode::EvenPrime: return "EvenPrime";
    case ErrorCode::PrimeTooLarge: return "PrimeTooLarge";
    case ErrorCode::DegreeOutOfRange: return "DegreeOutOfRange";
    case ErrorCode::ForbiddenResidue: return "ForbiddenResidue";
    case ErrorCode::ContextMismatch: return "ContextMismatch";
    case ErrorCode::DivisionByZeroPoly: return "DivisionByZeroPoly";
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InternalDivisibilityFailure: return "InternalDivisibilityFailure";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::DegreeTooLarge: return "DegreeTooLarge";
    case ErrorCode::CertificateCheckFailed: return "CertificateCheckFailed";
    case ErrorCode::UnstableDimension: return "UnstableDimension";
    case ErrorCode::ProfileMismatch: return "ProfileMismatch";
    case ErrorCode::ReducibleMinpoly: return "ReducibleMinpoly";
    case ErrorCode::ForbiddenValue: return "ForbiddenValue";
    case ErrorCode::DegreeUnsupported: return "DegreeUnsupported";
    case ErrorCode::NonInvertible: return "NonInvertible";
    case ErrorCode::InvalidRange: return "InvalidRange";
    case ErrorCode::MethodUnavailable: return "MethodUnavailable";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

bool is_prime(std::uint64_t n) noexcept {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t f = 3; f * f <= n; f += 2) {
    if (n % f == 0) return false;
  }
  return true;
}

namespace {

// Dense polynomials over Z/p with plain integer coefficients, lowest first;
// used only to certify irreducibility of candidate moduli.
using RawPoly = std::vector<std::uint64_t>;

void raw_trim(RawPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) {
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = static_cast<std::int64_t>(p), new_r = static_cast<std::int64_t>(a % p);
  while (new_r != 0) {
    const std::int64_t quot = r / new_r;
    t = std::exchange(new_t, t - quot * new_t);
    r = std::exchange(new_r, r - quot * new_r);
  }
  if (t < 0) t += static_cast<std::int64_t>(p);
  return static_cast<std::uint64_t>(t);
}

RawPoly raw_mod(RawPoly a, const RawPoly& m, std::uint64_t p) {
  raw_trim(a);
  const std::uint64_t lead_inv = inv_mod(m.back(), p);
  while (a.size() >= m.size()) {
    const std::uint64_t c = a.back() * lead_inv % p;
    const std::size_t shift = a.size() - m.size();
    for (std::size_t i = 0; i < m.size(); ++i) {
      a[shift + i] = (a[shift + i] + (p - c) * m[i]) % p;
    }
    raw_trim(a);
  }
  return a;
}

RawPoly raw_mulmod(const RawPoly& a, const RawPoly& b, const RawPoly& m, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  RawPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  }
  return raw_mod(std::move(r), m, p);
}

RawPoly raw_gcd(RawPoly a, RawPoly b, std::uint64_t p) {
  raw_trim(a);
  raw_trim(b);
  while (!b.empty()) {
    RawPoly r = raw_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// x^(p^k) mod m by repeated p-th powering.
RawPoly raw_frobenius_power(const RawPoly& m, std::uint64_t p, int k) {
  RawPoly x = raw_mod(RawPoly{0, 1}, m, p);
  for (int step = 0; step < k; ++step) {
    RawPoly result{1};
    RawPoly base = x;
    for (std::uint64_t e = p; e != 0; e >>= 1U) {
      if (e & 1U) result = raw_mulmod(result, base, m, p);
      base = raw_mulmod(base, base, m, p);
    }
    x = std::move(result);
  }
  return x;
}

// Rabin's test: m of degree d is irreducible iff x^(p^d) = x mod m and
// gcd(x^(p^(d/r)) - x, m) = 1 for each prime r | d.
bool raw_is_irreducible(const RawPoly& m, std::uint64_t p) {
  const int d = static_cast<int>(m.size()) - 1;
  if (d == 1) return true;
  RawPoly xd = raw_frobenius_power(m, p, d);
  RawPoly x = raw_mod(RawPoly{0, 1}, m, p);
  if (xd != x) return false;
  for (int r = 2; r <= d; ++r) {
    if (d % r != 0 || !is_prime(static_cast<std::uint64_t>(r))) continue;
    RawPoly h = raw_frobenius_power(m, p, d / r);
    h.resize(std::max<std::size_t>(h.size(), 2), 0);
    h[1] = (h[1] + p - 1) % p;
    raw_trim(h);
    if (raw_gcd(h, m, p).size() != 1) return false;
  }
  return true;
}

}  // namespace

ReductionContext::ReductionContext(std::uint32_t p, int d)
    : p_(p), d_(d), q_(1), p2_(p * p) {
  for (int i = 0; i < d; ++i) q_ *= p;

  if (d > 1) {
    // Smallest index sum m_i p^i among monic irreducibles; index 0 is x^d.
    for (std::uint64_t idx = 0;; ++idx) {
      RawPoly cand(static_cast<std::size_t>(d) + 1, 0);
      std::uint64_t rest = idx;
      for (int i = 0; i < d; ++i) {
        cand[i] = rest % p;
        rest /= p;
      }
      cand[d] = 1;
      if (raw_is_irreducible(cand, p)) {
        for (int i = 0; i < d; ++i) modulus_[i] = static_cast<std::uint32_t>(cand[i]);
        break;
      }
    }
  }

  if (d > 1 && q_ <= (1U << 16)) {
    inverse_table_.assign(q_, 0);
    for (std::uint64_t idx = 1; idx < q_; ++idx) {
      if (inverse_table_[idx] != 0) continue;
      const FieldElement x = field_element(idx);
      const FieldElement y = x.pow(q_ - 2);
      inverse_table_[idx] = static_cast<std::uint32_t>(y.index());
      inverse_table_[y.index()] = static_cast<std::uint32_t>(idx);
    }
  }

  const FieldElement minus_one = field(-1);
  for (std::uint64_t idx = 2; idx < q_; ++idx) {
    const FieldElement x = field_element(idx);
    if (x.pow((q_ - 1) / 2) == minus_one) {
      non_residue_ = x.coeffs();
      break;
    }
  }
}

const ReductionContext& make_context(std::int64_t p, std::int64_t d) {
  if (p == 2) throw Error(ErrorCode::EvenPrime, "p = 2 is not supported");
  if (p < 2 || !is_prime(static_cast<std::uint64_t>(p))) {
    throw Error(ErrorCode::NotPrime, std::to_string(p) + " is not prime");
  }
  if (p > kMaxPrime) throw Error(ErrorCode::PrimeTooLarge, std::to_string(p) + " exceeds " + std::to_string(kMaxPrime));
  if (d < 1 || d > kMaxExtensionDegree) {
    throw Error(ErrorCode::DegreeOutOfRange, "extension degree " + std::to_string(d) + " not in [1, 4]");
  }

  static std::mutex mutex;
  static std::map<std::pair<std::int64_t, std::int64_t>, std::unique_ptr<ReductionContext>> registry;
  std::lock_guard lock(mutex);
  auto& slot = registry[{p, d}];
  if (!slot) {
    slot.reset(new ReductionContext(static_cast<std::uint32_t>(p), static_cast<int>(d)));
  }
  return *slot;
}

namespace {

template <int Level>
GaloisElement<Level> element_from_coeffs(const ReductionContext& ctx, std::span<const std::int64_t> coeffs,
                                         std::int64_t n) {
  if (coeffs.size() > static_cast<std::size_t>(ctx.degree())) {
    throw Error(ErrorCode::DimensionMismatch, "too many coefficients for the context degree");
  }
  typename GaloisElement<Level>::Coeffs c{};
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    std::int64_t v = coeffs[i] % n;
    if (v < 0) v += n;
    c[i] = static_cast<std::uint32_t>(v);
  }
  return {ctx, c};
}

template <int Level>
GaloisElement<Level> element_from_index(const ReductionContext& ctx, std::uint64_t index, std::uint64_t n) {
  typename GaloisElement<Level>::Coeffs c{};
  for (int i = 0; i < ctx.degree(); ++i) {
    c[i] = static_cast<std::uint32_t>(index % n);
    index /= n;
  }
  return {ctx, c};
}

}  // namespace

FieldElement ReductionContext::field(std::int64_t value) const {
  const std::int64_t one[] = {value};
  return element_from_coeffs<1>(*this, one, p_);
}

FieldElement ReductionContext::field_from_coeffs(std::span<const std::int64_t> coeffs) const {
  return element_from_coeffs<1>(*this, coeffs, p_);
}

FieldElement ReductionContext::field_element(std::uint64_t index) const {
  return element_from_index<1>(*this, index, p_);
}

FieldElement ReductionContext::field_generator() const {
  if (d_ == 1) return field(0);  // x itself is the modulus for d = 1
  FieldElement::Coeffs c{};
  c[1] = 1;
  return {*this, c};
}

WittRingElement ReductionContext::witt(std::int64_t value) const {
  const std::int64_t one[] = {value};
  return element_from_coeffs<2>(*this, one, p2_);
}

WittRingElement ReductionContext::witt_from_coeffs(std::span<const std::int64_t> coeffs) const {
  return element_from_coeffs<2>(*this, coeffs, p2_);
}

WittRingElement ReductionContext::witt_element(std::uint64_t index) const {
  return element_from_index<2>(*this, index, p2_);
}

FieldElement ReductionContext::reduce(const WittRingElement& x) const {
  FieldElement::Coeffs c{};
  for (int i = 0; i < d_; ++i) c[i] = x.coeff(i) % p_;
  return {*this, c};
}

WittRingElement ReductionContext::lift(const FieldElement& x) const {
  return {*this, x.coeffs()};
}

WittRingElement ReductionContext::times_p(const FieldElement& x) const {
  WittRingElement::Coeffs c{};
  for (int i = 0; i < d_; ++i) c[i] = x.coeff(i) * p_;
  return {*this, c};
}

FieldElement ReductionContext::divide_by_p(const WittRingElement& x) const {
  FieldElement::Coeffs c{};
  for (int i = 0; i < d_; ++i) {
    if (x.coeff(i) % p_ != 0) {
      throw Error(ErrorCode::InternalDivisibilityFailure, "element of W2 is not divisible by p");
    }
    c[i] = x.coeff(i) / p_;
  }
  return {*this, c};
}

FieldElement ReductionContext::inverse_frobenius(const FieldElement& x) const {
  // Frobenius has order d on F_q.
  FieldElement y = x;
  for (int i = 1; i < d_; ++i) y = frobenius(y);
  return y;
}

std::uint32_t ReductionContext::prime_inverse(std::uint32_t a) const {
  if (a % p_ == 0) throw Error(ErrorCode::NonInvertible, "zero has no inverse");
  return static_cast<std::uint32_t>(inv_mod(a, p_));
}

FieldElement ReductionContext::field_inverse(const FieldElement& x) const {
  if (x.is_zero()) throw Error(ErrorCode::NonInvertible, "zero has no inverse");
  if (d_ == 1) return field(prime_inverse(x.coeff(0)));
  if (!inverse_table_.empty()) return field_element(inverse_table_[x.index()]);
  return x.pow(q_ - 2);
}

bool ReductionContext::is_square(const FieldElement& x) const {
  return x.is_zero() || x.pow((q_ - 1) / 2).is_one();
}

std::optional<FieldElement> ReductionContext::sqrt(const FieldElement& x) const {
  if (x.is_zero()) return x;
  if (!is_square(x)) return std::nullopt;
  // Tonelli-Shanks with q - 1 = 2^s t, t odd.
  std::uint64_t t = q_ - 1;
  int s = 0;
  while (t % 2 == 0) {
    t /= 2;
    ++s;
  }
  const FieldElement z(*this, non_residue_);
  FieldElement c = z.pow(t);
  FieldElement r = x.pow((t + 1) / 2);
  FieldElement u = x.pow(t);
  int m = s;
  while (!u.is_one()) {
    int i = 0;
    FieldElement probe = u;
    while (!probe.is_one()) {
      probe *= probe;
      ++i;
    }
    FieldElement b = c;
    for (int j = 0; j < m - i - 1; ++j) b *= b;
    r *= b;
    c = b * b;
    u *= c;
    m = i;
  }
  return r;
}

template <int Level>
std::string to_string(const GaloisElement<Level>& x) {
  if (x.is_zero()) return "0";
  std::string out;
  for (int k = x.context().degree() - 1; k >= 0; --k) {
    const std::uint32_t c = x.coeff(k);
    if (c == 0) continue;
    if (!out.empty()) out += '+';
    if (k == 0) {
      out += std::to_string(c);
      continue;
    }
    if (c != 1) out += std::to_string(c);
    out += 'u';
    if (k > 1) out += '^' + std::to_string(k);
  }
  return out;
}

template std::string to_string<1>(const GaloisElement<1>&);
template std::string to_string<2>(const GaloisElement<2>&);

// ---------------------------------------------------------------------------

std::string_view to_string(WittConvention convention) noexcept {
  return convention == WittConvention::Standard ? "standard" : "twisted";
}

WittConvention parse_witt_convention(std::string_view text) {
  if (text == "standard") return WittConvention::Standard;
  if (text == "twisted") return WittConvention::Twisted;
  throw Error(ErrorCode::ParseError, "unknown Witt convention '" + std::string(text) + "'");
}

WittRingElement teichmuller(const FieldElement& x0) {
  const ReductionContext& ctx = x0.context();
  // (y + p e)^q = y^q mod p^2, so one q-th power of any lift is already fixed.
  WittRingElement value = ctx.lift(x0);
  for (;;) {
    WittRingElement next = value.pow(ctx.q());
    if (next == value) return value;
    value = next;
  }
}

WittRingElement frobenius_w2(const WittRingElement& x) {
  const ReductionContext& ctx = x.context();
  if (ctx.degree() == 1) return x;
  const FieldElement a = ctx.reduce(x);
  const FieldElement b = ctx.divide_by_p(x - teichmuller(a));
  return teichmuller(ctx.frobenius(a)) + ctx.times_p(ctx.frobenius(b));
}

namespace {

void require_allowed_residue(const FieldElement& lambda0) {
  if (lambda0.is_zero() || lambda0.is_one()) {
    throw Error(ErrorCode::ForbiddenResidue, "residue " + to_string(lambda0) + " lies in {0, 1}");
  }
}

}  // namespace

WittParameter witt_decompose(const WittRingElement& x, WittConvention convention) {
  const ReductionContext& ctx = x.context();
  const FieldElement lambda0 = ctx.reduce(x);
  require_allowed_residue(lambda0);
  FieldElement residue = ctx.divide_by_p(x - teichmuller(lambda0));
  if (convention == WittConvention::Twisted) residue = ctx.frobenius(residue);
  return WittParameter{x, lambda0, residue, convention};
}

WittRingElement witt_compose(const FieldElement& lambda0, const FieldElement& lambda1,
                             WittConvention convention) {
  require_allowed_residue(lambda0);
  const ReductionContext& ctx = lambda0.context();
  const FieldElement residue =
      convention == WittConvention::Twisted ? ctx.inverse_frobenius(lambda1) : lambda1;
  return teichmuller(lambda0) + ctx.times_p(residue);
}

// ---------------------------------------------------------------------------

namespace {

FieldElement constant_in(const ReductionContext& to, std::uint32_t c) { return to.field(c); }

}  // namespace

FieldEmbedding::FieldEmbedding(const ReductionContext& from, const ReductionContext& to)
    : from_(&from), to_(&to) {
  if (from.p() != to.p() || to.degree() % from.degree() != 0) {
    throw Error(ErrorCode::ContextMismatch, "no embedding F_{p^a} -> F_{p^b} unless a | b");
  }
  const int a = from.degree();
  if (a == 1) {
    powers_.push_back(to.field(1));
    return;
  }
  std::optional<FieldElement> root;
  if (&from == &to) {
    root = to.field_generator();
  } else if (a == 2) {
    // Root of x^2 + m1 x + m0 by the quadratic formula; take the smaller-index square root.
    const FieldElement m0 = constant_in(to, from.modulus()[0]);
    const FieldElement m1 = constant_in(to, from.modulus()[1]);
    const auto s = to.sqrt(m1 * m1 - to.field(4) * m0);
    if (!s) throw Error(ErrorCode::ContextMismatch, "modulus has no root in the target field");
    const FieldElement s_min = s->index() <= (-*s).index() ? *s : -*s;
    root = (s_min - m1) / to.field(2);
  } else {
    constexpr std::uint64_t kSearchLimit = 1U << 22;
    if (to.q() > kSearchLimit) throw Error(ErrorCode::ContextMismatch, "embedding search space too large");
    for (std::uint64_t idx = 0; idx < to.q() && !root; ++idx) {
      const FieldElement x = to.field_element(idx);
      FieldElement acc = to.field(1);
      for (int i = a - 1; i >= 0; --i) acc = acc * x + constant_in(to, from.modulus()[i]);
      if (acc.is_zero()) root = x;
    }
    if (!root) throw Error(ErrorCode::ContextMismatch, "modulus has no root in the target field");
  }
  FieldElement power = to.field(1);
  for (int i = 0; i < a; ++i) {
    powers_.push_back(power);
    power *= *root;
  }
}

FieldElement FieldEmbedding::operator()(const FieldElement& x) const {
  if (&x.context() != from_) throw Error(ErrorCode::ContextMismatch, "element is not in the source field");
  FieldElement acc = to_->field(0);
  for (int i = 0; i < from_->degree(); ++i) {
    if (x.coeff(i) != 0) acc += to_->field(x.coeff(i)) * powers_[static_cast<std::size_t>(i)];
  }
  return acc;
}

}  // namespace higgsflow
