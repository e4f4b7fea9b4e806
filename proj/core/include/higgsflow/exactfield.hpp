#pragma once

#include <array>
#include <cassert>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "higgsflow/error.hpp"

// Exact arithmetic in F_q = F_{p^d} and in the Galois ring W_2(F_q) of
// characteristic p^2.  Both are realized as (Z/N)[x]/(m(x)) with N = p or
// N = p^2 and one fixed monic modulus m whose reduction mod p is irreducible.

namespace higgsflow {

inline constexpr int kMaxExtensionDegree = 4;
inline constexpr std::uint32_t kMaxPrime = 65521;

class ReductionContext;

/// An element of the level-L residue ring of a context: level 1 is the
/// residue field F_q, level 2 is the Galois ring W_2(F_q).
template <int Level>
class GaloisElement {
  static_assert(Level == 1 || Level == 2);

 public:
  using Coeffs = std::array<std::uint32_t, kMaxExtensionDegree>;

  /// Detached placeholder; only assignment and is_attached() are valid on it.
  GaloisElement() = default;
  GaloisElement(const ReductionContext& ctx, const Coeffs& coeffs) : ctx_(&ctx), c_(coeffs) {}

  bool is_attached() const noexcept { return ctx_ != nullptr; }
  const ReductionContext& context() const noexcept { return *ctx_; }
  std::uint32_t coeff(int i) const noexcept { return c_[static_cast<std::size_t>(i)]; }
  const Coeffs& coeffs() const noexcept { return c_; }

  bool is_zero() const noexcept;
  bool is_one() const noexcept;

  GaloisElement operator+(const GaloisElement& rhs) const;
  GaloisElement operator-(const GaloisElement& rhs) const;
  GaloisElement operator-() const;
  GaloisElement operator*(const GaloisElement& rhs) const;
  GaloisElement& operator+=(const GaloisElement& rhs) { return *this = *this + rhs; }
  GaloisElement& operator-=(const GaloisElement& rhs) { return *this = *this - rhs; }
  GaloisElement& operator*=(const GaloisElement& rhs) { return *this = *this * rhs; }

  /// Multiplicative inverse; throws NonInvertible for zero (field) or for
  /// non-units (ring, i.e. elements divisible by p).
  GaloisElement inverse() const;
  GaloisElement operator/(const GaloisElement& rhs) const { return *this * rhs.inverse(); }

  GaloisElement pow(std::uint64_t e) const;

  /// Position in the canonical enumeration: sum of coeff(i) * N^i.
  std::uint64_t index() const noexcept;

  friend bool operator==(const GaloisElement& a, const GaloisElement& b) noexcept {
    return a.ctx_ == b.ctx_ && a.c_ == b.c_;
  }

 private:
  std::uint32_t modulus() const noexcept;

  const ReductionContext* ctx_ = nullptr;
  Coeffs c_{};
};

using FieldElement = GaloisElement<1>;
using WittRingElement = GaloisElement<2>;

/// Shared, immutable description of F_q and W_2(F_q) for one (p, d).
/// Instances live for the whole program; obtain them with make_context().
class ReductionContext {
 public:
  ReductionContext(const ReductionContext&) = delete;
  ReductionContext& operator=(const ReductionContext&) = delete;

  std::uint32_t p() const noexcept { return p_; }
  int degree() const noexcept { return d_; }
  std::uint64_t q() const noexcept { return q_; }
  std::uint32_t p_squared() const noexcept { return p2_; }

  /// Coefficients m_0..m_{d-1} of the monic modulus x^d + ... ; each in [0, p).
  std::span<const std::uint32_t> modulus() const noexcept { return {modulus_.data(), static_cast<std::size_t>(d_)}; }

  FieldElement field(std::int64_t value) const;
  FieldElement field_from_coeffs(std::span<const std::int64_t> coeffs) const;
  FieldElement field_element(std::uint64_t index) const;
  FieldElement field_generator() const;

  WittRingElement witt(std::int64_t value) const;
  WittRingElement witt_from_coeffs(std::span<const std::int64_t> coeffs) const;
  WittRingElement witt_element(std::uint64_t index) const;

  FieldElement reduce(const WittRingElement& x) const;
  /// Coefficientwise lift with representatives in [0, p).
  WittRingElement lift(const FieldElement& x) const;
  /// p * lift(x); independent of the choice of lift.
  WittRingElement times_p(const FieldElement& x) const;
  /// The residue of x / p; throws InternalDivisibilityFailure unless p | x.
  FieldElement divide_by_p(const WittRingElement& x) const;

  FieldElement frobenius(const FieldElement& x) const { return x.pow(p_); }
  FieldElement inverse_frobenius(const FieldElement& x) const;

  bool is_square(const FieldElement& x) const;
  std::optional<FieldElement> sqrt(const FieldElement& x) const;

  /// Field inverse of a nonzero residue in the prime field; fast path for d = 1.
  std::uint32_t prime_inverse(std::uint32_t a) const;

 private:
  ReductionContext(std::uint32_t p, int d);
  friend const ReductionContext& make_context(std::int64_t p, std::int64_t d);
  template <int>
  friend class GaloisElement;

  template <int Level>
  std::uint32_t level_modulus() const noexcept {
    return Level == 1 ? p_ : p2_;
  }

  FieldElement field_inverse(const FieldElement& x) const;

  std::uint32_t p_;
  int d_;
  std::uint64_t q_;
  std::uint32_t p2_;
  std::array<std::uint32_t, kMaxExtensionDegree> modulus_{};
  std::vector<std::uint32_t> inverse_table_;  // only for d > 1 and small q
  std::array<std::uint32_t, kMaxExtensionDegree> non_residue_{};
};

/// Returns the shared context for F_{p^d}; the modulus is the least monic
/// irreducible polynomial of degree d in the order of its index sum m_i p^i.
/// Errors: NotPrime, EvenPrime, PrimeTooLarge, DegreeOutOfRange.
const ReductionContext& make_context(std::int64_t p, std::int64_t d);

bool is_prime(std::uint64_t n) noexcept;

/// Polynomial string in the generator "u", highest degree first: "0", "2", "u+1", "2u^2+u".
template <int Level>
std::string to_string(const GaloisElement<Level>& x);

// ---------------------------------------------------------------------------
// Witt layer

enum class WittConvention { Standard, Twisted };

std::string_view to_string(WittConvention convention) noexcept;
/// Accepts "standard" and "twisted".
WittConvention parse_witt_convention(std::string_view text);

struct WittParameter {
  WittRingElement lifted;
  FieldElement lambda0;
  FieldElement lambda1;
  WittConvention convention = WittConvention::Standard;
};

/// Multiplicative section of reduction: the unique lift fixed by q-th powering.
WittRingElement teichmuller(const FieldElement& x0);

/// The ring automorphism of W_2(F_q) lifting x -> x^p.
WittRingElement frobenius_w2(const WittRingElement& x);

/// Splits x = tau(lambda0) + p * lift(r).  Standard: lambda1 = r.  Twisted:
/// lambda1 = r^p, the Witt-vector coordinate (x = [lambda0] + V[lambda1]).
/// The two agree for d = 1.  Throws ForbiddenResidue when lambda0 is 0 or 1.
WittParameter witt_decompose(const WittRingElement& x, WittConvention convention);

WittRingElement witt_compose(const FieldElement& lambda0, const FieldElement& lambda1,
                             WittConvention convention);

// ---------------------------------------------------------------------------
// Embeddings F_{p^a} -> F_{p^b}, a | b.

class FieldEmbedding {
 public:
  FieldEmbedding(const ReductionContext& from, const ReductionContext& to);

  const ReductionContext& source() const noexcept { return *from_; }
  const ReductionContext& target() const noexcept { return *to_; }
  FieldElement operator()(const FieldElement& x) const;

 private:
  const ReductionContext* from_;
  const ReductionContext* to_;
  std::vector<FieldElement> powers_;  // images of u^0 .. u^{a-1}
};

// ---------------------------------------------------------------------------
// Inline arithmetic

template <int Level>
std::uint32_t GaloisElement<Level>::modulus() const noexcept {
  return ctx_->template level_modulus<Level>();
}

template <int Level>
bool GaloisElement<Level>::is_zero() const noexcept {
  for (auto v : c_) {
    if (v != 0) return false;
  }
  return true;
}

template <int Level>
bool GaloisElement<Level>::is_one() const noexcept {
  if (c_[0] != 1) return false;
  for (std::size_t i = 1; i < c_.size(); ++i) {
    if (c_[i] != 0) return false;
  }
  return true;
}

template <int Level>
GaloisElement<Level> GaloisElement<Level>::operator+(const GaloisElement& rhs) const {
  assert(ctx_ == rhs.ctx_);
  const std::uint64_t n = modulus();
  Coeffs r{};
  for (int i = 0; i < ctx_->d_; ++i) {
    std::uint64_t s = std::uint64_t{c_[i]} + rhs.c_[i];
    r[i] = static_cast<std::uint32_t>(s >= n ? s - n : s);
  }
  return {*ctx_, r};
}

template <int Level>
GaloisElement<Level> GaloisElement<Level>::operator-(const GaloisElement& rhs) const {
  assert(ctx_ == rhs.ctx_);
  const std::uint64_t n = modulus();
  Coeffs r{};
  for (int i = 0; i < ctx_->d_; ++i) {
    std::uint64_t s = std::uint64_t{c_[i]} + n - rhs.c_[i];
    r[i] = static_cast<std::uint32_t>(s >= n ? s - n : s);
  }
  return {*ctx_, r};
}

template <int Level>
GaloisElement<Level> GaloisElement<Level>::operator-() const {
  const std::uint32_t n = modulus();
  Coeffs r{};
  for (int i = 0; i < ctx_->d_; ++i) r[i] = c_[i] == 0 ? 0 : n - c_[i];
  return {*ctx_, r};
}

template <int Level>
GaloisElement<Level> GaloisElement<Level>::operator*(const GaloisElement& rhs) const {
  assert(ctx_ == rhs.ctx_);
  const std::uint64_t n = modulus();
  const int d = ctx_->d_;
  if (d == 1) {
    Coeffs r{};
    r[0] = static_cast<std::uint32_t>(std::uint64_t{c_[0]} * rhs.c_[0] % n);
    return {*ctx_, r};
  }
  std::array<std::uint64_t, 2 * kMaxExtensionDegree - 1> prod{};
  for (int i = 0; i < d; ++i) {
    if (c_[i] == 0) continue;
    for (int j = 0; j < d; ++j) {
      prod[i + j] = (prod[i + j] + std::uint64_t{c_[i]} * rhs.c_[j]) % n;
    }
  }
  // x^d = -(m_0 + ... + m_{d-1} x^{d-1})
  for (int k = 2 * d - 2; k >= d; --k) {
    const std::uint64_t top = prod[k];
    if (top == 0) continue;
    for (int i = 0; i < d; ++i) {
      const std::uint64_t m = ctx_->modulus_[i];
      if (m == 0) continue;
      prod[k - d + i] = (prod[k - d + i] + (n - m) * top) % n;
    }
  }
  Coeffs r{};
  for (int i = 0; i < d; ++i) r[i] = static_cast<std::uint32_t>(prod[i]);
  return {*ctx_, r};
}

template <int Level>
GaloisElement<Level> GaloisElement<Level>::pow(std::uint64_t e) const {
  Coeffs one{};
  one[0] = 1;
  GaloisElement result(*ctx_, one);
  GaloisElement base = *this;
  while (e != 0) {
    if (e & 1U) result *= base;
    e >>= 1U;
    if (e != 0) base *= base;
  }
  return result;
}

template <int Level>
std::uint64_t GaloisElement<Level>::index() const noexcept {
  std::uint64_t idx = 0;
  for (int i = ctx_->d_ - 1; i >= 0; --i) idx = idx * modulus() + c_[i];
  return idx;
}

template <int Level>
GaloisElement<Level> GaloisElement<Level>::inverse() const {
  if constexpr (Level == 1) {
    return ctx_->field_inverse(*this);
  } else {
    const FieldElement residue = ctx_->reduce(*this);
    if (residue.is_zero()) throw Error(ErrorCode::NonInvertible, "element of W2 is divisible by p");
    const GaloisElement y0 = ctx_->lift(ctx_->field_inverse(residue));
    // One Newton step doubles the p-adic precision: y = y0 (2 - x y0).
    return y0 * (ctx_->witt(2) - *this * y0);
  }
}

}  // namespace higgsflow
