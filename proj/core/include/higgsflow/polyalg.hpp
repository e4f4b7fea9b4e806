#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "higgsflow/exactfield.hpp"

namespace higgsflow {

/// Degree reported for the zero polynomial.
inline constexpr int kZeroPolyDegree = -1;

/// Dense univariate polynomial in z, lowest degree first, no trailing zeros.
template <class R>
class Polynomial {
 public:
  explicit Polynomial(const ReductionContext& ctx) : ctx_(&ctx) {}
  Polynomial(const ReductionContext& ctx, std::vector<R> coeffs) : ctx_(&ctx), c_(std::move(coeffs)) { trim(); }

  static Polynomial constant(const R& c) { return Polynomial(c.context(), {c}); }
  static Polynomial monomial(const R& c, int k) {
    std::vector<R> v(static_cast<std::size_t>(k) + 1, zero_of(c.context()));
    v.back() = c;
    return Polynomial(c.context(), std::move(v));
  }
  /// z^k
  static Polynomial z_power(const ReductionContext& ctx, int k) { return monomial(one_of(ctx), k); }

  const ReductionContext& context() const noexcept { return *ctx_; }
  int degree() const noexcept { return c_.empty() ? kZeroPolyDegree : static_cast<int>(c_.size()) - 1; }
  bool is_zero() const noexcept { return c_.empty(); }
  const std::vector<R>& coeffs() const noexcept { return c_; }
  R coeff(int i) const {
    return i >= 0 && i < static_cast<int>(c_.size()) ? c_[static_cast<std::size_t>(i)] : zero_of(*ctx_);
  }
  R leading() const { return c_.empty() ? zero_of(*ctx_) : c_.back(); }

  Polynomial operator+(const Polynomial& rhs) const {
    std::vector<R> r(std::max(c_.size(), rhs.c_.size()), zero_of(*ctx_));
    for (std::size_t i = 0; i < c_.size(); ++i) r[i] = c_[i];
    for (std::size_t i = 0; i < rhs.c_.size(); ++i) r[i] += rhs.c_[i];
    return Polynomial(*ctx_, std::move(r));
  }
  Polynomial operator-(const Polynomial& rhs) const {
    std::vector<R> r(std::max(c_.size(), rhs.c_.size()), zero_of(*ctx_));
    for (std::size_t i = 0; i < c_.size(); ++i) r[i] = c_[i];
    for (std::size_t i = 0; i < rhs.c_.size(); ++i) r[i] -= rhs.c_[i];
    return Polynomial(*ctx_, std::move(r));
  }
  Polynomial operator-() const {
    std::vector<R> r = c_;
    for (auto& x : r) x = -x;
    return Polynomial(*ctx_, std::move(r));
  }
  Polynomial operator*(const Polynomial& rhs) const {
    if (is_zero() || rhs.is_zero()) return Polynomial(*ctx_);
    std::vector<R> r(c_.size() + rhs.c_.size() - 1, zero_of(*ctx_));
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (c_[i].is_zero()) continue;
      for (std::size_t j = 0; j < rhs.c_.size(); ++j) r[i + j] += c_[i] * rhs.c_[j];
    }
    return Polynomial(*ctx_, std::move(r));
  }
  Polynomial operator*(const R& s) const {
    std::vector<R> r = c_;
    for (auto& x : r) x *= s;
    return Polynomial(*ctx_, std::move(r));
  }
  Polynomial& operator+=(const Polynomial& rhs) { return *this = *this + rhs; }
  Polynomial& operator-=(const Polynomial& rhs) { return *this = *this - rhs; }
  Polynomial& operator*=(const Polynomial& rhs) { return *this = *this * rhs; }

  /// Multiplication by z^k, k >= 0.
  Polynomial shifted(int k) const {
    if (is_zero()) return *this;
    std::vector<R> r(static_cast<std::size_t>(k), zero_of(*ctx_));
    r.insert(r.end(), c_.begin(), c_.end());
    return Polynomial(*ctx_, std::move(r));
  }

  R evaluate(const R& x) const {
    R acc = zero_of(*ctx_);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) noexcept {
    return a.ctx_ == b.ctx_ && a.c_ == b.c_;
  }

 private:
  static R zero_of(const ReductionContext& ctx) {
    if constexpr (std::is_same_v<R, FieldElement>) {
      return ctx.field(0);
    } else {
      return ctx.witt(0);
    }
  }
  static R one_of(const ReductionContext& ctx) {
    if constexpr (std::is_same_v<R, FieldElement>) {
      return ctx.field(1);
    } else {
      return ctx.witt(1);
    }
  }
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }

  const ReductionContext* ctx_;
  std::vector<R> c_;
};

using Poly = Polynomial<FieldElement>;
using WittPoly = Polynomial<WittRingElement>;

template <class R>
Polynomial<R> pow(const Polynomial<R>& base, unsigned e) {
  Polynomial<R> result = Polynomial<R>::z_power(base.context(), 0);
  Polynomial<R> b = base;
  while (e != 0) {
    if (e & 1U) result *= b;
    e >>= 1U;
    if (e != 0) b *= b;
  }
  return result;
}

/// (z - root)^e
template <class R>
Polynomial<R> linear_power(const R& root, unsigned e) {
  const ReductionContext& ctx = root.context();
  return pow(Polynomial<R>::z_power(ctx, 1) - Polynomial<R>::constant(root), e);
}

// --- field polynomials ------------------------------------------------------

/// f = q g + r with deg r < deg g.  Throws DivisionByZeroPoly for g = 0.
std::pair<Poly, Poly> poly_divrem(const Poly& f, const Poly& g);

/// Exact quotient; throws InternalDivisibilityFailure when g does not divide f.
Poly poly_exact_div(const Poly& f, const Poly& g);

struct ExtGcd {
  Poly gcd;  // monic, or zero when f = g = 0
  Poly u;
  Poly v;    // u f + v g = gcd
};

ExtGcd poly_ext_gcd(const Poly& f, const Poly& g);

Poly monic(const Poly& f);

/// Order of vanishing of f at z = root; f must be nonzero.
int multiplicity_at(const Poly& f, const FieldElement& root);

/// Inverse of a modulo m, or nullopt when gcd(a, m) != 1.
std::optional<Poly> poly_inverse_mod(const Poly& a, const Poly& m);

/// Reduction of a W_2 polynomial to F_q[z].
Poly reduce_mod_p(const WittPoly& f);
/// (1/p) f reduced to F_q[z]; throws InternalDivisibilityFailure unless p | f.
Poly divide_by_p(const WittPoly& f);

/// Value of f at a point of a larger field.
FieldElement evaluate_in(const Poly& f, const FieldElement& x, const FieldEmbedding& embed);

// --- Laurent polynomials ------------------------------------------------------

/// z^valuation * body with body(0) != 0; the zero element has valuation 0.
class LaurentPoly {
 public:
  explicit LaurentPoly(const ReductionContext& ctx) : body_(ctx) {}
  LaurentPoly(Poly body, int valuation);

  const ReductionContext& context() const noexcept { return body_.context(); }
  bool is_zero() const noexcept { return body_.is_zero(); }
  int valuation() const noexcept { return valuation_; }
  /// Least and greatest exponents carrying a nonzero coefficient.
  int min_exponent() const noexcept { return valuation_; }
  int max_exponent() const noexcept { return valuation_ + body_.degree(); }
  const Poly& body() const noexcept { return body_; }
  FieldElement coeff(int exponent) const { return body_.coeff(exponent - valuation_); }

  LaurentPoly operator+(const LaurentPoly& rhs) const;
  LaurentPoly operator-(const LaurentPoly& rhs) const;
  LaurentPoly operator*(const LaurentPoly& rhs) const;

  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) noexcept {
    return a.valuation_ == b.valuation_ && a.body_ == b.body_;
  }

 private:
  Poly body_;
  int valuation_ = 0;
};

// --- rational expressions with poles in {0, 1, infinity} --------------------------

/// num(z) * z^z_exp * (z-1)^one_exp, kept with num(0) != 0 and num(1) != 0.
class RationalExpr {
 public:
  explicit RationalExpr(const ReductionContext& ctx) : num_(ctx) {}
  RationalExpr(Poly num, int z_exp, int one_exp);
  explicit RationalExpr(Poly num) : RationalExpr(std::move(num), 0, 0) {}
  explicit RationalExpr(const LaurentPoly& l) : RationalExpr(l.body(), l.valuation(), 0) {}

  const ReductionContext& context() const noexcept { return num_.context(); }
  bool is_zero() const noexcept { return num_.is_zero(); }
  const Poly& numerator() const noexcept { return num_; }
  int z_exponent() const noexcept { return z_exp_; }
  int one_exponent() const noexcept { return one_exp_; }
  /// True when the value is c * z^k for a nonzero scalar c.
  bool is_monomial_unit() const noexcept { return one_exp_ == 0 && num_.degree() == 0; }

  RationalExpr operator+(const RationalExpr& rhs) const;
  RationalExpr operator-(const RationalExpr& rhs) const;
  RationalExpr operator*(const RationalExpr& rhs) const;
  RationalExpr operator-() const { return RationalExpr(-num_, z_exp_, one_exp_); }

  /// Value at x (x != 0, 1) in a field containing the coefficients.
  FieldElement evaluate(const FieldElement& x, const FieldEmbedding& embed) const;

  friend bool operator==(const RationalExpr& a, const RationalExpr& b) noexcept {
    return a.z_exp_ == b.z_exp_ && a.one_exp_ == b.one_exp_ && a.num_ == b.num_;
  }

 private:
  void normalize();

  Poly num_;
  int z_exp_ = 0;
  int one_exp_ = 0;
};

/// 2x2 matrix over RationalExpr.
struct Mat2 {
  std::array<std::array<RationalExpr, 2>, 2> e;

  RationalExpr det() const { return e[0][0] * e[1][1] - e[0][1] * e[1][0]; }
  Mat2 operator*(const Mat2& rhs) const;
  friend bool operator==(const Mat2& a, const Mat2& b) noexcept { return a.e == b.e; }
};

// --- matrices over F_q ------------------------------------------------------------

class FqMatrix {
 public:
  /// Zero matrix; throws DimensionMismatch for non-positive sizes.
  FqMatrix(const ReductionContext& ctx, int rows, int cols);

  const ReductionContext& context() const noexcept { return *ctx_; }
  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }

  const FieldElement& operator()(int r, int c) const { return data_[static_cast<std::size_t>(r * cols_ + c)]; }
  FieldElement& operator()(int r, int c) { return data_[static_cast<std::size_t>(r * cols_ + c)]; }

  FqMatrix transpose() const;
  /// The leading rows x cols block.
  FqMatrix leading_block(int rows, int cols) const;
  /// The first `rows` rows restricted to the listed columns, in order.
  FqMatrix select(int rows, const std::vector<int>& cols) const;

  static FqMatrix from_rows(const ReductionContext& ctx, const std::vector<std::vector<std::int64_t>>& rows);

  friend bool operator==(const FqMatrix& a, const FqMatrix& b) noexcept {
    return a.ctx_ == b.ctx_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  const ReductionContext* ctx_;
  int rows_;
  int cols_;
  std::vector<FieldElement> data_;
};

/// Throws NotSquare for non-square input.
FieldElement mat_det(const FqMatrix& m);
int mat_rank(const FqMatrix& m);

/// Basis of { v : v M = 0 }.  Each basis vector has its highest nonzero entry
/// equal to 1, the other basis vectors vanish at that index, and vectors are
/// ordered by that index ascending.
std::vector<std::vector<FieldElement>> mat_left_nullspace(const FqMatrix& m);

}  // namespace higgsflow
