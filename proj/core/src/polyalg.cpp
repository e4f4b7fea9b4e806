#include "higgsflow/polyalg.hpp"

namespace higgsflow {

std::pair<Poly, Poly> poly_divrem(const Poly& f, const Poly& g) {
  if (g.is_zero()) throw Error(ErrorCode::DivisionByZeroPoly, "division by the zero polynomial");
  const ReductionContext& ctx = f.context();
  if (f.degree() < g.degree()) return {Poly(ctx), f};

  std::vector<FieldElement> rem = f.coeffs();
  const int dg = g.degree();
  std::vector<FieldElement> quot(static_cast<std::size_t>(f.degree() - dg + 1), ctx.field(0));
  const FieldElement lead_inv = g.leading().inverse();
  for (int k = f.degree(); k >= dg; --k) {
    const FieldElement c = rem[static_cast<std::size_t>(k)] * lead_inv;
    if (c.is_zero()) continue;
    quot[static_cast<std::size_t>(k - dg)] = c;
    for (int i = 0; i <= dg; ++i) rem[static_cast<std::size_t>(k - dg + i)] -= c * g.coeffs()[static_cast<std::size_t>(i)];
  }
  rem.resize(static_cast<std::size_t>(dg));
  return {Poly(ctx, std::move(quot)), Poly(ctx, std::move(rem))};
}

Poly poly_exact_div(const Poly& f, const Poly& g) {
  auto [q, r] = poly_divrem(f, g);
  if (!r.is_zero()) throw Error(ErrorCode::InternalDivisibilityFailure, "inexact polynomial division");
  return q;
}

Poly monic(const Poly& f) {
  if (f.is_zero()) return f;
  return f * f.leading().inverse();
}

ExtGcd poly_ext_gcd(const Poly& f, const Poly& g) {
  const ReductionContext& ctx = f.context();
  const Poly one = Poly::z_power(ctx, 0);
  if (f.is_zero() && g.is_zero()) return {Poly(ctx), Poly(ctx), Poly(ctx)};

  Poly r0 = f, r1 = g;
  Poly s0 = one, s1(ctx);
  Poly t0(ctx), t1 = one;
  while (!r1.is_zero()) {
    auto [q, r] = poly_divrem(r0, r1);
    r0 = std::exchange(r1, r);
    s0 = std::exchange(s1, s0 - q * s1);
    t0 = std::exchange(t1, t0 - q * t1);
  }
  const FieldElement scale = r0.leading().inverse();
  return {r0 * scale, s0 * scale, t0 * scale};
}

int multiplicity_at(const Poly& f, const FieldElement& root) {
  if (f.is_zero()) throw Error(ErrorCode::DivisionByZeroPoly, "multiplicity of the zero polynomial");
  const Poly lin = linear_power(root, 1);
  int k = 0;
  Poly cur = f;
  for (;;) {
    auto [q, r] = poly_divrem(cur, lin);
    if (!r.is_zero()) return k;
    cur = std::move(q);
    ++k;
  }
}

std::optional<Poly> poly_inverse_mod(const Poly& a, const Poly& m) {
  const ExtGcd eg = poly_ext_gcd(poly_divrem(a, m).second, m);
  if (eg.gcd.degree() != 0) return std::nullopt;
  return poly_divrem(eg.u, m).second;
}

Poly reduce_mod_p(const WittPoly& f) {
  const ReductionContext& ctx = f.context();
  std::vector<FieldElement> c;
  c.reserve(f.coeffs().size());
  for (const auto& x : f.coeffs()) c.push_back(ctx.reduce(x));
  return Poly(ctx, std::move(c));
}

Poly divide_by_p(const WittPoly& f) {
  const ReductionContext& ctx = f.context();
  std::vector<FieldElement> c;
  c.reserve(f.coeffs().size());
  for (const auto& x : f.coeffs()) c.push_back(ctx.divide_by_p(x));
  return Poly(ctx, std::move(c));
}

FieldElement evaluate_in(const Poly& f, const FieldElement& x, const FieldEmbedding& embed) {
  FieldElement acc = embed.target().field(0);
  for (auto it = f.coeffs().rbegin(); it != f.coeffs().rend(); ++it) acc = acc * x + embed(*it);
  return acc;
}

// ---------------------------------------------------------------------------

LaurentPoly::LaurentPoly(Poly body, int valuation) : body_(std::move(body)), valuation_(valuation) {
  if (body_.is_zero()) {
    valuation_ = 0;
    return;
  }
  int strip = 0;
  while (body_.coeffs()[static_cast<std::size_t>(strip)].is_zero()) ++strip;
  if (strip > 0) {
    std::vector<FieldElement> c(body_.coeffs().begin() + strip, body_.coeffs().end());
    body_ = Poly(body_.context(), std::move(c));
    valuation_ += strip;
  }
}

LaurentPoly LaurentPoly::operator+(const LaurentPoly& rhs) const {
  if (is_zero()) return rhs;
  if (rhs.is_zero()) return *this;
  const int v = std::min(valuation_, rhs.valuation_);
  return LaurentPoly(body_.shifted(valuation_ - v) + rhs.body_.shifted(rhs.valuation_ - v), v);
}

LaurentPoly LaurentPoly::operator-(const LaurentPoly& rhs) const {
  return *this + LaurentPoly(-rhs.body_, rhs.valuation_);
}

LaurentPoly LaurentPoly::operator*(const LaurentPoly& rhs) const {
  return LaurentPoly(body_ * rhs.body_, valuation_ + rhs.valuation_);
}

// ---------------------------------------------------------------------------

RationalExpr::RationalExpr(Poly num, int z_exp, int one_exp)
    : num_(std::move(num)), z_exp_(z_exp), one_exp_(one_exp) {
  normalize();
}

void RationalExpr::normalize() {
  if (num_.is_zero()) {
    z_exp_ = 0;
    one_exp_ = 0;
    return;
  }
  const ReductionContext& ctx = num_.context();
  const LaurentPoly stripped(num_, 0);
  z_exp_ += stripped.valuation();
  num_ = stripped.body();
  const int k = multiplicity_at(num_, ctx.field(1));
  if (k > 0) {
    num_ = poly_exact_div(num_, linear_power(ctx.field(1), static_cast<unsigned>(k)));
    one_exp_ += k;
  }
}

RationalExpr RationalExpr::operator+(const RationalExpr& rhs) const {
  if (is_zero()) return rhs;
  if (rhs.is_zero()) return *this;
  const ReductionContext& ctx = num_.context();
  const int a = std::min(z_exp_, rhs.z_exp_);
  const int b = std::min(one_exp_, rhs.one_exp_);
  const FieldElement one = ctx.field(1);
  Poly lhs_num = num_.shifted(z_exp_ - a) * linear_power(one, static_cast<unsigned>(one_exp_ - b));
  Poly rhs_num = rhs.num_.shifted(rhs.z_exp_ - a) * linear_power(one, static_cast<unsigned>(rhs.one_exp_ - b));
  return RationalExpr(lhs_num + rhs_num, a, b);
}

RationalExpr RationalExpr::operator-(const RationalExpr& rhs) const { return *this + (-rhs); }

RationalExpr RationalExpr::operator*(const RationalExpr& rhs) const {
  return RationalExpr(num_ * rhs.num_, z_exp_ + rhs.z_exp_, one_exp_ + rhs.one_exp_);
}

namespace {

FieldElement signed_pow(const FieldElement& x, int e) {
  return e >= 0 ? x.pow(static_cast<std::uint64_t>(e)) : x.inverse().pow(static_cast<std::uint64_t>(-e));
}

}  // namespace

FieldElement RationalExpr::evaluate(const FieldElement& x, const FieldEmbedding& embed) const {
  const ReductionContext& big = embed.target();
  if (num_.is_zero()) return big.field(0);
  return evaluate_in(num_, x, embed) * signed_pow(x, z_exp_) * signed_pow(x - big.field(1), one_exp_);
}

Mat2 Mat2::operator*(const Mat2& rhs) const {
  Mat2 out = *this;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) out.e[i][j] = e[i][0] * rhs.e[0][j] + e[i][1] * rhs.e[1][j];
  }
  return out;
}

// ---------------------------------------------------------------------------

FqMatrix::FqMatrix(const ReductionContext& ctx, int rows, int cols) : ctx_(&ctx), rows_(rows), cols_(cols) {
  if (rows <= 0 || cols <= 0) throw Error(ErrorCode::DimensionMismatch, "matrix dimensions must be positive");
  data_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), ctx.field(0));
}

FqMatrix FqMatrix::from_rows(const ReductionContext& ctx, const std::vector<std::vector<std::int64_t>>& rows) {
  if (rows.empty()) throw Error(ErrorCode::DimensionMismatch, "matrix needs at least one row");
  FqMatrix m(ctx, static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
  for (int r = 0; r < m.rows_; ++r) {
    if (static_cast<int>(rows[static_cast<std::size_t>(r)].size()) != m.cols_) {
      throw Error(ErrorCode::DimensionMismatch, "ragged rows");
    }
    for (int c = 0; c < m.cols_; ++c) m(r, c) = ctx.field(rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
  }
  return m;
}

FqMatrix FqMatrix::transpose() const {
  FqMatrix t(*ctx_, cols_, rows_);
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  }
  return t;
}

FqMatrix FqMatrix::leading_block(int rows, int cols) const {
  if (rows > rows_ || cols > cols_) throw Error(ErrorCode::IndexOutOfRange, "block exceeds matrix");
  FqMatrix b(*ctx_, rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) b(r, c) = (*this)(r, c);
  }
  return b;
}

FqMatrix FqMatrix::select(int rows, const std::vector<int>& cols) const {
  if (rows > rows_) throw Error(ErrorCode::IndexOutOfRange, "row selection exceeds matrix");
  FqMatrix b(*ctx_, rows, static_cast<int>(cols.size()));
  for (int r = 0; r < rows; ++r) {
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (cols[k] < 0 || cols[k] >= cols_) throw Error(ErrorCode::IndexOutOfRange, "column selection exceeds matrix");
      b(r, static_cast<int>(k)) = (*this)(r, cols[k]);
    }
  }
  return b;
}

namespace {

// In-place reduced row echelon form; returns pivot columns.
std::vector<int> row_reduce(FqMatrix& m) {
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
    int pivot = -1;
    for (int r = row; r < m.rows(); ++r) {
      if (!m(r, col).is_zero()) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    if (pivot != row) {
      for (int c = 0; c < m.cols(); ++c) std::swap(m(row, c), m(pivot, c));
    }
    const FieldElement inv = m(row, col).inverse();
    for (int c = col; c < m.cols(); ++c) m(row, c) *= inv;
    for (int r = 0; r < m.rows(); ++r) {
      if (r == row || m(r, col).is_zero()) continue;
      const FieldElement factor = m(r, col);
      for (int c = col; c < m.cols(); ++c) m(r, c) -= factor * m(row, c);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

FieldElement mat_det(const FqMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::NotSquare, "determinant of a non-square matrix");
  FqMatrix a = m;
  const ReductionContext& ctx = m.context();
  FieldElement det = ctx.field(1);
  const int n = a.rows();
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r) {
      if (!a(r, col).is_zero()) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) return ctx.field(0);
    if (pivot != col) {
      for (int c = 0; c < n; ++c) std::swap(a(col, c), a(pivot, c));
      det = -det;
    }
    det *= a(col, col);
    const FieldElement inv = a(col, col).inverse();
    for (int r = col + 1; r < n; ++r) {
      if (a(r, col).is_zero()) continue;
      const FieldElement factor = a(r, col) * inv;
      for (int c = col; c < n; ++c) a(r, c) -= factor * a(col, c);
    }
  }
  return det;
}

int mat_rank(const FqMatrix& m) {
  FqMatrix a = m;
  return static_cast<int>(row_reduce(a).size());
}

std::vector<std::vector<FieldElement>> mat_left_nullspace(const FqMatrix& m) {
  // v M = 0  <=>  M^T v^T = 0.  Forward RREF of M^T makes each free
  // variable the highest nonzero coordinate of its basis vector.
  FqMatrix t = m.transpose();
  const std::vector<int> pivots = row_reduce(t);
  const int n = m.rows();
  std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
  for (int c : pivots) is_pivot[static_cast<std::size_t>(c)] = true;

  const ReductionContext& ctx = m.context();
  std::vector<std::vector<FieldElement>> basis;
  for (int free_var = 0; free_var < n; ++free_var) {
    if (is_pivot[static_cast<std::size_t>(free_var)]) continue;
    std::vector<FieldElement> v(static_cast<std::size_t>(n), ctx.field(0));
    v[static_cast<std::size_t>(free_var)] = ctx.field(1);
    for (std::size_t r = 0; r < pivots.size(); ++r) {
      v[static_cast<std::size_t>(pivots[r])] = -t(static_cast<int>(r), free_var);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace higgsflow
