#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "higgsflow/exactfield.hpp"
#include "higgsflow/polyalg.hpp"

namespace higgsflow {

/// The p x (2p+1) criterion matrix.  Documentation uses the 1-indexed entries
/// T_{ij}; storage is 0-indexed, so T_{ij} is t(i-1, j-1).
struct CriterionMatrix {
  FieldElement lambda0;
  FieldElement lambda1;
  FqMatrix t;

  int p() const noexcept { return t.rows(); }
};

/// T_{ij} = lambda1 (i = j); (-1)^{i-j+1} C(p,p-i+j)/p (1 - l0^{i-j}) (i > j);
/// (-1)^{j-i+1} C(p,p-j+i)/p (l0^{p-j+i} - l0^p) (i < j <= p);
/// (-1)^{i+j-p-1} C(p,i+j-p-1)/p (1 - l0^{i+j-p-1}) (p < j <= 2p-i); 0 otherwise.
CriterionMatrix build_T(const FieldElement& lambda0, const FieldElement& lambda1);

/// T_m: the first p-m rows and first p+m columns, 0 <= m <= p-1.
FqMatrix t_submatrix(const CriterionMatrix& t, int m);

/// det T_0 = 0 and rank T_1 = p - 1.
bool periodicity_pair(const FieldElement& lambda0, const FieldElement& lambda1);

enum class SplittingMethod { TCriterion, Birkhoff, Cech };
std::string_view to_string(SplittingMethod method) noexcept;

/// H = O(n) + O(-n).
struct SplittingType {
  int n = 0;
  SplittingMethod method = SplittingMethod::TCriterion;
  bool periodic = false;  // n == 1
};

SplittingType make_splitting(int n, SplittingMethod method);

/// n = least m with rank T_m = p - m, or p when no T_m has full rank.
SplittingType splitting_from_T(const FieldElement& lambda0, const FieldElement& lambda1);

/// Rows i = 0..p of z^i A = Q_i (z-1)^{2p} + R_i; r(i, j) is the z^j coefficient of R_i.
struct RemainderSystem {
  Poly a;
  FqMatrix r;
  std::vector<Poly> quotients;
  std::vector<Poly> remainders;

  int p() const noexcept { return r.rows() - 1; }
};

/// Throws DegreeTooLarge when deg A > 2p - 1.
RemainderSystem remainder_system(const Poly& a);

struct IndexMismatch {
  int row;  // R row i (0-indexed)
  int col;  // R column j (0-indexed)
};

/// First entry violating R_{ij} = T_{i+1,j+1} (i, j <= p-1) or
/// R_{ij} = T_{i+1,3p-j} (i <= p-1, p+i+1 <= j <= 2p-1).
std::optional<IndexMismatch> first_T_R_mismatch(const CriterionMatrix& t, const RemainderSystem& rs);

/// Builds A in closed form, R and T, and checks both index identities entrywise.
bool validate_T_R(const FieldElement& lambda0, const FieldElement& lambda1);

}  // namespace higgsflow

namespace higgsflow {

/// det T_0 as a polynomial in lambda1, by interpolation through p+1 values of
/// lambda1 taken in an extension with more than p elements.  The result lives
/// over F_{p^{2d}} (lambda0 embedded).
Poly det_T0_polynomial(const FieldElement& lambda0);

}  // namespace higgsflow
