#pragma once

// Integral cohomology tables of UM, D and X = CP^n x CP^n from the Gysin and
// Mayer-Vietoris sequences, computed exactly with arbitrary-precision integers.

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <vector>

namespace zoll {

using BigInt = boost::multiprecision::cpp_int;

/// Z^rank + Z/d_1 + ... + Z/d_k with d_1 | d_2 | ... and d_i >= 2.
class FGAbelianGroup {
 public:
  FGAbelianGroup() = default;
  /// Accepts any list of cyclic orders (0 means Z, 1 is dropped) and normalizes it.
  static FGAbelianGroup from_cyclic(const std::vector<BigInt>& orders);
  static FGAbelianGroup free(int rank) { return from_cyclic(std::vector<BigInt>(rank, 0)); }
  static FGAbelianGroup zero() { return {}; }

  int rank() const noexcept { return rank_; }
  const std::vector<BigInt>& torsion() const noexcept { return torsion_; }
  bool is_zero() const noexcept { return rank_ == 0 && torsion_.empty(); }
  bool is_free() const noexcept { return torsion_.empty(); }

  FGAbelianGroup operator+(const FGAbelianGroup& other) const;  ///< direct sum
  bool operator==(const FGAbelianGroup& other) const { return rank_ == other.rank_ && torsion_ == other.torsion_; }
  bool operator!=(const FGAbelianGroup& other) const { return !(*this == other); }

  /// "0", "Z", "Z^2 + Z/3".
  std::string to_string() const;
  /// Torsion factors joined by ';' (empty when torsion-free).
  std::string torsion_string() const;

 private:
  int rank_ = 0;
  std::vector<BigInt> torsion_;
};

using CohomologyTable = std::vector<FGAbelianGroup>;  ///< index = degree

class IntegerMatrix {
 public:
  IntegerMatrix() = default;
  IntegerMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols) {}
  IntegerMatrix(std::initializer_list<std::initializer_list<long long>> rows);
  static IntegerMatrix identity(int size);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  BigInt& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  const BigInt& operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

  IntegerMatrix operator*(const IntegerMatrix& other) const;
  IntegerMatrix operator+(const IntegerMatrix& other) const;
  IntegerMatrix transpose() const;
  IntegerMatrix scaled(const BigInt& factor) const;
  bool operator==(const IntegerMatrix& other) const;
  bool is_diagonal() const;

  /// Exact determinant (Bareiss elimination).
  BigInt determinant() const;

  static IntegerMatrix kronecker(const IntegerMatrix& a, const IntegerMatrix& b);

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<BigInt> data_;
};

struct SmithForm {
  IntegerMatrix U, S, V;  ///< U * A * V = S
  int rank = 0;
  std::vector<BigInt> diagonal;  ///< nonzero invariant factors, ascending by divisibility
};

SmithForm smith_normal_form(const IntegerMatrix& A);

/// Cokernel and kernel of A: Z^cols -> Z^rows.
FGAbelianGroup cokernel(const IntegerMatrix& A);
int kernel_rank(const IntegerMatrix& A);
/// Basis of ker A as columns.
IntegerMatrix kernel_basis(const IntegerMatrix& A);

CohomologyTable cpn_cohomology(int n);

/// Gysin sequence of the unit sphere bundle S^{2n-1} -> UM -> M with Euler number `euler`.
CohomologyTable sphere_gysin(const CohomologyTable& H_M, const BigInt& euler);
/// Gysin sequence of S^1 -> UM -> D.  Throws InconsistentChase.
CohomologyTable circle_gysin(const CohomologyTable& H_UM);
/// Mayer-Vietoris for X = (disc bundle) u (D side), glued along UM.  Throws InconsistentChase.
CohomologyTable mayer_vietoris_X(const CohomologyTable& H_D, const CohomologyTable& H_M, const CohomologyTable& H_UM);

CohomologyTable closed_form_UM(int n);
CohomologyTable closed_form_D(int n);
CohomologyTable closed_form_X(int n);

int euler_characteristic(const CohomologyTable& table);

struct CohomologyReport {
  int n = 0;
  CohomologyTable M, UM, D, X;
  int mismatches = 0;  ///< entries differing from the closed forms
};

CohomologyReport compute_cohomology(int n);

/// Cohomology of a cochain complex: differentials[k] maps C^k -> C^{k+1}.
CohomologyTable cochain_cohomology(const std::vector<int>& dims, const std::vector<IntegerMatrix>& differentials);

struct CochainComplex {
  std::vector<int> dims;
  std::vector<IntegerMatrix> differentials;
};

/// Cellular cochains of RP^n, the empty space, and tensor products (Koszul signs).
CochainComplex rp_cochains(int n);
CochainComplex tensor(const CochainComplex& a, const CochainComplex& b);

struct EigenspaceVerdict {
  int d = 0;
  IntegerMatrix action;      ///< [[1, -d], [0, -1]] in the basis {x, omega}
  bool squares_to_identity = false;
  int eigenspace_rank = 0;   ///< rank of the (-1)-eigenspace of the transpose action
  IntegerMatrix eigenspace;  ///< basis column(s)
  bool contains_omega = false;
  bool holds() const { return squares_to_identity && eigenspace_rank == 1 && contains_omega; }
};

/// (-1)-eigenspace of the transposed involution action on H^2(D) = Z x + Z omega.
EigenspaceVerdict eigenspace_argument(int d);

}  // namespace zoll
