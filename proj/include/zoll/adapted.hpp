#pragma once

// Adapted complex structure on the tangent bundle along one geodesic.
//
// The normal Jacobi system is modelled by constant-curvature blocks
// f'' + K f = 0 in a parallel frame, so psi and Psi are diagonal.  Matrices are
// (dim M - 1) x (dim M - 1).

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "zoll/jacobi.hpp"

namespace zoll {

using CMatrixX = Eigen::MatrixXcd;
using CVectorX = Eigen::VectorXcd;

struct BlockModel {
  std::vector<double> curvatures;
  std::string name;

  int normal_dimension() const noexcept { return static_cast<int>(curvatures.size()); }

  /// CP^n with holomorphic curvature 1: one K = 1 direction (J gamma') and 2n - 2 with K = 1/4.
  static BlockModel cpn(int n);
  /// Round unit sphere S^m.
  static BlockModel sphere(int m);
  /// A single block of curvature K.
  static BlockModel block(double curvature);
};

enum class PsiBackend { ClosedForm, Continued };

const char* to_string(PsiBackend backend);

/// eta = psi zeta for the fields zeta_i(0) = (v_i, 0), eta_i(0) = (0, v_i).  Throws SingularSigma.
RMatrix psi_real(const BlockModel& model, double sigma);

/// Psi(sigma + i tau).  Continued integrates the holomorphic Jacobi system along the
/// vertical ray from (sigma, 0); throws ContinuationBreakdown when Im Psi degenerates on the way.
CMatrixX psi_complex(const BlockModel& model, double sigma, double tau, PsiBackend backend = PsiBackend::ClosedForm);

/// Coefficient representation of J on the span of the fields xi_zeta, xi_eta at sigma + i tau:
/// a vector sum_i a_i xi_zeta_i + b_i xi_eta_i maps to the returned pair of coefficient vectors.
/// Throws NotInvertible when Im Psi is singular.
std::pair<RVector, RVector> complex_structure_J(const CMatrixX& psi, const RVector& a, const RVector& b);
std::pair<RVector, RVector> complex_structure_J(const BlockModel& model, double sigma, double tau, const RVector& a,
                                                const RVector& b);

/// Real 2k x 2k matrix of J in the (a, b) coordinates.
RMatrix complex_structure_matrix(const CMatrixX& psi);

struct TubeProbe {
  bool entire = false;
  double radius = 0.0;  ///< meaningful when !entire
  double min_singular_value = 0.0;
};

struct TubeProbeOptions {
  double tau_max = 40.0;
  double tau_step = 0.05;
  int sigma_points = 64;
  PsiBackend backend = PsiBackend::ClosedForm;
};

/// Largest tau for which Im Psi stays invertible on the sigma grid, or Entire.
TubeProbe tube_radius_probe(const BlockModel& model, const TubeProbeOptions& options = {});

/// Jacobi fields along `path` with columns zeta_1..zeta_k, eta_1..eta_k for the
/// normal vectors given as columns of `basis`.
JacobiSolution adapted_jacobi_basis(const GeodesicPath& path, const RMatrix& basis);

/// psi at sample i of a solution from adapted_jacobi_basis (least squares in the chart).
RMatrix psi_from_fields(const JacobiSolution& fields, std::size_t sample);

}  // namespace zoll
