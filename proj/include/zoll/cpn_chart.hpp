#pragma once

// Real affine chart of CP^n for the Jacobi machinery.
//
// Chart coordinates x in R^{2n} are interleaved (Re z_1, Im z_1, ...), and the
// point is [U^* (1, z)] for a fixed unitary U.  The metric is the pullback of
// fs_metric; the connection is the Kähler one, Gamma(a, b) = -(a <b, z> + b <a, z>) / (1 + |z|^2)
// in complex notation with <b, z> = sum b_j conj(z_j).

#include "zoll/jacobi.hpp"
#include "zoll/projective.hpp"

namespace zoll {

class CpnChart {
 public:
  explicit CpnChart(int n);
  CpnChart(int n, CMatrix unitary);

  /// Chart centred so that the whole closed geodesic of `frame` is the circle |z| = 1.
  static CpnChart adapted_to(const GeodesicFrame& frame);

  int n() const noexcept { return n_; }
  int real_dimension() const noexcept { return 2 * n_; }
  const CMatrix& unitary() const noexcept { return unitary_; }

  /// Metric via fs_metric pullback, analytic connection.
  MetricChart metric_chart() const;
  /// Same metric, connection from finite differences of the metric.
  MetricChart metric_chart_fd() const;

  ProjectivePoint point(const RVector& x) const;
  TangentVector tangent(const RVector& x, const RVector& velocity) const;

  /// Throws LeftChartDomain when the point lies on the hyperplane at infinity.
  RVector coordinates(const ProjectivePoint& p) const;
  std::pair<RVector, RVector> coordinates(const TangentVector& v) const;

  /// Multiplication by i on chart vectors.
  static RVector complex_structure(const RVector& v);

  static CVector to_complex(const RVector& x);
  static RVector to_real(const CVector& z);

 private:
  int n_;
  CMatrix unitary_;
};

/// Chart initial data (x0, v0) of the unit-speed geodesic of `frame`.
std::pair<RVector, RVector> initial_data(const CpnChart& chart, const GeodesicFrame& frame);

/// Norm of the velocity, at the leaf endpoint infinity_gamma in D, of the
/// variation of leaves induced by the parallel field at sigma; measured in the
/// Segre embedding (unit Frobenius norm representatives).
double divisor_limit_norm(const CpnChart& chart, const ParallelField& field, double sigma);

}  // namespace zoll
