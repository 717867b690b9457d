#pragma once

// Geodesics and Jacobi fields on a coordinate chart of a Riemannian manifold.
//
// Jacobi fields are stored both as coordinate vectors and with their covariant
// derivative D(iota)/dt = d(iota)/dt + Gamma(gamma', iota), which is the
// derivative that appears in the horizontal/vertical split of T(TM).

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace zoll {

using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

/// Gamma(x)(a, b)^k = Gamma^k_ij a^i b^j.
using ChristoffelContraction = std::function<RVector(const RVector& x, const RVector& a, const RVector& b)>;

struct MetricChart {
  int dimension = 0;
  std::function<RMatrix(const RVector&)> metric;
  /// Empty means the whole of R^m.
  std::function<bool(const RVector&)> in_domain;
  /// Optional analytic connection; central differences of `metric` otherwise.
  ChristoffelContraction christoffel;
  std::string description;
};

/// Step used for finite-difference Christoffel symbols.
inline constexpr double christoffel_fd_step = 1e-5;

RVector christoffel(const MetricChart& chart, const RVector& x, const RVector& a, const RVector& b);

/// Columns k = 0..m-1 hold (d Gamma / d x^k)(x)(v, v).
RMatrix christoffel_gradient(const MetricChart& chart, const RVector& x, const RVector& v);

/// Flat R^m, round S^2 in (polar, azimuth) and a flat square torus.
MetricChart flat_chart(int dimension);
MetricChart round_sphere_chart();
MetricChart flat_torus_chart();

struct GeodesicPath {
  MetricChart chart;
  double step = 0.0;
  std::vector<double> t;
  std::vector<RVector> x;
  std::vector<RVector> v;
  double max_energy_drift = 0.0;  ///< relative, over the whole path
  double richardson_error = 0.0;  ///< |end state(h) - end state(h/2)|

  double energy() const;
  double end_time() const { return t.back(); }
};

/// Fixed-step RK4.  The actual step is t_end / ceil(t_end / step).
/// Throws LeftChartDomain or StepTooLarge (relative energy drift > 1e-6).
GeodesicPath integrate_geodesic(const MetricChart& chart, const RVector& x0, const RVector& v0, double t_end,
                                double step);

/// Jacobi fields along a path; column j of each matrix is field j.
class JacobiSolution {
 public:
  const GeodesicPath& path() const noexcept { return *path_; }
  int field_count() const noexcept { return static_cast<int>(value_.front().cols()); }
  std::size_t size() const noexcept { return value_.size(); }

  double time(std::size_t i) const { return path_->t[i]; }
  const RMatrix& value(std::size_t i) const { return value_[i]; }
  /// Covariant derivative along the geodesic.
  const RMatrix& covariant(std::size_t i) const { return covariant_[i]; }
  const RMatrix& coordinate_derivative(std::size_t i) const { return rate_[i]; }

  struct State {
    RVector x;
    RVector v;
    RMatrix value;
    RMatrix covariant;
  };
  /// Integrates from the nearest sample at or below t; throws OutOfRange outside the path.
  State at(double t) const;

  /// Max |second difference - Jacobi right-hand side| over interior samples, relative to max |iota|.
  double max_residual() const { return max_residual_; }

  friend JacobiSolution jacobi_fields(const GeodesicPath&, const RMatrix&, const RMatrix&);

 private:
  std::shared_ptr<const GeodesicPath> path_;
  std::vector<RMatrix> value_;
  std::vector<RMatrix> covariant_;
  std::vector<RMatrix> rate_;
  double max_residual_ = 0.0;
};

/// Fields with iota(0) = columns of `initial`, covariant derivative iota'(0) = columns of `initial_rate`.
JacobiSolution jacobi_fields(const GeodesicPath& path, const RMatrix& initial, const RMatrix& initial_rate);
JacobiSolution jacobi_field(const GeodesicPath& path, const RVector& initial, const RVector& initial_rate);

/// g-orthonormal basis (m x (m-1)) of the complement of v at x.
RMatrix normal_basis(const MetricChart& chart, const RVector& x, const RVector& v);

struct ConjugatePoint {
  double t = 0.0;
  int multiplicity = 0;
  RMatrix kernel;  ///< initial-rate coefficients (w.r.t. the normal basis) of the vanishing fields
};

/// Multiplicity thresholds on singular values relative to the largest along the path.
inline constexpr double multiplicity_zero = 1e-6;
inline constexpr double multiplicity_ambiguous = 1e-4;

/// Conjugate points of gamma(0) in the open interval (t_begin, t_end).
/// Throws AmbiguousMultiplicity when a singular value falls in [1e-6, 1e-4].
std::vector<ConjugatePoint> conjugate_points(const GeodesicPath& path, double t_begin, double t_end);
std::vector<ConjugatePoint> conjugate_points(const GeodesicPath& path, const RMatrix& basis, double t_begin,
                                             double t_end);

/// Interior conjugate points on (0, period) counted with multiplicity.
int morse_index(const GeodesicPath& path, double period);

struct VanishingReport {
  int total = 0;
  std::vector<int> per_field;     ///< zeros on [0, period) of each normal field
  std::vector<double> zero_times;  ///< all zeros, t = 0 included
};

/// Total first-order vanishing count of the normal fields eta_i (eta_i(0) = 0,
/// eta_i'(0) = v_i) over one period, with the v_i adapted to the kernels of the
/// conjugate points.  Throws DegenerateZero for a zero of order > 1.
VanishingReport vanishing_order_total(const GeodesicPath& path, double period);

/// V(sigma + i tau) = (iota(sigma), tau * iota'(sigma)) for a single Jacobi field.
class ParallelField {
 public:
  explicit ParallelField(JacobiSolution field);

  struct Value {
    RVector horizontal;
    RVector vertical;
  };
  /// Throws OutOfRange when sigma lies outside the integrated interval.
  Value eval(double sigma, double tau) const;

  const JacobiSolution& field() const noexcept { return field_; }

 private:
  JacobiSolution field_;
};

}  // namespace zoll
