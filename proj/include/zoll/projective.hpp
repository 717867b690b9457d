#pragma once

// Fubini–Study geometry of CP^n in homogeneous coordinates.
//
// The metric is normalized so that every closed geodesic has length 2*pi:
// for unit representatives, g(u, v) = 4 Re<u_h, v_h> where u_h, v_h are the
// horizontal (Hermitian-orthogonal to the base) lifts.  Under this scaling
// holomorphic sectional curvature is 1 and totally real planes have 1/4.

#include <Eigen/Dense>

#include <complex>
#include <random>

namespace zoll {

using cd = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

namespace tol {
inline constexpr double algebraic = 1e-12;
inline constexpr double derived = 1e-9;
inline constexpr double finite_difference = 1e-6;
}  // namespace tol

/// <a, b> = sum_i a_i conj(b_i).
inline cd inner(const CVector& a, const CVector& b) { return b.dot(a); }

/// Multiplies `rep` by the unit scalar making its first nonzero coordinate real-positive.
CVector canonical_phase(const CVector& rep);

/// Multiplies `rep` by the unit scalar making <rep, ref> real-positive.
CVector align_phase(const CVector& rep, const CVector& ref);

class ProjectivePoint {
 public:
  /// Normalizes `rep` to unit length; throws InvalidArgument on a zero vector.
  explicit ProjectivePoint(const CVector& rep);

  const CVector& rep() const noexcept { return rep_; }
  int dimension() const noexcept { return static_cast<int>(rep_.size()) - 1; }
  CVector canonical() const { return canonical_phase(rep_); }

  /// Phase-invariant comparison: distance(other) <= tolerance.
  bool approx_equal(const ProjectivePoint& other, double tolerance = tol::derived) const;

  /// Fubini–Study distance under the 2*pi-period normalization (in [0, pi]).
  double distance(const ProjectivePoint& other) const;

 private:
  CVector rep_;
};

/// Tangent vector at `base`, represented by its horizontal lift relative to base.rep().
class TangentVector {
 public:
  /// Throws NotTangent when |<dir, base>| exceeds 1e-9 * max(1, |dir|); the
  /// residual component is then projected out.
  TangentVector(ProjectivePoint base, const CVector& dir);

  static TangentVector zero(const ProjectivePoint& base);

  const ProjectivePoint& base() const noexcept { return base_; }
  const CVector& dir() const noexcept { return dir_; }
  double norm() const;

  TangentVector scaled(double factor) const;

 private:
  ProjectivePoint base_;
  CVector dir_;
};

/// Orthonormal pair (z, w) describing gamma(t) = [cos(t/2) z + sin(t/2) w].
class GeodesicFrame {
 public:
  /// Validates |z| = |w| = 1 and <z, w> = 0 to 1e-9, then re-orthonormalizes.
  GeodesicFrame(const CVector& z, const CVector& w);

  const CVector& z() const noexcept { return z_; }
  const CVector& w() const noexcept { return w_; }
  int dimension() const noexcept { return static_cast<int>(z_.size()) - 1; }

 private:
  CVector z_;
  CVector w_;
};

ProjectivePoint geodesic_point(const GeodesicFrame& frame, double t);

/// Exact velocity of geodesic_point at time t (unit norm).
TangentVector geodesic_velocity(const GeodesicFrame& frame, double t);

/// Frame whose geodesic starts at v.base() with initial velocity v.
/// Throws NonUnitVector when |norm(v) - 1| > 1e-9.
GeodesicFrame frame_from_tangent(const TangentVector& v);

/// Riemannian inner product of two horizontal representatives at `at`.
/// Throws NotTangent when either fails orthogonality beyond 1e-9.
double fs_metric(const CVector& u, const CVector& v, const ProjectivePoint& at);

/// Base-point distance plus the gap between the lifts after aligning representatives.
double tangent_distance(const TangentVector& a, const TangentVector& b);

CVector random_unit_vector(int size, std::mt19937_64& rng);
ProjectivePoint random_point(int n, std::mt19937_64& rng);
GeodesicFrame random_frame(int n, std::mt19937_64& rng);
/// Random tangent vector with Fubini–Study norm `length`.
TangentVector random_tangent(int n, double length, std::mt19937_64& rng);

}  // namespace zoll
