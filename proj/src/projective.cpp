#include "zoll/projective.hpp"

#include <algorithm>
#include <cmath>

#include "zoll/error.hpp"

namespace zoll {

CVector canonical_phase(const CVector& rep) {
  const double scale = rep.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < rep.size(); ++i) {
    // Skip coordinates that are numerically zero relative to the largest.
    if (std::abs(rep[i]) > 1e-12 * scale) {
      return rep * (std::abs(rep[i]) / rep[i]);
    }
  }
  return rep;
}

CVector align_phase(const CVector& rep, const CVector& ref) {
  const cd overlap = inner(rep, ref);
  if (std::abs(overlap) == 0.0) return rep;
  return rep * (std::abs(overlap) / overlap);
}

ProjectivePoint::ProjectivePoint(const CVector& rep) {
  const double norm = rep.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw Error(ErrorCode::InvalidArgument, "projective point needs a finite nonzero representative");
  }
  rep_ = rep / norm;
}

bool ProjectivePoint::approx_equal(const ProjectivePoint& other, double tolerance) const {
  if (other.rep_.size() != rep_.size()) return false;
  return distance(other) <= tolerance;
}

double ProjectivePoint::distance(const ProjectivePoint& other) const {
  // The squared-sine form stays accurate for nearby points where acos does not.
  const cd overlap = inner(other.rep_, rep_);
  const CVector residual = other.rep_ - rep_ * overlap;
  return 2.0 * std::atan2(residual.norm(), std::abs(overlap));
}

TangentVector::TangentVector(ProjectivePoint base, const CVector& dir)
    : base_(std::move(base)), dir_(dir) {
  if (dir_.size() != base_.rep().size()) {
    throw Error(ErrorCode::InvalidArgument, "tangent direction has wrong size");
  }
  const cd overlap = inner(dir_, base_.rep());
  if (std::abs(overlap) > tol::derived * std::max(1.0, dir_.norm())) {
    throw Error(ErrorCode::NotTangent, "direction is not Hermitian-orthogonal to the base point");
  }
  dir_ -= overlap * base_.rep();
}

TangentVector TangentVector::zero(const ProjectivePoint& base) {
  return TangentVector(base, CVector::Zero(base.rep().size()));
}

double TangentVector::norm() const { return 2.0 * dir_.norm(); }

TangentVector TangentVector::scaled(double factor) const { return TangentVector(base_, dir_ * factor); }

GeodesicFrame::GeodesicFrame(const CVector& z, const CVector& w) {
  if (z.size() != w.size() || z.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "frame vectors must share a size of at least 2");
  }
  if (std::abs(z.norm() - 1.0) > tol::derived || std::abs(w.norm() - 1.0) > tol::derived ||
      std::abs(inner(z, w)) > tol::derived) {
    throw Error(ErrorCode::InvalidArgument, "frame (z, w) must be orthonormal");
  }
  z_ = z.normalized();
  w_ = w - inner(w, z_) * z_;
  w_.normalize();
}

ProjectivePoint geodesic_point(const GeodesicFrame& frame, double t) {
  return ProjectivePoint(std::cos(0.5 * t) * frame.z() + std::sin(0.5 * t) * frame.w());
}

TangentVector geodesic_velocity(const GeodesicFrame& frame, double t) {
  const double c = std::cos(0.5 * t);
  const double s = std::sin(0.5 * t);
  return TangentVector(ProjectivePoint(c * frame.z() + s * frame.w()), 0.5 * (c * frame.w() - s * frame.z()));
}

GeodesicFrame frame_from_tangent(const TangentVector& v) {
  const double length = v.norm();
  if (std::abs(length - 1.0) > tol::derived) {
    throw Error(ErrorCode::NonUnitVector, "frame_from_tangent needs a unit tangent vector");
  }
  return GeodesicFrame(v.base().rep(), v.dir() / v.dir().norm());
}

double fs_metric(const CVector& u, const CVector& v, const ProjectivePoint& at) {
  const CVector& p = at.rep();
  if (std::abs(inner(u, p)) > tol::derived * std::max(1.0, u.norm()) ||
      std::abs(inner(v, p)) > tol::derived * std::max(1.0, v.norm())) {
    throw Error(ErrorCode::NotTangent, "fs_metric arguments must be horizontal at the base point");
  }
  return 4.0 * inner(u, v).real();
}

CVector random_unit_vector(int size, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  CVector v(size);
  for (int i = 0; i < size; ++i) v[i] = cd(normal(rng), normal(rng));
  return v.normalized();
}

ProjectivePoint random_point(int n, std::mt19937_64& rng) { return ProjectivePoint(random_unit_vector(n + 1, rng)); }

GeodesicFrame random_frame(int n, std::mt19937_64& rng) {
  const CVector z = random_unit_vector(n + 1, rng);
  CVector w = random_unit_vector(n + 1, rng);
  w -= inner(w, z) * z;
  return GeodesicFrame(z, w.normalized());
}

TangentVector random_tangent(int n, double length, std::mt19937_64& rng) {
  const GeodesicFrame frame = random_frame(n, rng);
  return TangentVector(ProjectivePoint(frame.z()), 0.5 * length * frame.w());
}

double tangent_distance(const TangentVector& a, const TangentVector& b) {
  const cd overlap = inner(a.base().rep(), b.base().rep());
  const cd phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : cd(1.0);
  return a.base().distance(b.base()) + 2.0 * (a.dir() - phase * b.dir()).norm();
}

}  // namespace zoll
