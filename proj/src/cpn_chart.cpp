#include "zoll/cpn_chart.hpp"

#include <cmath>

#include "zoll/error.hpp"
#include "zoll/model.hpp"

namespace zoll {

namespace {

constexpr double chart_radius_limit = 1e6;

CVector homogeneous(const CMatrix& unitary, const CVector& z) {
  CVector affine(z.size() + 1);
  affine[0] = 1.0;
  affine.tail(z.size()) = z;
  return unitary.adjoint() * affine;
}

}  // namespace

CpnChart::CpnChart(int n) : CpnChart(n, CMatrix::Identity(n + 1, n + 1)) {}

CpnChart::CpnChart(int n, CMatrix unitary) : n_(n), unitary_(std::move(unitary)) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "CP^n chart needs n >= 1");
  if (unitary_.rows() != n + 1 || unitary_.cols() != n + 1 ||
      (unitary_ * unitary_.adjoint() - CMatrix::Identity(n + 1, n + 1)).norm() > 1e-10) {
    throw Error(ErrorCode::InvalidArgument, "chart rotation must be a unitary (n+1)x(n+1) matrix");
  }
}

CpnChart CpnChart::adapted_to(const GeodesicFrame& frame) {
  // u = (z - i w) / sqrt(2) has |<gamma(t), u>| = 1/sqrt(2) along the whole geodesic.
  const int n = frame.dimension();
  const CVector u = (frame.z() - cd(0.0, 1.0) * frame.w()) / std::sqrt(2.0);
  CMatrix seed = CMatrix::Identity(n + 1, n + 1);
  seed.col(0) = u;
  // Make the seed invertible if u is close to e_0.
  Eigen::Index weakest = 0;
  u.tail(n).cwiseAbs().minCoeff(&weakest);
  seed.col(1 + weakest) = CVector::Unit(n + 1, 0);
  Eigen::HouseholderQR<CMatrix> qr(seed);
  CMatrix q = qr.householderQ();
  // First column of q is u up to phase; (q^* Z)_0 = <Z, q_0>.
  return CpnChart(n, q.adjoint());
}

CVector CpnChart::to_complex(const RVector& x) {
  CVector z(x.size() / 2);
  for (Eigen::Index k = 0; k < z.size(); ++k) z[k] = cd(x[2 * k], x[2 * k + 1]);
  return z;
}

RVector CpnChart::to_real(const CVector& z) {
  RVector x(2 * z.size());
  for (Eigen::Index k = 0; k < z.size(); ++k) {
    x[2 * k] = z[k].real();
    x[2 * k + 1] = z[k].imag();
  }
  return x;
}

RVector CpnChart::complex_structure(const RVector& v) {
  return to_real(cd(0.0, 1.0) * to_complex(v));
}

ProjectivePoint CpnChart::point(const RVector& x) const { return ProjectivePoint(homogeneous(unitary_, to_complex(x))); }

TangentVector CpnChart::tangent(const RVector& x, const RVector& velocity) const {
  const CVector rep = homogeneous(unitary_, to_complex(x));
  const double norm = rep.norm();
  const ProjectivePoint p(rep);
  CVector d(n_ + 1);
  d[0] = 0.0;
  d.tail(n_) = to_complex(velocity);
  CVector lifted = unitary_.adjoint() * d / norm;
  lifted -= inner(lifted, p.rep()) * p.rep();
  return TangentVector(p, lifted);
}

RVector CpnChart::coordinates(const ProjectivePoint& p) const {
  const CVector rotated = unitary_ * p.rep();
  if (std::abs(rotated[0]) * chart_radius_limit < rotated.norm()) {
    throw Error(ErrorCode::LeftChartDomain, "point outside the affine chart");
  }
  return to_real(rotated.tail(n_) / rotated[0]);
}

std::pair<RVector, RVector> CpnChart::coordinates(const TangentVector& v) const {
  const RVector x = coordinates(v.base());
  const CVector b = unitary_ * v.base().rep();
  const CVector d = unitary_ * v.dir();
  // Derivative of the affine coordinates b_k / b_0 along b + t d.
  const CVector velocity = (d.tail(n_) * b[0] - b.tail(n_) * d[0]) / (b[0] * b[0]);
  return {x, to_real(velocity)};
}

MetricChart CpnChart::metric_chart() const {
  MetricChart chart;
  chart.dimension = 2 * n_;
  const CpnChart self = *this;
  chart.metric = [self](const RVector& x) {
    const int m = self.real_dimension();
    std::vector<CVector> lifts;
    lifts.reserve(m);
    const ProjectivePoint p = self.point(x);
    for (int a = 0; a < m; ++a) lifts.push_back(self.tangent(x, RVector::Unit(m, a)).dir());
    RMatrix g(m, m);
    for (int a = 0; a < m; ++a) {
      for (int b = a; b < m; ++b) g(a, b) = g(b, a) = fs_metric(lifts[a], lifts[b], p);
    }
    return g;
  };
  chart.in_domain = [](const RVector& x) { return x.allFinite() && x.norm() < chart_radius_limit; };
  chart.christoffel = [](const RVector& x, const RVector& a, const RVector& b) {
    const CVector z = to_complex(x);
    const CVector A = to_complex(a);
    const CVector B = to_complex(b);
    const cd bz = z.dot(B);  // sum conj(z_j) B_j
    const cd az = z.dot(A);
    return to_real(-(A * bz + B * az) / (1.0 + z.squaredNorm()));
  };
  chart.description = "CP^" + std::to_string(n_) + " affine chart (Fubini-Study, period 2 pi)";
  return chart;
}

MetricChart CpnChart::metric_chart_fd() const {
  MetricChart chart = metric_chart();
  chart.christoffel = nullptr;
  return chart;
}

std::pair<RVector, RVector> initial_data(const CpnChart& chart, const GeodesicFrame& frame) {
  return chart.coordinates(geodesic_velocity(frame, 0.0));
}

double divisor_limit_norm(const CpnChart& chart, const ParallelField& field, double sigma) {
  const auto state = field.field().at(sigma);
  const MetricChart metric = chart.metric_chart();
  const RVector iota = state.value.col(0);
  const RVector rate = state.covariant.col(0) - christoffel(metric, state.x, state.v, iota);

  const auto endpoint = [&](double eps) {
    const TangentVector v = chart.tangent(state.x + eps * iota, state.v + eps * rate);
    const TangentVector unit = v.scaled(1.0 / v.norm());
    return segre(leaf_infinity(frame_from_tangent(unit))).zeta;
  };
  const double eps = 1e-5;
  const CMatrix centre = endpoint(0.0);
  const auto aligned = [&centre](CMatrix m) {
    const cd overlap = (centre.adjoint() * m).trace();
    return CMatrix(m * (std::abs(overlap) / overlap));
  };
  CMatrix velocity = (aligned(endpoint(eps)) - aligned(endpoint(-eps))) / (2.0 * eps);
  // Remove the component along the point itself (projective tangent space).
  velocity -= (centre.adjoint() * velocity).trace() * centre;
  return velocity.norm();
}

}  // namespace zoll
