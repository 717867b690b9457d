#include "zoll/adapted.hpp"

#include <algorithm>
#include <cmath>

#include "zoll/error.hpp"

namespace zoll {

namespace {

using cplx = std::complex<double>;

constexpr double singular_sigma_tol = 1e-10;
constexpr double breakdown_tol = 1e-10;
constexpr double ode_step = 1e-3;

// State (f, f') of f'' = -K f with the given initial data, integrated on the real line to sigma.
template <typename T>
struct Pair {
  T f;
  T df;
};

template <typename T, typename Rhs>
Pair<T> rk4(Pair<T> y, double length, Rhs rhs) {
  if (length == 0.0) return y;
  const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(length) / ode_step)));
  const double h = length / steps;
  for (int s = 0; s < steps; ++s) {
    const Pair<T> k1 = rhs(y);
    const Pair<T> k2 = rhs({y.f + 0.5 * h * k1.f, y.df + 0.5 * h * k1.df});
    const Pair<T> k3 = rhs({y.f + 0.5 * h * k2.f, y.df + 0.5 * h * k2.df});
    const Pair<T> k4 = rhs({y.f + h * k3.f, y.df + h * k3.df});
    y.f += h / 6.0 * (k1.f + 2.0 * k2.f + 2.0 * k3.f + k4.f);
    y.df += h / 6.0 * (k1.df + 2.0 * k2.df + 2.0 * k3.df + k4.df);
  }
  return y;
}

Pair<double> real_block(double K, Pair<double> start, double sigma) {
  return rk4(start, sigma, [K](const Pair<double>& y) { return Pair<double>{y.df, -K * y.f}; });
}

double min_singular_value(const RMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<RMatrix> svd(m);
  return svd.singularValues().minCoeff();
}

cplx closed_form_entry(double K, cplx s) {
  if (K == 0.0) return s;
  const cplx root = std::sqrt(cplx(K, 0.0));
  return std::tan(root * s) / root;
}

}  // namespace

BlockModel BlockModel::cpn(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "CP^n model needs n >= 1");
  BlockModel m;
  m.curvatures.push_back(1.0);
  for (int k = 0; k < 2 * n - 2; ++k) m.curvatures.push_back(0.25);
  m.name = "cpn(" + std::to_string(n) + ")";
  return m;
}

BlockModel BlockModel::sphere(int dim) {
  if (dim < 2) throw Error(ErrorCode::InvalidArgument, "sphere model needs dimension >= 2");
  BlockModel m;
  m.curvatures.assign(dim - 1, 1.0);
  m.name = "sphere(" + std::to_string(dim) + ")";
  return m;
}

BlockModel BlockModel::block(double curvature) {
  BlockModel m;
  m.curvatures = {curvature};
  m.name = "block(" + std::to_string(curvature) + ")";
  return m;
}

const char* to_string(PsiBackend backend) {
  return backend == PsiBackend::ClosedForm ? "closed-form" : "continued";
}

RMatrix psi_real(const BlockModel& model, double sigma) {
  const int k = model.normal_dimension();
  RMatrix psi = RMatrix::Zero(k, k);
  double det = 1.0;
  for (int i = 0; i < k; ++i) {
    const double K = model.curvatures[i];
    const Pair<double> zeta = real_block(K, {1.0, 0.0}, sigma);
    const Pair<double> eta = real_block(K, {0.0, 1.0}, sigma);
    det *= zeta.f;
    psi(i, i) = eta.f / zeta.f;
  }
  if (!(std::abs(det) >= singular_sigma_tol)) {
    throw Error(ErrorCode::SingularSigma, "zeta system is singular at sigma = " + std::to_string(sigma));
  }
  return psi;
}

CMatrixX psi_complex(const BlockModel& model, double sigma, double tau, PsiBackend backend) {
  const int k = model.normal_dimension();
  CMatrixX psi = CMatrixX::Zero(k, k);
  const cplx s(sigma, tau);
  if (backend == PsiBackend::ClosedForm) {
    for (int i = 0; i < k; ++i) psi(i, i) = closed_form_entry(model.curvatures[i], s);
    return psi;
  }

  // Along sigma + i t the holomorphic solutions satisfy d/dt = i d/ds.
  const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(tau) / ode_step)));
  const double h = tau / steps;
  for (int i = 0; i < k; ++i) {
    const double K = model.curvatures[i];
    const auto rhs = [K](const Pair<cplx>& y) { return Pair<cplx>{cplx(0, 1) * y.df, cplx(0, -K) * y.f}; };
    const Pair<double> z0 = real_block(K, {1.0, 0.0}, sigma);
    const Pair<double> e0 = real_block(K, {0.0, 1.0}, sigma);
    Pair<cplx> zeta{z0.f, z0.df};
    Pair<cplx> eta{e0.f, e0.df};
    double sign = 0.0;
    for (int step = 0; step < steps; ++step) {
      zeta = rk4(zeta, h, rhs);
      eta = rk4(eta, h, rhs);
      const cplx value = eta.f / zeta.f;
      const double im = value.imag();
      if (!std::isfinite(im) || std::abs(im) < breakdown_tol || (sign != 0.0 && im * sign < 0.0)) {
        throw Error(ErrorCode::ContinuationBreakdown,
                    "Im Psi degenerates at tau = " + std::to_string(h * (step + 1)) + " (sigma = " +
                        std::to_string(sigma) + ")");
      }
      if (sign == 0.0) sign = im > 0.0 ? 1.0 : -1.0;
    }
    psi(i, i) = eta.f / zeta.f;
  }
  return psi;
}

RMatrix complex_structure_matrix(const CMatrixX& psi) {
  const RMatrix R = psi.real();
  const RMatrix I = psi.imag();
  const int k = static_cast<int>(R.rows());
  Eigen::JacobiSVD<RMatrix> svd(I, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (k == 0 || !(svd.singularValues().minCoeff() >= breakdown_tol)) {
    throw Error(ErrorCode::NotInvertible, "Im Psi is not invertible");
  }
  const RMatrix B = svd.solve(RMatrix::Identity(k, k));
  RMatrix J(2 * k, 2 * k);
  J.topLeftCorner(k, k) = -(B * R).transpose();
  J.topRightCorner(k, k) = -(R * B * R + I).transpose();
  J.bottomLeftCorner(k, k) = B.transpose();
  J.bottomRightCorner(k, k) = (R * B).transpose();
  return J;
}

std::pair<RVector, RVector> complex_structure_J(const CMatrixX& psi, const RVector& a, const RVector& b) {
  const Eigen::Index k = psi.rows();
  if (a.size() != k || b.size() != k) throw Error(ErrorCode::InvalidArgument, "coefficient size mismatch");
  RVector ab(2 * k);
  ab << a, b;
  const RVector image = complex_structure_matrix(psi) * ab;
  return {image.head(k), image.tail(k)};
}

std::pair<RVector, RVector> complex_structure_J(const BlockModel& model, double sigma, double tau, const RVector& a,
                                                const RVector& b) {
  return complex_structure_J(psi_complex(model, sigma, tau), a, b);
}

TubeProbe tube_radius_probe(const BlockModel& model, const TubeProbeOptions& options) {
  if (options.tau_step <= 0.0 || options.tau_max <= 0.0 || options.sigma_points < 1) {
    throw Error(ErrorCode::InvalidArgument, "tube probe needs positive tau_max, tau_step and sigma grid");
  }
  std::vector<double> sigmas(options.sigma_points);
  for (int j = 0; j < options.sigma_points; ++j) sigmas[j] = 2.0 * M_PI * (j + 0.5) / options.sigma_points;

  const auto im_part = [&](double sigma, double tau) {
    return RMatrix(psi_complex(model, sigma, tau, options.backend).imag());
  };
  std::vector<double> reference(sigmas.size());
  for (std::size_t j = 0; j < sigmas.size(); ++j) {
    reference[j] = im_part(sigmas[j], options.tau_step).determinant() > 0.0 ? 1.0 : -1.0;
  }
  double smallest = std::numeric_limits<double>::infinity();
  // Im Psi invertible with the orientation it has near the real axis, at every grid sigma.
  const auto healthy = [&](double tau) {
    for (std::size_t j = 0; j < sigmas.size(); ++j) {
      RMatrix im;
      try {
        im = im_part(sigmas[j], tau);
      } catch (const Error&) {
        return false;
      }
      if (!im.allFinite()) return false;
      const double sv = min_singular_value(im);
      if (!(sv > breakdown_tol) || im.determinant() * reference[j] <= 0.0) return false;
      smallest = std::min(smallest, sv);
    }
    return true;
  };

  TubeProbe result;
  double good = 0.0;
  const int steps = static_cast<int>(std::ceil(options.tau_max / options.tau_step));
  for (int s = 1; s <= steps; ++s) {
    const double tau = std::min(options.tau_max, s * options.tau_step);
    if (healthy(tau)) {
      good = tau;
      continue;
    }
    double bad = tau;
    for (int it = 0; it < 60 && bad - good > 1e-12; ++it) {
      const double mid = 0.5 * (good + bad);
      (healthy(mid) ? good : bad) = mid;
    }
    result.radius = good;
    result.min_singular_value = smallest;
    return result;
  }
  result.entire = true;
  result.radius = options.tau_max;
  result.min_singular_value = smallest;
  return result;
}

JacobiSolution adapted_jacobi_basis(const GeodesicPath& path, const RMatrix& basis) {
  const Eigen::Index m = basis.rows();
  const Eigen::Index k = basis.cols();
  RMatrix initial = RMatrix::Zero(m, 2 * k);
  RMatrix rate = RMatrix::Zero(m, 2 * k);
  initial.leftCols(k) = basis;
  rate.rightCols(k) = basis;
  return jacobi_fields(path, initial, rate);
}

RMatrix psi_from_fields(const JacobiSolution& fields, std::size_t sample) {
  const int k = fields.field_count() / 2;
  const RMatrix& value = fields.value(sample);
  const RMatrix zeta = value.leftCols(k);
  const RMatrix eta = value.rightCols(k);
  Eigen::JacobiSVD<RMatrix> svd(zeta, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (!(svd.singularValues().minCoeff() >= singular_sigma_tol * std::max(1.0, svd.singularValues().maxCoeff()))) {
    throw Error(ErrorCode::SingularSigma, "zeta fields are dependent at this sample");
  }
  // eta_i = sum_j C_ij zeta_j, i.e. eta = zeta C^T.
  return RMatrix(svd.solve(eta)).transpose();
}

}  // namespace zoll
