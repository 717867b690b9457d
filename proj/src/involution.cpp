#include "zoll/involution.hpp"

#include <cmath>

#include "zoll/error.hpp"

namespace zoll {

namespace {

CMatrix normalized(const AntiholMap& m) {
  const InvolutionTest t = is_involution(m);
  if (!t.involution) throw Error(ErrorCode::NotInvolution, "conj(A) A is not a multiple of the identity");
  return m.matrix() / std::sqrt(std::abs(t.c));
}

}  // namespace

AntiholMap::AntiholMap(CMatrix A) : A_(std::move(A)) {
  if (A_.rows() != A_.cols() || A_.rows() < 2) throw Error(ErrorCode::InvalidArgument, "A must be square of size >= 2");
  Eigen::JacobiSVD<CMatrix> svd(A_);
  const auto& s = svd.singularValues();
  if (!(s.minCoeff() > 1e-12 * s.maxCoeff())) throw Error(ErrorCode::InvalidArgument, "A must be invertible");
  condition_ = s.maxCoeff() / s.minCoeff();
}

ProjectivePoint AntiholMap::apply(const ProjectivePoint& p) const { return ProjectivePoint((A_ * p.rep()).conjugate()); }

AntiholMap AntiholMap::conjugated(const CMatrix& B, cd unit) const {
  return AntiholMap(unit * B.conjugate().inverse() * A_ * B);
}

InvolutionTest is_involution(const AntiholMap& m) {
  const CMatrix square = m.matrix().conjugate() * m.matrix();
  InvolutionTest t;
  t.c = square.trace() / static_cast<double>(square.rows());
  t.residual = (square - t.c * CMatrix::Identity(square.rows(), square.cols())).norm() / square.norm();
  t.involution = t.residual < involution_tol;
  return t;
}

const char* to_string(InvolutionType type) { return type == InvolutionType::Real ? "real" : "quaternionic"; }

InvolutionType involution_type(const AntiholMap& m) {
  const InvolutionTest t = is_involution(m);
  if (!t.involution) throw Error(ErrorCode::NotInvolution, "conj(A) A is not a multiple of the identity");
  // conj(A) A = c Id commutes with A, so c = conj(c) is real.
  const cd unit = t.c / std::abs(t.c);
  if (std::abs(unit.imag()) > 1e-9) throw Error(ErrorCode::NotInvolution, "conj(A) A has a non-real scalar");
  if (unit.real() > 0.0) return InvolutionType::Real;
  if ((m.n() + 1) % 2 != 0) {
    throw Error(ErrorCode::InconsistentSignature, "c = -1 needs an even number of homogeneous coordinates");
  }
  return InvolutionType::Quaternionic;
}

double fixed_point_residual(const AntiholMap& m, const CVector& v) {
  const CVector tv = (normalized(m) * v).conjugate();
  return (tv - inner(tv, v) * v).norm();
}

FixedPointSample fixed_points_sample(const AntiholMap& m, int samples, std::mt19937_64& rng, int keep) {
  const CMatrix A = normalized(m);
  const int size = static_cast<int>(A.rows());
  const auto T = [&A](const CVector& v) { return CVector((A * v).conjugate()); };
  const auto residual = [&T](const CVector& v) {
    const CVector tv = T(v);
    return (tv - inner(tv, v) * v).norm();
  };
  FixedPointSample out;
  out.trials = samples;
  out.min_residual = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    CVector v = random_unit_vector(size, rng);
    // v + T v is fixed by T when T^2 = Id; repeat to damp rounding.
    for (int it = 0; it < 3; ++it) {
      const CVector next = v + T(v);
      if (next.norm() < 1e-8) break;
      v = next.normalized();
    }
    const double r = residual(v);
    out.min_residual = std::min(out.min_residual, r);
    if (r < fixed_point_accept) {
      ++out.count;
      out.max_fixed_residual = std::max(out.max_fixed_residual, r);
      if (static_cast<int>(out.representatives.size()) < keep) out.representatives.emplace_back(v);
    }
  }
  return out;
}

ProductFixedSet product_involution_fixed_set(const AntiholMap& first, const AntiholMap& second) {
  if (first.n() != second.n()) throw Error(ErrorCode::InvalidArgument, "both factors must act on the same CP^n");
  ProductFixedSet r;
  r.first = involution_type(first);
  r.second = involution_type(second);
  const int n = first.n();
  r.empty = r.first == InvolutionType::Quaternionic || r.second == InvolutionType::Quaternionic;
  if (!r.empty) {
    const CochainComplex product = tensor(rp_cochains(n), rp_cochains(n));
    r.cohomology = cochain_cohomology(product.dims, product.differentials);
  }
  const CohomologyTable target = cpn_cohomology(n);
  r.contradiction = r.cohomology.size() != target.size();
  for (std::size_t j = 0; !r.contradiction && j < target.size(); ++j) r.contradiction = r.cohomology[j] != target[j];
  return r;
}

CMatrix standard_real_structure(int n) { return CMatrix::Identity(n + 1, n + 1); }

CMatrix standard_quaternionic_structure(int n) {
  if ((n + 1) % 2 != 0) throw Error(ErrorCode::InvalidArgument, "quaternionic structure needs n + 1 even");
  const int m = (n + 1) / 2;
  CMatrix J = CMatrix::Zero(n + 1, n + 1);
  J.topRightCorner(m, m) = -CMatrix::Identity(m, m);
  J.bottomLeftCorner(m, m) = CMatrix::Identity(m, m);
  return J;
}

CMatrix random_invertible(int size, std::mt19937_64& rng, double max_condition) {
  std::normal_distribution<double> normal;
  while (true) {
    CMatrix B(size, size);
    for (int i = 0; i < size; ++i)
      for (int j = 0; j < size; ++j) B(i, j) = cd(normal(rng), normal(rng));
    Eigen::JacobiSVD<CMatrix> svd(B);
    const auto& s = svd.singularValues();
    if (s.maxCoeff() < max_condition * s.minCoeff()) return B;
  }
}

}  // namespace zoll
