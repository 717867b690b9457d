#include "zoll/model.hpp"

#include <cmath>

#include "zoll/error.hpp"

namespace zoll {

namespace {

constexpr cd I{0.0, 1.0};

// cos(s/2), sin(s/2) for s = sigma + i tau, both divided by exp(|tau| / 2).
std::pair<cd, cd> scaled_half_angle(double sigma, double tau) {
  const cd forward = std::exp(cd(0.0, 0.5 * sigma));
  const cd backward = std::exp(cd(0.0, -0.5 * sigma));
  if (tau >= 0.0) {
    const double decay = std::exp(-tau);
    return {0.5 * (forward * decay + backward), (forward * decay - backward) / (2.0 * I)};
  }
  const double decay = std::exp(tau);
  return {0.5 * (forward + backward * decay), (forward - backward * decay) / (2.0 * I)};
}

CVector conj(const CVector& v) { return v.conjugate(); }

int leading_index(const CVector& v) {
  const double scale = v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > 1e-12 * scale) return static_cast<int>(i);
  }
  return 0;
}

}  // namespace

ProductPoint::ProductPoint(ProjectivePoint first, ProjectivePoint second)
    : first_(std::move(first)), second_(std::move(second)) {
  if (first_.rep().size() != second_.rep().size()) {
    throw Error(ErrorCode::InvalidArgument, "product point factors must have equal dimension");
  }
}

ProductPoint::ProductPoint(const CVector& first, const CVector& second)
    : ProductPoint(ProjectivePoint(first), ProjectivePoint(second)) {}

cd ProductPoint::pairing() const { return first_.rep().cwiseProduct(second_.rep()).sum(); }

bool ProductPoint::on_divisor(double tolerance) const { return std::abs(pairing()) < tolerance; }

bool ProductPoint::approx_equal(const ProductPoint& other, double tolerance) const {
  return first_.approx_equal(other.first_, tolerance) && second_.approx_equal(other.second_, tolerance);
}

ProductPoint totally_real_embedding(const ProjectivePoint& p) {
  return ProductPoint(p, ProjectivePoint(conj(p.rep())));
}

ProductPoint leaf_map(const GeodesicFrame& frame, LeafCoordinate c) {
  const auto [cs, sn] = scaled_half_angle(c.sigma, c.tau);
  const CVector& z = frame.z();
  const CVector& w = frame.w();
  return ProductPoint(cs * z + sn * w, cs * conj(z) + sn * conj(w));
}

ProductPoint leaf_infinity(const GeodesicFrame& frame) {
  return ProductPoint(frame.z() + I * frame.w(), conj(frame.z()) + I * conj(frame.w()));
}

ProductPoint leaf_zero(const GeodesicFrame& frame) {
  return ProductPoint(frame.z() - I * frame.w(), conj(frame.z()) - I * conj(frame.w()));
}

ProductPoint embed_tangent(const TangentVector& v) {
  const double length = v.norm();
  if (length == 0.0) return totally_real_embedding(v.base());
  return leaf_map(frame_from_tangent(v.scaled(1.0 / length)), {0.0, length});
}

double exhaustion_excess(const ProductPoint& p) {
  const cd pair = p.pairing();
  if (std::abs(pair) < tol::algebraic) return Infinite;
  const CVector& Z = p.first().rep();
  const CVector& W = p.second().rep();
  // |Z|^2 |W|^2 - |sum Z_a W_a|^2 = sum_{i<j} |Z_i conj(W_j) - Z_j conj(W_i)|^2.
  double numerator = 0.0;
  for (Eigen::Index i = 0; i < Z.size(); ++i) {
    for (Eigen::Index j = i + 1; j < Z.size(); ++j) numerator += std::norm(Z[i] * std::conj(W[j]) - Z[j] * std::conj(W[i]));
  }
  return numerator / std::norm(pair);
}

double exhaustion_N(const ProductPoint& p) {
  const double excess = exhaustion_excess(p);
  return std::isinf(excess) ? Infinite : 1.0 + excess;
}

double u0(const ProductPoint& p) {
  const double excess = exhaustion_excess(p);
  return std::isinf(excess) ? Infinite : std::asinh(std::sqrt(excess));
}

double kahler_potential(const ProductPoint& p) {
  const double excess = exhaustion_excess(p);
  return std::isinf(excess) ? Infinite : std::log(2.0) + std::log1p(excess);
}

namespace {

struct GaugedPair {
  CVector z;
  CVector w;
};

// Representatives with sum z_a w_a = 1 and |z| = |w|, leading coordinate of z real-positive.
GaugedPair gauge_off_divisor(const ProductPoint& p) {
  const CVector& Z = p.first().rep();
  const CVector& W = p.second().rep();
  const cd pair = p.pairing();
  const double modulus = 1.0 / std::sqrt(std::abs(pair));
  const int lead = leading_index(Z);
  const cd phase = std::abs(Z[lead]) / Z[lead];
  const cd lambda = modulus * phase;
  const cd mu = 1.0 / (pair * lambda);
  return {lambda * Z, mu * W};
}

}  // namespace

InverseImage invert_embedding(const ProductPoint& p) {
  if (p.on_divisor()) {
    const double root2 = std::sqrt(2.0);
    const CVector z = root2 * canonical_phase(p.first().rep());
    const CVector w = root2 * canonical_phase(p.second().rep());
    const CVector base = 0.5 * (z + conj(w));
    const CVector dir = (z - conj(w)) / (2.0 * I);
    return DivisorGeodesic{GeodesicFrame(base.normalized(), dir.normalized())};
  }
  const GaugedPair g = gauge_off_divisor(p);
  const CVector base = g.z + conj(g.w);
  const CVector diff = g.z - conj(g.w);
  const ProjectivePoint point(base);
  const double half = diff.norm() / 2.0;
  if (half < 1e-15) return TangentVector::zero(point);
  // |z - conj w| / 2 = sinh(tau / 2) on the leaf through gamma.
  const double length = 2.0 * std::asinh(half);
  const CVector unit = diff / (I * diff.norm());
  return TangentVector(point, 0.5 * length * unit);
}

double inverse_length_constant(const ProductPoint& p) {
  if (p.on_divisor()) {
    throw Error(ErrorCode::InvalidArgument, "length constant is defined off the divisor only");
  }
  const GaugedPair g = gauge_off_divisor(p);
  const double rho = (g.z + conj(g.w)).norm() / 2.0;
  const auto image = invert_embedding(p);
  const double length = std::get<TangentVector>(image).norm();
  return length / std::acosh(rho);
}

ProductPoint involution_N(const ProductPoint& p) {
  return ProductPoint(conj(p.second().rep()), conj(p.first().rep()));
}

SegrePoint segre(const ProductPoint& p) {
  CMatrix zeta = p.first().rep() * p.second().rep().transpose();
  zeta /= zeta.norm();
  for (Eigen::Index i = 0; i < zeta.rows(); ++i) {
    for (Eigen::Index j = 0; j < zeta.cols(); ++j) {
      if (std::abs(zeta(i, j)) > 1e-12) {
        zeta *= std::abs(zeta(i, j)) / zeta(i, j);
        return {zeta};
      }
    }
  }
  return {zeta};
}

double exhaustion_from_segre(const SegrePoint& s) {
  const double trace = std::norm(s.zeta.trace());
  if (std::sqrt(trace) < tol::algebraic * s.zeta.norm()) return Infinite;
  return s.zeta.squaredNorm() / trace;
}

AffineChart chart_for(const ProductPoint& p) {
  Eigen::Index a = 0;
  Eigen::Index b = 0;
  p.first().rep().cwiseAbs().maxCoeff(&a);
  p.second().rep().cwiseAbs().maxCoeff(&b);
  return {static_cast<int>(a), static_cast<int>(b)};
}

CVector chart_coordinates(const CVector& Z, const CVector& W, const AffineChart& chart) {
  const Eigen::Index n = Z.size() - 1;
  CVector coords(2 * n);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i <= n; ++i) {
    if (i != chart.first) coords[k++] = Z[i] / Z[chart.first];
  }
  for (Eigen::Index j = 0; j <= n; ++j) {
    if (j != chart.second) coords[k++] = W[j] / W[chart.second];
  }
  return coords;
}

CVector chart_coordinates(const ProductPoint& p, const AffineChart& chart) {
  return chart_coordinates(p.first().rep(), p.second().rep(), chart);
}

ProductPoint point_from_chart(const CVector& coords, const AffineChart& chart, int n) {
  if (coords.size() != 2 * n) throw Error(ErrorCode::InvalidArgument, "chart coordinates must have length 2n");
  CVector Z(n + 1);
  CVector W(n + 1);
  Eigen::Index k = 0;
  for (int i = 0; i <= n; ++i) Z[i] = (i == chart.first) ? cd(1.0) : coords[k++];
  for (int j = 0; j <= n; ++j) W[j] = (j == chart.second) ? cd(1.0) : coords[k++];
  return ProductPoint(Z, W);
}

CMatrix product_fs_metric(const CVector& coords) {
  const Eigen::Index n = coords.size() / 2;
  CMatrix h = CMatrix::Zero(2 * n, 2 * n);
  for (Eigen::Index block = 0; block < 2; ++block) {
    const CVector z = coords.segment(block * n, n);
    const double q = 1.0 + z.squaredNorm();
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index k = 0; k < n; ++k) {
        h(block * n + j, block * n + k) = (j == k ? 1.0 / q : 0.0) - std::conj(z[j]) * z[k] / (q * q);
      }
    }
  }
  return h;
}

nlohmann::json vector_to_json(const CVector& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v[i].real(), v[i].imag()});
  return out;
}

CVector vector_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw Error(ErrorCode::InvalidArgument, "expected an array of [re, im] pairs");
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& entry = j[i];
    if (!entry.is_array() || entry.size() != 2) {
      throw Error(ErrorCode::InvalidArgument, "complex entries must be [re, im] pairs");
    }
    v[static_cast<Eigen::Index>(i)] = cd(entry[0].get<double>(), entry[1].get<double>());
  }
  return v;
}

nlohmann::json to_json(const ProductPoint& p) {
  return {{"first", vector_to_json(p.first().canonical())}, {"second", vector_to_json(p.second().canonical())}};
}

ProductPoint product_point_from_json(const nlohmann::json& j) {
  return ProductPoint(vector_from_json(j.at("first")), vector_from_json(j.at("second")));
}

nlohmann::json to_json(const GeodesicFrame& f) {
  return {{"z", vector_to_json(f.z())}, {"w", vector_to_json(f.w())}};
}

GeodesicFrame geodesic_frame_from_json(const nlohmann::json& j) {
  return GeodesicFrame(vector_from_json(j.at("z")), vector_from_json(j.at("w")));
}

}  // namespace zoll
