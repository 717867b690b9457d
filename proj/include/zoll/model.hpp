#pragma once

// The compactified tube X = CP^n x CP^n of the tangent bundle of CP^n.
//
// A tangent vector tau * gamma'(sigma) sits at the point
//   [cos(s/2) z + sin(s/2) w] x [cos(s/2) conj(z) + sin(s/2) conj(w)],  s = sigma + i tau,
// and the leaf endpoints tau -> +-inf fill out the divisor D = { sum Z_a W_a = 0 }.

#include <limits>
#include <variant>

#include "json.hpp"
#include "zoll/projective.hpp"

namespace zoll {

/// Returned by the exhaustion, u0 and the potential on the divisor.
inline constexpr double Infinite = std::numeric_limits<double>::infinity();

class ProductPoint {
 public:
  ProductPoint(ProjectivePoint first, ProjectivePoint second);
  ProductPoint(const CVector& first, const CVector& second);

  const ProjectivePoint& first() const noexcept { return first_; }
  const ProjectivePoint& second() const noexcept { return second_; }
  int dimension() const noexcept { return first_.dimension(); }

  /// sum_a Z_a W_a for the stored unit representatives; defined up to phase.
  cd pairing() const;
  bool on_divisor(double tolerance = tol::algebraic) const;
  bool approx_equal(const ProductPoint& other, double tolerance = tol::derived) const;

 private:
  ProjectivePoint first_;
  ProjectivePoint second_;
};

struct LeafCoordinate {
  double sigma = 0.0;
  double tau = 0.0;  ///< may be +-infinity for the leaf endpoints on D
};

struct SegrePoint {
  CMatrix zeta;  ///< rank one, unit Frobenius norm, canonical phase
};

/// Totally real embedding [z] -> [z] x [conj z].
ProductPoint totally_real_embedding(const ProjectivePoint& p);

/// Holomorphic leaf through the geodesic of `frame`; computed in a rescaled
/// form so that any finite or infinite tau is representable.
ProductPoint leaf_map(const GeodesicFrame& frame, LeafCoordinate c);

/// Leaf endpoints: infinity_gamma (tau -> +inf) and zero_gamma (tau -> -inf).
ProductPoint leaf_infinity(const GeodesicFrame& frame);
ProductPoint leaf_zero(const GeodesicFrame& frame);

ProductPoint embed_tangent(const TangentVector& v);

/// N - 1 computed without cancellation (Lagrange identity); Infinite on D.
double exhaustion_excess(const ProductPoint& p);
/// N = |Z|^2 |W|^2 / |sum Z_a W_a|^2 in [1, inf]; Infinite on D.
double exhaustion_N(const ProductPoint& p);
/// sqrt(2E) = |tau|, evaluated as asinh(sqrt(N - 1)) which equals acosh(2N - 1) / 2.
double u0(const ProductPoint& p);
/// log(2N); Infinite on D.
double kahler_potential(const ProductPoint& p);

/// Divisor branch of the inverse correspondence: the oriented closed
/// geodesic whose leaf has the point as an endpoint.
struct DivisorGeodesic {
  GeodesicFrame frame;
};

using InverseImage = std::variant<TangentVector, DivisorGeodesic>;

/// Inverse of embed_tangent off D (representatives gauged to sum z_a w_a = 1,
/// |z| = |w|, leading coordinate of z real-positive); on D returns the geodesic.
InverseImage invert_embedding(const ProductPoint& p);

/// Ratio |v| / acosh(rho) with rho = |z + conj w| / 2 in the gauge above.
/// The forward map fixes this constant; it comes out as 2.
double inverse_length_constant(const ProductPoint& p);

/// [Z] x [W] -> [conj W] x [conj Z].
ProductPoint involution_N(const ProductPoint& p);

SegrePoint segre(const ProductPoint& p);
/// sum |zeta_ij|^2 / |trace zeta|^2; Infinite when the trace vanishes.
double exhaustion_from_segre(const SegrePoint& s);

/// Affine patch of CP^n x CP^n with Z_first = 1 and W_second = 1.
struct AffineChart {
  int first = 0;
  int second = 0;
  bool operator==(const AffineChart&) const = default;
};

/// Patch selected by the largest homogeneous coordinate of each factor.
AffineChart chart_for(const ProductPoint& p);
/// Complex coordinates (z_i / z_first, i != first; w_j / w_second, j != second), length 2n.
CVector chart_coordinates(const ProductPoint& p, const AffineChart& chart);
CVector chart_coordinates(const CVector& Z, const CVector& W, const AffineChart& chart);
ProductPoint point_from_chart(const CVector& coords, const AffineChart& chart, int n);

/// Hermitian matrix of i ddbar [log(1 + |z|^2) + log(1 + |w|^2)] in chart coordinates.
CMatrix product_fs_metric(const CVector& coords);

/// Complex vectors serialize as arrays of [re, im] pairs.
nlohmann::json vector_to_json(const CVector& v);
CVector vector_from_json(const nlohmann::json& j);
/// {"first": [...], "second": [...]}
nlohmann::json to_json(const ProductPoint& p);
ProductPoint product_point_from_json(const nlohmann::json& j);
/// {"z": [...], "w": [...]}
nlohmann::json to_json(const GeodesicFrame& f);
GeodesicFrame geodesic_frame_from_json(const nlohmann::json& j);

}  // namespace zoll
