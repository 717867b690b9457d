#pragma once

// Degrees of line bundles restricted to a compactified leaf C = P^1.
//
// A bundle is described by a local weight phi with |s|^2 = |f|^2 e^{-phi}; the
// degree is (1/4 pi) times the integral of the flat Laplacian of phi.  The leaf is
// covered by the cylinder |tau| <= log(1/r) in s = sigma + i tau and two discs of
// radius r in q = e^{is} (around infinity_gamma) and q' = e^{-is} (around 0_gamma).

#include <functional>

#include "zoll/model.hpp"

namespace zoll {

/// Holomorphic representatives of the leaf point and of its derivative in the local parameter.
struct LeafJet {
  CVector Z, W;
  CVector dZ, dW;
};

using LineWeight = std::function<double(const LeafJet&)>;
/// Weight generator: called once per stencil with the jet at its centre, returns the weight to use on it.
using WeightFactory = std::function<LineWeight(const LeafJet& centre)>;

struct DegreeOptions {
  double cap_radius = 0.1;
  double sigma_offset = 0.0;
  int resolution = 64;  ///< sigma points; other grids scale with it
  double fd_step = 1e-3;
};

struct DegreeResult {
  double value = 0.0;
  int degree = 0;
  double rounding_error = 0.0;
  double quadrature_error = 0.0;  ///< |value - value at half resolution|
};

inline constexpr double degree_tolerance = 0.05;

/// Throws PoorConvergence when the quadrature error or the rounding error exceeds 0.05.
DegreeResult restricted_degree(const WeightFactory& weight, const GeodesicFrame& frame, const DegreeOptions& options = {});

/// O(a, b): a log|Z|^2 + b log|W|^2.
WeightFactory bidegree_weight(int a, int b);
/// O(D) through the Segre embedding: log of the squared Frobenius norm of Z W^T.
WeightFactory divisor_weight();
/// det T X: -log det of the product Fubini-Study metric in the chart chosen at the stencil centre.
WeightFactory anticanonical_weight();
/// T C: -log h(c', c') for the leaf velocity c'.
WeightFactory leaf_tangent_weight();
/// det of the normal bundle: anticanonical minus leaf tangent.
WeightFactory normal_determinant_weight();

/// The leaf jet at s = sigma + i tau on the cylinder.
LeafJet cylinder_jet(const GeodesicFrame& frame, std::complex<double> s);

}  // namespace zoll
