#pragma once

// Finite-difference pluripotential checks in affine charts.

#include <functional>
#include <vector>

#include "zoll/model.hpp"

namespace zoll {

using ChartField = std::function<double(const CVector&)>;

struct LeviReport {
  CVector point;
  CMatrix form;                 ///< L_jk = d^2 f / dz_j d conj(z_k), Hermitian
  Eigen::VectorXd eigenvalues;  ///< ascending
  double asymmetry = 0.0;       ///< |L - L^*| before symmetrization
};

struct LeviOptions {
  double fd_step = 2.5e-3;
  /// Combine steps h and h/2 to cancel the O(h^2) term.
  bool richardson = true;
};

/// Throws NonFinite when the field cannot be evaluated on the stencil.
LeviReport levi_form(const ChartField& field, const CVector& point, const LeviOptions& options = {});

enum class TubeField { U0, Exhaustion };

struct HcmaResult {
  double residual = 0.0;  ///< |det L| / product of the largest dim - 1 eigenvalue magnitudes
  int rank = 0;           ///< eigenvalues above 1e-6 * lambda_max
  int dimension = 0;
  double min_eigenvalue_ratio = 0.0;  ///< lambda_min / lambda_max
};

inline constexpr double hcma_rank_threshold = 1e-6;

/// Levi form of u0 (or of N) in the largest-coordinate chart at p.
HcmaResult hcma_check(const ProductPoint& p, const LeviOptions& options = {}, TubeField field = TubeField::U0);

struct HarmonicityOptions {
  int sigma_points = 100;
  int tau_points = 50;
  double tau_min = 0.5;
  double tau_max = 3.0;
  double fd_step = 1e-3;
  bool squared = false;  ///< use u0^2 (negative control)
};

/// Max |flat Laplacian| of u0 o leaf_map over the (sigma, tau) grid; both signs of tau are sampled.
double leaf_harmonicity(const GeodesicFrame& frame, const HarmonicityOptions& options = {});

using LeafField = std::function<double(std::complex<double>)>;

struct CircleProfile {
  std::vector<double> radii;
  std::vector<double> F;
  bool convex = false;
  bool constant = false;
  double max_convexity_defect = 0.0;
  double total_variation = 0.0;
};

/// F(r) = max over |z| = r of f, with at least 720 angles per circle.  Radii must increase.
CircleProfile circle_max_profile(const LeafField& f, const std::vector<double>& radii, int angles = 720);

/// u0 on the leaf of `frame` in the chart z = e^{i(sigma + i tau)}.
LeafField leaf_u0(const GeodesicFrame& frame);

}  // namespace zoll
