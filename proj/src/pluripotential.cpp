#include "zoll/pluripotential.hpp"

#include <algorithm>
#include <cmath>

#include "zoll/error.hpp"

namespace zoll {

namespace {

Eigen::MatrixXd real_hessian(const ChartField& field, const CVector& point, double h) {
  const Eigen::Index d = point.size();
  const Eigen::Index m = 2 * d;
  const auto shifted = [&](std::initializer_list<std::pair<Eigen::Index, double>> moves) {
    CVector p = point;
    for (const auto& [a, s] : moves) p[a / 2] += (a % 2 == 0) ? cd(s, 0.0) : cd(0.0, s);
    const double value = field(p);
    if (!std::isfinite(value)) throw Error(ErrorCode::NonFinite, "field is not finite on the stencil");
    return value;
  };
  const double f0 = shifted({});
  Eigen::MatrixXd H(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    H(a, a) = (shifted({{a, h}}) - 2.0 * f0 + shifted({{a, -h}})) / (h * h);
    for (Eigen::Index b = a + 1; b < m; ++b) {
      H(a, b) = H(b, a) = (shifted({{a, h}, {b, h}}) - shifted({{a, h}, {b, -h}}) - shifted({{a, -h}, {b, h}}) +
                           shifted({{a, -h}, {b, -h}})) /
                          (4.0 * h * h);
    }
  }
  return H;
}

}  // namespace

LeviReport levi_form(const ChartField& field, const CVector& point, const LeviOptions& options) {
  Eigen::MatrixXd H = real_hessian(field, point, options.fd_step);
  if (options.richardson) H = (4.0 * real_hessian(field, point, 0.5 * options.fd_step) - H) / 3.0;
  const Eigen::Index d = point.size();
  LeviReport report;
  report.point = point;
  CMatrix L(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index k = 0; k < d; ++k) {
      const double xx = H(2 * j, 2 * k), yy = H(2 * j + 1, 2 * k + 1);
      const double xy = H(2 * j, 2 * k + 1), yx = H(2 * j + 1, 2 * k);
      L(j, k) = 0.25 * cd(xx + yy, xy - yx);
    }
  }
  report.asymmetry = (L - L.adjoint()).norm();
  report.form = 0.5 * (L + L.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(report.form, Eigen::EigenvaluesOnly);
  report.eigenvalues = eig.eigenvalues();
  return report;
}

HcmaResult hcma_check(const ProductPoint& p, const LeviOptions& options, TubeField field) {
  const AffineChart chart = chart_for(p);
  const int n = p.first().dimension();
  const ChartField f = [&](const CVector& c) {
    const ProductPoint q = point_from_chart(c, chart, n);
    return field == TubeField::U0 ? u0(q) : exhaustion_N(q);
  };
  const LeviReport levi = levi_form(f, chart_coordinates(p, chart), options);
  Eigen::VectorXd magnitudes = levi.eigenvalues.cwiseAbs();
  std::sort(magnitudes.data(), magnitudes.data() + magnitudes.size());
  HcmaResult result;
  result.dimension = static_cast<int>(magnitudes.size());
  const double lambda_max = levi.eigenvalues.cwiseAbs().maxCoeff();
  // |det| / (product of all but the smallest magnitude) is the smallest magnitude.
  result.residual = magnitudes[0];
  for (Eigen::Index k = 0; k < levi.eigenvalues.size(); ++k) {
    if (levi.eigenvalues[k] > hcma_rank_threshold * lambda_max) ++result.rank;
  }
  result.min_eigenvalue_ratio = lambda_max > 0.0 ? levi.eigenvalues[0] / lambda_max : 0.0;
  return result;
}

double leaf_harmonicity(const GeodesicFrame& frame, const HarmonicityOptions& options) {
  const auto f = [&](double sigma, double tau) {
    const double u = u0(leaf_map(frame, {sigma, tau}));
    return options.squared ? u * u : u;
  };
  const double h = options.fd_step;
  double worst = 0.0;
  for (int i = 0; i < options.sigma_points; ++i) {
    const double sigma = 2.0 * M_PI * i / options.sigma_points;
    for (int j = 0; j < options.tau_points; ++j) {
      const double t = options.tau_points == 1
                           ? options.tau_min
                           : options.tau_min + (options.tau_max - options.tau_min) * j / (options.tau_points - 1);
      for (double tau : {t, -t}) {
        const double lap = (f(sigma + h, tau) + f(sigma - h, tau) + f(sigma, tau + h) + f(sigma, tau - h) -
                            4.0 * f(sigma, tau)) /
                           (h * h);
        worst = std::max(worst, std::abs(lap));
      }
    }
  }
  return worst;
}

CircleProfile circle_max_profile(const LeafField& f, const std::vector<double>& radii, int angles) {
  if (angles < 720) throw Error(ErrorCode::InvalidArgument, "circle maximum needs at least 720 angles");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0) || (i > 0 && radii[i] <= radii[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "radii must be positive and increasing");
    }
  }
  CircleProfile profile;
  profile.radii = radii;
  double scale = 1.0;
  for (double r : radii) {
    double best = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < angles; ++k) best = std::max(best, f(std::polar(r, 2.0 * M_PI * k / angles)));
    profile.F.push_back(best);
    scale = std::max(scale, std::abs(best));
  }
  for (std::size_t i = 1; i < profile.F.size(); ++i) profile.total_variation += std::abs(profile.F[i] - profile.F[i - 1]);
  for (std::size_t i = 1; i + 1 < profile.F.size(); ++i) {
    const double x0 = std::log(radii[i - 1]), x1 = std::log(radii[i]), x2 = std::log(radii[i + 1]);
    const double chord = profile.F[i - 1] + (profile.F[i + 1] - profile.F[i - 1]) * (x1 - x0) / (x2 - x0);
    profile.max_convexity_defect = std::max(profile.max_convexity_defect, profile.F[i] - chord);
  }
  profile.convex = profile.max_convexity_defect <= 1e-9 * scale;
  profile.constant = profile.total_variation < 1e-6;
  return profile;
}

LeafField leaf_u0(const GeodesicFrame& frame) {
  return [frame](std::complex<double> z) { return u0(leaf_map(frame, {std::arg(z), -std::log(std::abs(z))})); };
}

}  // namespace zoll
