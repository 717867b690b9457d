#include "zoll/degree.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>

#include "zoll/error.hpp"

namespace zoll {

namespace {

using cplx = std::complex<double>;
using Parametrization = std::function<LeafJet(cplx)>;

const cplx I(0.0, 1.0);

template <int Points>
struct Rule {
  using gauss = boost::math::quadrature::gauss<double, Points>;
  // Nodes and weights on [-1, 1], both signs expanded.
  static std::vector<std::pair<double, double>> nodes() {
    std::vector<std::pair<double, double>> out;
    const auto& x = gauss::abscissa();
    const auto& w = gauss::weights();
    for (std::size_t k = 0; k < x.size(); ++k) {
      out.emplace_back(x[k], w[k]);
      if (x[k] != 0.0) out.emplace_back(-x[k], w[k]);
    }
    return out;
  }
};

std::vector<std::pair<double, double>> gauss_nodes(int points) {
  switch (points) {
    case 8: return Rule<8>::nodes();
    case 16: return Rule<16>::nodes();
    case 32: return Rule<32>::nodes();
    case 64: return Rule<64>::nodes();
    default: throw Error(ErrorCode::InvalidArgument, "unsupported Gauss rule size " + std::to_string(points));
  }
}

double laplacian(const WeightFactory& factory, const Parametrization& chart, cplx centre, double h) {
  const LineWeight phi = factory(chart(centre));
  const auto at = [&](cplx s) {
    const double v = phi(chart(s));
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, "line weight is not finite on the leaf");
    return v;
  };
  return (at(centre + h) + at(centre - h) + at(centre + I * h) + at(centre - I * h) - 4.0 * at(centre)) / (h * h);
}

double integrate(const WeightFactory& factory, const GeodesicFrame& frame, const DegreeOptions& o, int sigma_points) {
  const int radial_points = std::max(8, sigma_points / 4);
  const auto radial = gauss_nodes(radial_points);
  const double height = std::log(1.0 / o.cap_radius);

  const Parametrization cylinder = [&frame](cplx s) { return cylinder_jet(frame, s); };
  const CVector& z = frame.z();
  const CVector& w = frame.w();
  const CVector zb = z.conjugate();
  const CVector wb = w.conjugate();
  // e^{is/2} (cos(s/2), sin(s/2)) = ((q + 1) / 2, (q - 1) / 2i) with q = e^{is}.
  const Parametrization cap_infinity = [&](cplx q) {
    const cplx a = (q + 1.0) / 2.0, b = (q - 1.0) / (2.0 * I);
    return LeafJet{a * z + b * w, a * zb + b * wb, 0.5 * z + w / (2.0 * I), 0.5 * zb + wb / (2.0 * I)};
  };
  // e^{-is/2} (cos(s/2), sin(s/2)) = ((1 + q') / 2, (1 - q') / 2i) with q' = e^{-is}.
  const Parametrization cap_zero = [&](cplx q) {
    const cplx a = (1.0 + q) / 2.0, b = (1.0 - q) / (2.0 * I);
    return LeafJet{a * z + b * w, a * zb + b * wb, 0.5 * z - w / (2.0 * I), 0.5 * zb - wb / (2.0 * I)};
  };

  double total = 0.0;
  const double dsigma = 2.0 * M_PI / sigma_points;
  for (int i = 0; i < sigma_points; ++i) {
    const double sigma = o.sigma_offset + i * dsigma;
    for (const auto& [x, wt] : radial) {
      const double tau = height * x;
      total += dsigma * height * wt * laplacian(factory, cylinder, cplx(sigma, tau), o.fd_step);
    }
  }
  for (const Parametrization* cap : {&cap_infinity, &cap_zero}) {
    for (int i = 0; i < sigma_points; ++i) {
      const double theta = o.sigma_offset + i * dsigma;
      for (const auto& [x, wt] : radial) {
        const double rho = 0.5 * o.cap_radius * (x + 1.0);
        total += dsigma * 0.5 * o.cap_radius * wt * rho *
                 laplacian(factory, *cap, std::polar(rho, theta), o.fd_step * o.cap_radius);
      }
    }
  }
  return total / (4.0 * M_PI);
}

double fs_tangent_norm(const CVector& X, const CVector& dX) {
  const double nx = X.squaredNorm();
  return (dX.squaredNorm() * nx - std::norm(X.dot(dX))) / (nx * nx);
}

}  // namespace

LeafJet cylinder_jet(const GeodesicFrame& frame, cplx s) {
  const cplx c = std::cos(0.5 * s), sn = std::sin(0.5 * s);
  const CVector& z = frame.z();
  const CVector& w = frame.w();
  const CVector zb = z.conjugate();
  const CVector wb = w.conjugate();
  return LeafJet{c * z + sn * w, c * zb + sn * wb, -0.5 * sn * z + 0.5 * c * w, -0.5 * sn * zb + 0.5 * c * wb};
}

DegreeResult restricted_degree(const WeightFactory& weight, const GeodesicFrame& frame, const DegreeOptions& options) {
  if (options.resolution < 16 || options.resolution % 2 != 0 || options.resolution > 256) {
    throw Error(ErrorCode::InvalidArgument, "degree resolution must be even and in [16, 256]");
  }
  if (!(options.cap_radius > 0.0 && options.cap_radius < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "cap radius must lie in (0, 1)");
  }
  DegreeResult result;
  result.value = integrate(weight, frame, options, options.resolution);
  const double coarse = integrate(weight, frame, options, options.resolution / 2);
  result.quadrature_error = std::abs(result.value - coarse);
  result.degree = static_cast<int>(std::lround(result.value));
  result.rounding_error = std::abs(result.value - result.degree);
  if (result.quadrature_error > degree_tolerance || result.rounding_error > degree_tolerance) {
    throw Error(ErrorCode::PoorConvergence,
                "degree quadrature did not settle: value " + std::to_string(result.value) + ", error estimate " +
                    std::to_string(result.quadrature_error));
  }
  return result;
}

WeightFactory bidegree_weight(int a, int b) {
  return [a, b](const LeafJet&) {
    return LineWeight([a, b](const LeafJet& j) { return a * std::log(j.Z.squaredNorm()) + b * std::log(j.W.squaredNorm()); });
  };
}

WeightFactory divisor_weight() {
  return [](const LeafJet&) {
    return LineWeight([](const LeafJet& j) { return std::log((j.Z * j.W.transpose()).squaredNorm()); });
  };
}

WeightFactory anticanonical_weight() {
  return [](const LeafJet& centre) {
    const AffineChart chart = chart_for(ProductPoint(centre.Z, centre.W));
    return LineWeight([chart](const LeafJet& j) {
      const CMatrix h = product_fs_metric(chart_coordinates(j.Z, j.W, chart));
      return -std::log(h.determinant().real());
    });
  };
}

WeightFactory leaf_tangent_weight() {
  return [](const LeafJet&) {
    return LineWeight([](const LeafJet& j) { return -std::log(fs_tangent_norm(j.Z, j.dZ) + fs_tangent_norm(j.W, j.dW)); });
  };
}

WeightFactory normal_determinant_weight() {
  return [](const LeafJet& centre) {
    const LineWeight top = anticanonical_weight()(centre);
    const LineWeight tangent = leaf_tangent_weight()(centre);
    return LineWeight([top, tangent](const LeafJet& j) { return top(j) - tangent(j); });
  };
}

}  // namespace zoll
