#include "zoll/jacobi.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include "zoll/error.hpp"

namespace zoll {

namespace {

bool inside(const MetricChart& chart, const RVector& x) { return !chart.in_domain || chart.in_domain(x); }

// Christoffel tensor from central differences of the metric; Gamma[k](i, j).
std::vector<RMatrix> christoffel_tensor_fd(const MetricChart& chart, const RVector& x) {
  const int m = chart.dimension;
  const double h = christoffel_fd_step;
  std::vector<RMatrix> dg(m);
  for (int l = 0; l < m; ++l) {
    RVector xp = x;
    RVector xm = x;
    xp[l] += h;
    xm[l] -= h;
    dg[l] = (chart.metric(xp) - chart.metric(xm)) / (2.0 * h);
  }
  const RMatrix ginv = chart.metric(x).inverse();
  std::vector<RMatrix> gamma(m, RMatrix::Zero(m, m));
  for (int k = 0; k < m; ++k) {
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        double sum = 0.0;
        for (int p = 0; p < m; ++p) sum += ginv(k, p) * (dg[i](j, p) + dg[j](i, p) - dg[p](i, j));
        gamma[k](i, j) = 0.5 * sum;
      }
    }
  }
  return gamma;
}

double energy_at(const MetricChart& chart, const RVector& x, const RVector& v) {
  return 0.5 * v.dot(chart.metric(x) * v);
}

struct PhaseState {
  RVector x;
  RVector v;
};

PhaseState geodesic_rhs(const MetricChart& chart, const PhaseState& s) {
  return {s.v, -christoffel(chart, s.x, s.v, s.v)};
}

PhaseState rk4_step(const MetricChart& chart, const PhaseState& s, double h) {
  const auto add = [](const PhaseState& a, const PhaseState& k, double c) {
    return PhaseState{a.x + c * k.x, a.v + c * k.v};
  };
  const PhaseState k1 = geodesic_rhs(chart, s);
  const PhaseState k2 = geodesic_rhs(chart, add(s, k1, 0.5 * h));
  const PhaseState k3 = geodesic_rhs(chart, add(s, k2, 0.5 * h));
  const PhaseState k4 = geodesic_rhs(chart, add(s, k3, h));
  return {s.x + h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x),
          s.v + h / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v)};
}

// Geodesic plus k Jacobi fields (coordinate value J and coordinate rate R).
struct JacobiState {
  RVector x;
  RVector v;
  RMatrix J;
  RMatrix R;
};

JacobiState jacobi_rhs(const MetricChart& chart, const JacobiState& s) {
  JacobiState d;
  d.x = s.v;
  d.v = -christoffel(chart, s.x, s.v, s.v);
  d.J = s.R;
  const RMatrix gradient = christoffel_gradient(chart, s.x, s.v);
  d.R = -gradient * s.J;
  for (Eigen::Index c = 0; c < s.R.cols(); ++c) d.R.col(c) -= 2.0 * christoffel(chart, s.x, s.v, s.R.col(c));
  return d;
}

JacobiState jacobi_step(const MetricChart& chart, const JacobiState& s, double h) {
  const auto add = [](const JacobiState& a, const JacobiState& k, double c) {
    return JacobiState{a.x + c * k.x, a.v + c * k.v, a.J + c * k.J, a.R + c * k.R};
  };
  const JacobiState k1 = jacobi_rhs(chart, s);
  const JacobiState k2 = jacobi_rhs(chart, add(s, k1, 0.5 * h));
  const JacobiState k3 = jacobi_rhs(chart, add(s, k2, 0.5 * h));
  const JacobiState k4 = jacobi_rhs(chart, add(s, k3, h));
  const double w = h / 6.0;
  return {s.x + w * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x), s.v + w * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v),
          s.J + w * (k1.J + 2.0 * k2.J + 2.0 * k3.J + k4.J), s.R + w * (k1.R + 2.0 * k2.R + 2.0 * k3.R + k4.R)};
}

RMatrix covariant_of(const MetricChart& chart, const RVector& x, const RVector& v, const RMatrix& J,
                     const RMatrix& R) {
  RMatrix out = R;
  for (Eigen::Index c = 0; c < J.cols(); ++c) out.col(c) += christoffel(chart, x, v, J.col(c));
  return out;
}

// Component of each column g-orthogonal to v, premultiplied by a square root of g.
RMatrix normal_part(const MetricChart& chart, const RVector& x, const RVector& v, const RMatrix& J) {
  const RMatrix g = chart.metric(x);
  const RVector gv = g * v;
  const double vv = v.dot(gv);
  RMatrix perp = J;
  for (Eigen::Index c = 0; c < J.cols(); ++c) perp.col(c) -= (gv.dot(J.col(c)) / vv) * v;
  const Eigen::LLT<RMatrix> llt(g);
  return llt.matrixU() * perp;
}

double g_norm(const MetricChart& chart, const RVector& x, const RVector& a) {
  return std::sqrt(a.dot(chart.metric(x) * a));
}

template <typename F>
std::pair<double, double> minimize(F f, double lo, double hi) {
  const auto result = boost::math::tools::brent_find_minima(f, lo, hi, std::numeric_limits<double>::digits / 2);
  return {result.first, result.second};
}

}  // namespace

RVector christoffel(const MetricChart& chart, const RVector& x, const RVector& a, const RVector& b) {
  if (chart.christoffel) return chart.christoffel(x, a, b);
  const std::vector<RMatrix> gamma = christoffel_tensor_fd(chart, x);
  RVector out(chart.dimension);
  for (int k = 0; k < chart.dimension; ++k) out[k] = a.dot(gamma[k] * b);
  return out;
}

RMatrix christoffel_gradient(const MetricChart& chart, const RVector& x, const RVector& v) {
  // Richardson-extrapolated central differences.
  const double h = chart.christoffel ? 1e-4 : 1e-3;
  const int m = chart.dimension;
  RMatrix out(m, m);
  for (int k = 0; k < m; ++k) {
    const auto central = [&](double step) {
      RVector xp = x;
      RVector xm = x;
      xp[k] += step;
      xm[k] -= step;
      return RVector((christoffel(chart, xp, v, v) - christoffel(chart, xm, v, v)) / (2.0 * step));
    };
    out.col(k) = (4.0 * central(0.5 * h) - central(h)) / 3.0;
  }
  return out;
}

MetricChart flat_chart(int dimension) {
  MetricChart chart;
  chart.dimension = dimension;
  chart.metric = [dimension](const RVector&) { return RMatrix::Identity(dimension, dimension); };
  chart.description = "flat R^" + std::to_string(dimension);
  return chart;
}

MetricChart round_sphere_chart() {
  MetricChart chart;
  chart.dimension = 2;
  chart.metric = [](const RVector& x) {
    RMatrix g = RMatrix::Identity(2, 2);
    g(1, 1) = std::sin(x[0]) * std::sin(x[0]);
    return g;
  };
  chart.in_domain = [](const RVector& x) { return x[0] > 1e-6 && x[0] < M_PI - 1e-6; };
  chart.christoffel = [](const RVector& x, const RVector& a, const RVector& b) {
    const double s = std::sin(x[0]);
    const double c = std::cos(x[0]);
    RVector out(2);
    out[0] = -s * c * a[1] * b[1];
    out[1] = (c / s) * (a[0] * b[1] + a[1] * b[0]);
    return out;
  };
  chart.description = "round S^2 (polar, azimuth)";
  return chart;
}

MetricChart flat_torus_chart() {
  MetricChart chart = flat_chart(2);
  chart.description = "flat square torus R^2 / (2 pi Z)^2";
  return chart;
}

double GeodesicPath::energy() const { return energy_at(chart, x.front(), v.front()); }

GeodesicPath integrate_geodesic(const MetricChart& chart, const RVector& x0, const RVector& v0, double t_end,
                                double step) {
  if (x0.size() != chart.dimension || v0.size() != chart.dimension) {
    throw Error(ErrorCode::InvalidArgument, "initial data has the wrong dimension");
  }
  if (!(step > 0.0) || !(t_end > 0.0)) throw Error(ErrorCode::InvalidArgument, "step and t_end must be positive");
  if (v0.norm() == 0.0) throw Error(ErrorCode::InvalidArgument, "initial velocity must be nonzero");
  if (!inside(chart, x0)) throw Error(ErrorCode::LeftChartDomain, "initial point outside the chart");

  const auto steps = static_cast<std::size_t>(std::ceil(t_end / step - 1e-9));
  const double h = t_end / static_cast<double>(steps);

  GeodesicPath path;
  path.chart = chart;
  path.step = h;
  path.t.reserve(steps + 1);
  path.x.reserve(steps + 1);
  path.v.reserve(steps + 1);
  PhaseState s{x0, v0};
  const double e0 = energy_at(chart, x0, v0);
  path.t.push_back(0.0);
  path.x.push_back(x0);
  path.v.push_back(v0);
  for (std::size_t i = 1; i <= steps; ++i) {
    s = rk4_step(chart, s, h);
    if (!inside(chart, s.x) || !s.x.allFinite()) {
      throw Error(ErrorCode::LeftChartDomain, "geodesic left the chart at t = " + std::to_string(i * h));
    }
    path.t.push_back(static_cast<double>(i) * h);
    path.x.push_back(s.x);
    path.v.push_back(s.v);
    path.max_energy_drift = std::max(path.max_energy_drift, std::abs(energy_at(chart, s.x, s.v) - e0) / e0);
  }
  if (path.max_energy_drift > 1e-6) {
    throw Error(ErrorCode::StepTooLarge, "relative energy drift " + std::to_string(path.max_energy_drift));
  }

  PhaseState fine{x0, v0};
  for (std::size_t i = 0; i < 2 * steps; ++i) fine = rk4_step(chart, fine, 0.5 * h);
  path.richardson_error = std::max((fine.x - s.x).norm(), (fine.v - s.v).norm());
  return path;
}

JacobiSolution jacobi_fields(const GeodesicPath& path, const RMatrix& initial, const RMatrix& initial_rate) {
  const MetricChart& chart = path.chart;
  if (initial.rows() != chart.dimension || initial_rate.rows() != chart.dimension ||
      initial.cols() != initial_rate.cols() || initial.cols() == 0) {
    throw Error(ErrorCode::InvalidArgument, "Jacobi initial data has the wrong shape");
  }
  JacobiSolution sol;
  sol.path_ = std::make_shared<const GeodesicPath>(path);
  const std::size_t count = path.t.size();
  sol.value_.reserve(count);
  sol.covariant_.reserve(count);
  sol.rate_.reserve(count);

  const RVector& x0 = path.x.front();
  const RVector& v0 = path.v.front();
  RMatrix rate0 = initial_rate;
  for (Eigen::Index c = 0; c < initial.cols(); ++c) rate0.col(c) -= christoffel(chart, x0, v0, initial.col(c));

  JacobiState s{x0, v0, initial, rate0};
  for (std::size_t i = 0; i < count; ++i) {
    if (i > 0) {
      s = jacobi_step(chart, s, path.t[i] - path.t[i - 1]);
      // Re-anchor the base curve on the stored geodesic samples.
      s.x = path.x[i];
      s.v = path.v[i];
    }
    sol.value_.push_back(s.J);
    sol.rate_.push_back(s.R);
    sol.covariant_.push_back(covariant_of(chart, s.x, s.v, s.J, s.R));
  }

  double scale = 1.0;
  for (const auto& J : sol.value_) scale = std::max(scale, J.norm());
  const double h = path.step;
  for (std::size_t i = 1; i + 1 < count; ++i) {
    const RMatrix second = (sol.value_[i + 1] - 2.0 * sol.value_[i] + sol.value_[i - 1]) / (h * h);
    const JacobiState d = jacobi_rhs(chart, {path.x[i], path.v[i], sol.value_[i], sol.rate_[i]});
    sol.max_residual_ = std::max(sol.max_residual_, (second - d.R).norm() / scale);
  }
  return sol;
}

JacobiSolution jacobi_field(const GeodesicPath& path, const RVector& initial, const RVector& initial_rate) {
  return jacobi_fields(path, RMatrix(initial), RMatrix(initial_rate));
}

JacobiSolution::State JacobiSolution::at(double t) const {
  const auto& times = path_->t;
  const double slack = 1e-12 * std::max(1.0, std::abs(times.back()));
  if (t < times.front() - slack || t > times.back() + slack) {
    throw Error(ErrorCode::OutOfRange, "time " + std::to_string(t) + " outside the integrated interval");
  }
  auto it = std::upper_bound(times.begin(), times.end(), t);
  std::size_t i = (it == times.begin()) ? 0 : static_cast<std::size_t>(it - times.begin()) - 1;
  i = std::min(i, times.size() - 1);
  const MetricChart& chart = path_->chart;
  JacobiState s{path_->x[i], path_->v[i], value_[i], rate_[i]};
  const double dt = t - times[i];
  if (dt != 0.0) s = jacobi_step(chart, s, dt);
  return {s.x, s.v, s.J, covariant_of(chart, s.x, s.v, s.J, s.R)};
}

RMatrix normal_basis(const MetricChart& chart, const RVector& x, const RVector& v) {
  const int m = chart.dimension;
  const RMatrix g = chart.metric(x);
  const auto dot = [&g](const RVector& a, const RVector& b) { return a.dot(g * b); };
  std::vector<RVector> basis{v / std::sqrt(dot(v, v))};
  for (int k = 0; k < m && static_cast<int>(basis.size()) < m; ++k) {
    RVector e = RVector::Unit(m, k);
    for (const auto& b : basis) e -= dot(e, b) * b;
    const double norm = std::sqrt(std::max(0.0, dot(e, e)));
    if (norm < 1e-6) continue;
    e /= norm;
    for (const auto& b : basis) e -= dot(e, b) * b;  // second pass for orthogonality to rounding
    basis.push_back(e / std::sqrt(dot(e, e)));
  }
  RMatrix out(m, m - 1);
  for (int c = 1; c < m; ++c) out.col(c - 1) = basis[c];
  return out;
}

std::vector<ConjugatePoint> conjugate_points(const GeodesicPath& path, double t_begin, double t_end) {
  return conjugate_points(path, normal_basis(path.chart, path.x.front(), path.v.front()), t_begin, t_end);
}

std::vector<ConjugatePoint> conjugate_points(const GeodesicPath& path, const RMatrix& basis, double t_begin,
                                             double t_end) {
  const MetricChart& chart = path.chart;
  const int m = chart.dimension;
  if (m < 2) return {};
  const JacobiSolution sol = jacobi_fields(path, RMatrix::Zero(m, basis.cols()), basis);

  const auto singular_values = [&](const RVector& x, const RVector& v, const RMatrix& J) {
    return Eigen::JacobiSVD<RMatrix>(normal_part(chart, x, v, J)).singularValues();
  };

  std::vector<double> smallest(sol.size());
  double largest = 0.0;
  for (std::size_t i = 0; i < sol.size(); ++i) {
    const RVector sv = singular_values(path.x[i], path.v[i], sol.value(i));
    smallest[i] = sv.minCoeff();
    largest = std::max(largest, sv.maxCoeff());
  }

  std::vector<ConjugatePoint> found;
  for (std::size_t i = 1; i + 1 < sol.size(); ++i) {
    const double t = path.t[i];
    if (t <= t_begin || t >= t_end) continue;
    if (!(smallest[i] <= smallest[i - 1] && smallest[i] < smallest[i + 1])) continue;
    if (smallest[i] / largest > 0.1) continue;

    const RVector at_sample = singular_values(path.x[i], path.v[i], sol.value(i)) / largest;
    const int cluster = static_cast<int>((at_sample.array() < 0.1).count());
    const auto objective = [&](double s) {
      const auto state = sol.at(s);
      const RVector sv = singular_values(state.x, state.v, state.value) / largest;
      // Singular values are sorted decreasingly; sum the squares of the cluster near zero.
      return sv.tail(cluster).squaredNorm();
    };
    const double lo = std::max(path.t[i - 1], t_begin);
    const double hi = std::min(path.t[i + 1], t_end);
    const double t_star = minimize(objective, lo, hi).first;

    const auto state = sol.at(t_star);
    Eigen::JacobiSVD<RMatrix> svd(normal_part(chart, state.x, state.v, state.value), Eigen::ComputeFullV);
    const RVector sv = svd.singularValues() / largest;
    int multiplicity = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k) {
      if (sv[k] < multiplicity_zero) {
        ++multiplicity;
      } else if (sv[k] < multiplicity_ambiguous) {
        throw Error(ErrorCode::AmbiguousMultiplicity,
                    "singular value " + std::to_string(sv[k]) + " at t = " + std::to_string(t_star));
      }
    }
    if (multiplicity == 0) continue;
    if (!found.empty() && std::abs(found.back().t - t_star) < 2.0 * path.step) continue;
    found.push_back({t_star, multiplicity, svd.matrixV().rightCols(multiplicity)});
  }
  return found;
}

int morse_index(const GeodesicPath& path, double period) {
  if (path.end_time() < period - 1e-9) throw Error(ErrorCode::OutOfRange, "path shorter than the period");
  int index = 0;
  for (const auto& cp : conjugate_points(path, 0.0, period)) index += cp.multiplicity;
  return index;
}

VanishingReport vanishing_order_total(const GeodesicPath& path, double period) {
  const MetricChart& chart = path.chart;
  const int m = chart.dimension;
  if (path.end_time() < period - 1e-9) throw Error(ErrorCode::OutOfRange, "path shorter than the period");
  const RMatrix base = normal_basis(chart, path.x.front(), path.v.front());
  const auto cps = conjugate_points(path, base, 0.0, period);

  // Rotate the initial-rate basis so the leading vectors span the conjugate kernels.
  RMatrix kernels(m - 1, 0);
  for (const auto& cp : cps) {
    kernels.conservativeResize(Eigen::NoChange, kernels.cols() + cp.kernel.cols());
    kernels.rightCols(cp.kernel.cols()) = cp.kernel;
  }
  RMatrix rotation = RMatrix::Identity(m - 1, m - 1);
  if (kernels.cols() > 0) {
    RMatrix stacked(m - 1, kernels.cols() + m - 1);
    stacked << kernels, RMatrix::Identity(m - 1, m - 1);
    Eigen::HouseholderQR<RMatrix> qr(stacked);
    rotation = qr.householderQ() * RMatrix::Identity(m - 1, m - 1);
  }
  const RMatrix adapted = base * rotation;
  const JacobiSolution sol = jacobi_fields(path, RMatrix::Zero(m, m - 1), adapted);

  VanishingReport report;
  report.per_field.assign(m - 1, 0);
  const double margin = 2.0 * path.step;
  for (int f = 0; f < m - 1; ++f) {
    const auto field_norm = [&](const RVector& x, const RVector& v, const RVector& value) {
      return normal_part(chart, x, v, value).norm();
    };
    std::vector<double> norms(sol.size());
    double largest = 0.0;
    double largest_rate = 0.0;
    for (std::size_t i = 0; i < sol.size(); ++i) {
      norms[i] = field_norm(path.x[i], path.v[i], sol.value(i).col(f));
      largest = std::max(largest, norms[i]);
      largest_rate = std::max(largest_rate, g_norm(chart, path.x[i], sol.covariant(i).col(f)));
    }
    const double rate0 = g_norm(chart, path.x.front(), sol.covariant(0).col(f));
    if (rate0 < multiplicity_zero * largest_rate) {
      throw Error(ErrorCode::DegenerateZero, "normal field vanishes to higher order at t = 0");
    }
    report.per_field[f] = 1;
    report.zero_times.push_back(0.0);

    for (std::size_t i = 1; i + 1 < sol.size(); ++i) {
      const double t = path.t[i];
      if (t <= margin || t >= period - margin) continue;
      if (!(norms[i] <= norms[i - 1] && norms[i] < norms[i + 1]) || norms[i] / largest > 0.1) continue;
      const auto objective = [&](double s) {
        const auto state = sol.at(s);
        const double value = field_norm(state.x, state.v, state.value.col(f)) / largest;
        return value * value;
      };
      const double t_star = minimize(objective, path.t[i - 1], path.t[i + 1]).first;
      const auto state = sol.at(t_star);
      const double value = field_norm(state.x, state.v, state.value.col(f)) / largest;
      if (value >= multiplicity_ambiguous) continue;
      if (value >= multiplicity_zero) {
        throw Error(ErrorCode::AmbiguousMultiplicity, "near-zero of a normal field at t = " + std::to_string(t_star));
      }
      const double rate = g_norm(chart, state.x, state.covariant.col(f)) / largest_rate;
      if (rate < multiplicity_zero) {
        throw Error(ErrorCode::DegenerateZero, "zero of order > 1 at t = " + std::to_string(t_star));
      }
      ++report.per_field[f];
      report.zero_times.push_back(t_star);
    }
  }
  for (int c : report.per_field) report.total += c;
  return report;
}

ParallelField::ParallelField(JacobiSolution field) : field_(std::move(field)) {
  if (field_.field_count() != 1) throw Error(ErrorCode::InvalidArgument, "parallel field needs a single Jacobi field");
}

ParallelField::Value ParallelField::eval(double sigma, double tau) const {
  const auto state = field_.at(sigma);
  return {state.value.col(0), tau * state.covariant.col(0)};
}

}  // namespace zoll
