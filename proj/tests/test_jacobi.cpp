#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>

#include "zoll/cpn_chart.hpp"
#include "zoll/error.hpp"
#include "zoll/jacobi.hpp"

using namespace zoll;

namespace {

const double period = 2.0 * M_PI;
const double step = period / 1000.0;

double g_norm(const MetricChart& chart, const RVector& x, const RVector& v) { return std::sqrt(v.dot(chart.metric(x) * v)); }

GeodesicPath cpn_path(const CpnChart& chart, const GeodesicFrame& frame, double t_end = period) {
  const auto [x0, v0] = initial_data(chart, frame);
  return integrate_geodesic(chart.metric_chart(), x0, v0, t_end, step);
}

// g-orthonormal normal frame at x whose first vector is J v.
RMatrix complex_adapted_basis(const MetricChart& chart, const RVector& x, const RVector& v) {
  const RMatrix g = chart.metric(x);
  const RMatrix raw = normal_basis(chart, x, v);
  RMatrix out(raw.rows(), raw.cols());
  RVector jv = CpnChart::complex_structure(v);
  out.col(0) = jv / std::sqrt(jv.dot(g * jv));
  int filled = 1;
  for (int c = 0; c < raw.cols() && filled < raw.cols(); ++c) {
    RVector u = raw.col(c);
    for (int k = 0; k < filled; ++k) u -= out.col(k).dot(g * u) * out.col(k);
    const double len = std::sqrt(u.dot(g * u));
    if (len > 1e-6) out.col(filled++) = u / len;
  }
  return out;
}

}  // namespace

TEST_CASE("flat chart: straight lines and affine Jacobi fields") {
  const MetricChart flat = flat_chart(3);
  const RVector x0 = RVector::Zero(3);
  const RVector v0 = RVector::Unit(3, 0);
  const GeodesicPath path = integrate_geodesic(flat, x0, v0, 5.0, 1e-2);
  for (std::size_t i = 0; i < path.t.size(); i += 50) CHECK((path.x[i] - path.t[i] * v0).norm() < 1e-12);
  const RVector a(RVector::Unit(3, 1)), b(RVector::Unit(3, 2) * 0.5);
  const JacobiSolution j = jacobi_field(path, a, b);
  for (std::size_t i = 0; i < j.size(); i += 50) CHECK((j.value(i).col(0) - (a + j.time(i) * b)).norm() < 1e-10);
  CHECK(conjugate_points(path, 0.0, 5.0).empty());
}

TEST_CASE("round sphere: great circle, one conjugate point at pi") {
  const MetricChart s2 = round_sphere_chart();
  RVector x0(2), v0(2);
  x0 << M_PI / 2, 0.0;
  v0 << 0.0, 1.0;
  const GeodesicPath path = integrate_geodesic(s2, x0, v0, period, step);
  CHECK(std::abs(path.x.back()[0] - M_PI / 2) < 1e-10);
  CHECK(std::abs(path.x.back()[1] - period) < 1e-8);
  CHECK(path.max_energy_drift < 1e-8);

  RVector rate(2);
  rate << 1.0, 0.0;
  const JacobiSolution j = jacobi_field(path, RVector::Zero(2), rate);
  for (std::size_t i = 0; i < j.size(); i += 25) CHECK(std::abs(j.value(i)(0, 0) - std::sin(j.time(i))) < 1e-8);

  const auto conj = conjugate_points(path, 0.0, period);
  REQUIRE(conj.size() == 1);
  CHECK(conj[0].t == doctest::Approx(M_PI).epsilon(1e-6));
  CHECK(conj[0].multiplicity == 1);
  CHECK(morse_index(path, period) == 1);
}

TEST_CASE("flat torus: index 0") {
  RVector x0(2), v0(2);
  x0 << 0.1, 0.2;
  v0 << 1.0, 0.0;
  const GeodesicPath path = integrate_geodesic(flat_torus_chart(), x0, v0, period, step);
  CHECK(morse_index(path, period) == 0);
}

TEST_CASE("CP^n chart geodesic matches geodesic_point") {
  std::mt19937_64 rng(21);
  for (int n = 1; n <= 3; ++n) {
    const GeodesicFrame f = random_frame(n, rng);
    const CpnChart chart = CpnChart::adapted_to(f);
    const GeodesicPath path = cpn_path(chart, f);
    double worst = 0.0;
    for (std::size_t i = 0; i < path.t.size(); i += 20)
      worst = std::max(worst, chart.point(path.x[i]).distance(geodesic_point(f, path.t[i])));
    CHECK(worst < 1e-6);
    CHECK(path.max_energy_drift < 1e-8);
    CHECK(path.richardson_error < 1e-6);
  }
}

TEST_CASE("analytic and finite-difference Christoffel symbols agree") {
  std::mt19937_64 rng(22);
  const CpnChart chart = CpnChart::adapted_to(random_frame(2, rng));
  const MetricChart exact = chart.metric_chart(), fd = chart.metric_chart_fd();
  std::normal_distribution<double> gauss;
  for (int k = 0; k < 20; ++k) {
    RVector x(4), a(4), b(4);
    for (int i = 0; i < 4; ++i) x[i] = 0.5 * gauss(rng), a[i] = gauss(rng), b[i] = gauss(rng);
    CHECK((christoffel(exact, x, a, b) - christoffel(fd, x, a, b)).norm() < 1e-6 * (1.0 + a.norm() * b.norm()));
  }
}

TEST_CASE("CP^n Jacobi fields: sin t on J gamma', 2 sin(t/2) on the rest") {
  std::mt19937_64 rng(23);
  for (int n = 1; n <= 3; ++n) {
    const GeodesicFrame f = random_frame(n, rng);
    const CpnChart chart = CpnChart::adapted_to(f);
    const MetricChart mc = chart.metric_chart();
    const GeodesicPath path = cpn_path(chart, f);
    const RMatrix basis = complex_adapted_basis(mc, path.x[0], path.v[0]);
    CHECK((basis.transpose() * mc.metric(path.x[0]) * basis - RMatrix::Identity(2 * n - 1, 2 * n - 1)).norm() < 1e-12);
    const JacobiSolution sol = jacobi_fields(path, RMatrix::Zero(2 * n, 2 * n - 1), basis);
    CHECK(sol.max_residual() < 1e-4);
    const int k1 = 0;
    for (std::size_t i = 0; i < sol.size(); i += 37) {
      const double t = sol.time(i);
      for (int c = 0; c < 2 * n - 1; ++c) {
        const double expected = c == k1 ? std::abs(std::sin(t)) : std::abs(2.0 * std::sin(t / 2.0));
        if (n > 1 || c == k1) CHECK(std::abs(g_norm(mc, path.x[i], sol.value(i).col(c)) - expected) < 1e-6);
      }
    }
  }
}

TEST_CASE("linearity and Wronskian conservation") {
  std::mt19937_64 rng(24);
  const GeodesicFrame f = random_frame(2, rng);
  const CpnChart chart = CpnChart::adapted_to(f);
  const MetricChart mc = chart.metric_chart();
  const GeodesicPath path = cpn_path(chart, f);
  std::normal_distribution<double> gauss;
  RMatrix init(4, 2), rate(4, 2);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 2; ++j) init(i, j) = gauss(rng), rate(i, j) = gauss(rng);
  const JacobiSolution both = jacobi_fields(path, init, rate);
  const double a = 0.7, b = -1.3;
  const JacobiSolution mix = jacobi_field(path, a * init.col(0) + b * init.col(1), a * rate.col(0) + b * rate.col(1));
  double lin = 0.0, w_min = 1e300, w_max = -1e300;
  for (std::size_t i = 0; i < both.size(); ++i) {
    lin = std::max(lin, (mix.value(i).col(0) - a * both.value(i).col(0) - b * both.value(i).col(1)).norm());
    const RMatrix g = mc.metric(path.x[i]);
    const double w = both.covariant(i).col(0).dot(g * both.value(i).col(1)) -
                     both.value(i).col(0).dot(g * both.covariant(i).col(1));
    w_min = std::min(w_min, w), w_max = std::max(w_max, w);
  }
  CHECK(lin < 1e-8);
  CHECK(w_max - w_min < 1e-7);
}

TEST_CASE("CP^n conjugate points, Morse index and vanishing orders") {
  std::mt19937_64 rng(25);
  for (int n = 1; n <= 3; ++n) {
    for (int trial = 0; trial < 5; ++trial) {
      const GeodesicFrame f = random_frame(n, rng);
      const GeodesicPath path = cpn_path(CpnChart::adapted_to(f), f);
      const auto conj = conjugate_points(path, 0.0, period);
      REQUIRE(conj.size() == 1);
      CHECK(conj[0].t == doctest::Approx(M_PI).epsilon(1e-6));
      CHECK(conj[0].multiplicity == 1);
      CHECK(morse_index(path, period) == 1);
      const VanishingReport v = vanishing_order_total(path, period);
      CHECK(v.total == 2 * n);
      std::vector<int> counts = v.per_field;
      std::sort(counts.begin(), counts.end());
      std::vector<int> expected(2 * n - 1, 1);
      expected.back() = 2;
      CHECK(counts == expected);
    }
  }
}

TEST_CASE("integrator errors") {
  RVector x0(2), v0(2);
  x0 << M_PI / 2, 0.0;
  v0 << 1.0, 0.0;
  CHECK_THROWS_AS(integrate_geodesic(round_sphere_chart(), x0, v0, 4.0, 1e-2), Error);
  try {
    integrate_geodesic(round_sphere_chart(), x0, v0, 4.0, 1e-2);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::LeftChartDomain);
  }
  v0 << 0.0, 1.0;
  try {
    v0 << 0.3, 1.0;
    integrate_geodesic(round_sphere_chart(), x0, v0, period, 1.0);
    FAIL("expected StepTooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::StepTooLarge);
  }
}

TEST_CASE("parallel field evaluation") {
  std::mt19937_64 rng(26);
  const GeodesicFrame f = random_frame(2, rng);
  const CpnChart chart = CpnChart::adapted_to(f);
  const GeodesicPath path = cpn_path(chart, f);
  const RMatrix basis = normal_basis(chart.metric_chart(), path.x[0], path.v[0]);
  const ParallelField pf(jacobi_field(path, basis.col(1), basis.col(2)));
  const auto one = pf.eval(0.0, 1.0);
  CHECK((one.horizontal - basis.col(1)).norm() < 1e-12);
  CHECK((one.vertical - basis.col(2)).norm() < 1e-12);
  const auto zero = pf.eval(1.2, 0.0);
  CHECK(zero.vertical.norm() == 0.0);
  CHECK((zero.horizontal - pf.field().at(1.2).value.col(0)).norm() < 1e-12);
  const auto a = pf.eval(1.2, 0.5), b = pf.eval(1.2, 1.5);
  CHECK((3.0 * a.vertical - b.vertical).norm() < 1e-12);
  CHECK_THROWS_AS(pf.eval(period + 1.0, 1.0), Error);
  for (double sigma : {0.0, 0.7, 2.5}) CHECK(divisor_limit_norm(chart, pf, sigma) > 1e-3);
}
