#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "zoll/model.hpp"
#include "zoll/pluripotential.hpp"

using namespace zoll;

namespace {

const cd I(0.0, 1.0);

CVector e(int i, int size) { return CVector::Unit(size, i); }

double uniform(std::mt19937_64& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

// ||Z||^2 ||W||^2 / |sum Z W|^2 straight from the definition.
double exhaustion_oracle(const CVector& Z, const CVector& W) {
  return Z.squaredNorm() * W.squaredNorm() / std::norm(Z.cwiseProduct(W).sum());
}

}  // namespace

TEST_CASE("leaf_map examples") {
  const GeodesicFrame f(e(0, 3), e(1, 3));
  CHECK(leaf_map(f, {0.0, 0.0}).approx_equal(ProductPoint(e(0, 3), e(0, 3))));
  const ProductPoint inf(e(0, 3) + I * e(1, 3), e(0, 3) + I * e(1, 3));
  const ProductPoint zero(e(0, 3) - I * e(1, 3), e(0, 3) - I * e(1, 3));
  CHECK(leaf_map(f, {0.0, Infinite}).approx_equal(inf));
  CHECK(leaf_map(f, {0.0, -Infinite}).approx_equal(zero));
  CHECK(leaf_infinity(f).approx_equal(inf));
  CHECK(leaf_zero(f).approx_equal(zero));
  CHECK(leaf_map(f, {0.0, 40.0}).approx_equal(inf, 1e-9));
  CHECK(inf.on_divisor());
}

TEST_CASE("leaf_map agrees with the holomorphic formula and is periodic") {
  std::mt19937_64 rng(1);
  for (int k = 0; k < 200; ++k) {
    const GeodesicFrame f = random_frame(1 + k % 3, rng);
    const double sigma = uniform(rng, 0.0, 2.0 * M_PI), tau = uniform(rng, -5.0, 5.0);
    const std::complex<double> s(sigma, tau);
    const ProductPoint direct(std::cos(s / 2.0) * f.z() + std::sin(s / 2.0) * f.w(),
                              std::cos(s / 2.0) * f.z().conjugate() + std::sin(s / 2.0) * f.w().conjugate());
    CHECK(leaf_map(f, {sigma, tau}).approx_equal(direct, 1e-9));
    CHECK(leaf_map(f, {sigma + 2.0 * M_PI, tau}).approx_equal(leaf_map(f, {sigma, tau}), 1e-9));
    CHECK(leaf_map(f, {sigma, 0.0}).approx_equal(totally_real_embedding(geodesic_point(f, sigma)), 1e-12));
  }
}

TEST_CASE("leaf holomorphy: Cauchy-Riemann in affine charts") {
  std::mt19937_64 rng(2);
  const double h = 1e-4;
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const GeodesicFrame f = random_frame(2, rng);
    const double sigma = uniform(rng, 0.0, 2.0 * M_PI), tau = uniform(rng, -3.0, 3.0);
    const AffineChart chart = chart_for(leaf_map(f, {sigma, tau}));
    const auto at = [&](double s, double t) { return chart_coordinates(leaf_map(f, {s, t}), chart); };
    const CVector ds = (at(sigma + h, tau) - at(sigma - h, tau)) / (2.0 * h);
    const CVector dt = (at(sigma, tau + h) - at(sigma, tau - h)) / (2.0 * h);
    worst = std::max(worst, (dt - I * ds).norm());
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("embed_tangent") {
  const ProjectivePoint p(e(0, 3));
  CHECK(embed_tangent(TangentVector::zero(p)).approx_equal(ProductPoint(e(0, 3), e(0, 3))));
  const TangentVector v(p, 0.5 * e(1, 3));
  const CVector rep = std::cosh(0.5) * e(0, 3) + I * std::sinh(0.5) * e(1, 3);
  CHECK(embed_tangent(v).approx_equal(ProductPoint(rep, rep.conjugate().conjugate())));
  std::mt19937_64 rng(3);
  for (int k = 0; k < 100; ++k) {
    const TangentVector t = random_tangent(2, uniform(rng, 0.01, 5.0), rng);
    CHECK(u0(embed_tangent(t)) == doctest::Approx(t.norm()).epsilon(1e-12));
  }
}

TEST_CASE("exhaustion, u0 and potential") {
  std::mt19937_64 rng(4);
  const ProjectivePoint z = random_point(2, rng);
  CHECK(exhaustion_N(totally_real_embedding(z)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(u0(totally_real_embedding(z)) == 0.0);
  CHECK(kahler_potential(totally_real_embedding(z)) == doctest::Approx(std::log(2.0)));

  const GeodesicFrame f = random_frame(2, rng);
  CHECK(exhaustion_N(leaf_map(f, {0.0, 1.0})) == doctest::Approx(2.3810978).epsilon(1e-7));
  CHECK(u0(leaf_map(f, {0.3, 1.0})) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(u0(leaf_map(f, {0.3, -0.7})) == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(kahler_potential(leaf_map(f, {1.1, 1.0})) == doctest::Approx(std::log(1.0 + std::cosh(2.0))).epsilon(1e-12));

  const ProductPoint divisor(CVector(e(0, 3) + I * e(1, 3)), CVector(e(0, 3) + I * e(1, 3)));
  CHECK(exhaustion_N(divisor) == Infinite);
  CHECK(u0(divisor) == Infinite);
  CHECK(kahler_potential(divisor) == Infinite);

  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const GeodesicFrame g = random_frame(1 + k % 3, rng);
    const double sigma = uniform(rng, 0.0, 2.0 * M_PI), tau = uniform(rng, -5.0, 5.0);
    worst = std::max(worst, std::abs(u0(leaf_map(g, {sigma, tau})) - std::abs(tau)));
    // u0 = acosh(2N - 1) / 2 where that form is well conditioned
    const ProductPoint q = leaf_map(g, {sigma, tau});
    if (std::abs(tau) > 0.5) CHECK(u0(q) == doctest::Approx(0.5 * std::acosh(2.0 * exhaustion_N(q) - 1.0)).epsilon(1e-10));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("N >= 1 with equality exactly on the fixed set of the involution") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 1000; ++k) {
    const int n = 1 + k % 3;
    const ProductPoint p(random_point(n, rng), random_point(n, rng));
    const double N = exhaustion_N(p);
    CHECK(N >= 1.0 - 1e-12);
    CHECK(N == doctest::Approx(exhaustion_oracle(p.first().rep(), p.second().rep())).epsilon(1e-10));
    CHECK(!involution_N(p).approx_equal(p, 1e-6));
    const ProductPoint m = totally_real_embedding(p.first());
    CHECK(involution_N(m).approx_equal(m, 1e-12));
    CHECK(exhaustion_N(m) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("involution N") {
  std::mt19937_64 rng(6);
  for (int k = 0; k < 1000; ++k) {
    const ProductPoint p(random_point(2, rng), random_point(2, rng));
    CHECK(involution_N(involution_N(p)).approx_equal(p, 1e-12));
    if (k < 100) {
      const GeodesicFrame f = random_frame(2, rng);
      CHECK(involution_N(leaf_infinity(f)).approx_equal(leaf_zero(f), 1e-12));
      CHECK(involution_N(leaf_infinity(f)).on_divisor());
      // N(phi(s)) = phi(conj s), i.e. v -> -v flips tau
      CHECK(involution_N(leaf_map(f, {0.4, 1.3})).approx_equal(leaf_map(f, {0.4, -1.3}), 1e-12));
    }
  }
}

TEST_CASE("leaf endpoints lie on D") {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 100; ++k) {
    const GeodesicFrame f = random_frame(1 + k % 3, rng);
    const double sigma = uniform(rng, 0.0, 2.0 * M_PI);
    CHECK(std::abs(leaf_map(f, {sigma, 40.0}).pairing()) < 1e-12);
    CHECK(std::abs(leaf_map(f, {sigma, -40.0}).pairing()) < 1e-12);
    CHECK(leaf_infinity(f).on_divisor());
  }
}

TEST_CASE("segre") {
  const SegrePoint s = segre(ProductPoint(e(0, 3), e(0, 3)));
  CHECK((s.zeta - CMatrix(e(0, 3) * e(0, 3).transpose())).norm() < 1e-15);
  std::mt19937_64 rng(8);
  for (int k = 0; k < 100; ++k) {
    const ProductPoint p(random_point(2, rng), random_point(2, rng));
    const CMatrix a = segre(involution_N(p)).zeta;
    const CMatrix b = segre(p).zeta.adjoint();
    const cd phase = (a.adjoint() * b).trace();
    CHECK((a * (phase / std::abs(phase)) - b).norm() < 1e-12);
    CHECK(exhaustion_from_segre(segre(p)) == doctest::Approx(exhaustion_N(p)).epsilon(1e-10));
    Eigen::JacobiSVD<CMatrix> svd(segre(p).zeta);
    CHECK(svd.singularValues()[1] < 1e-12);
  }
}

TEST_CASE("inverse correspondence") {
  const ProductPoint m(e(0, 3), e(0, 3));
  const auto back = invert_embedding(m);
  REQUIRE(std::holds_alternative<TangentVector>(back));
  CHECK(std::get<TangentVector>(back).norm() < 1e-15);
  CHECK(std::get<TangentVector>(back).base().approx_equal(ProjectivePoint(e(0, 3))));

  std::mt19937_64 rng(9);
  for (int k = 0; k < 100; ++k) {
    const TangentVector v = random_tangent(1 + k % 3, uniform(rng, 0.01, 6.0), rng);
    const ProductPoint p = embed_tangent(v);
    const auto image = invert_embedding(p);
    REQUIRE(std::holds_alternative<TangentVector>(image));
    CHECK(tangent_distance(std::get<TangentVector>(image), v) < 1e-9);
    CHECK(embed_tangent(std::get<TangentVector>(image)).approx_equal(p, 1e-9));
    CHECK(inverse_length_constant(p) == doctest::Approx(2.0).epsilon(1e-9));
  }

  // divisor branch: the returned geodesic has p among its leaf endpoints
  const CVector d = e(0, 3) + I * e(1, 3);
  const ProductPoint q(d, d);
  const auto div = invert_embedding(q);
  REQUIRE(std::holds_alternative<DivisorGeodesic>(div));
  const GeodesicFrame f = std::get<DivisorGeodesic>(div).frame;
  CHECK((leaf_infinity(f).approx_equal(q) || leaf_zero(f).approx_equal(q)));
  for (int k = 0; k < 50; ++k) {
    const GeodesicFrame g = random_frame(2, rng);
    const auto r = invert_embedding(leaf_infinity(g));
    REQUIRE(std::holds_alternative<DivisorGeodesic>(r));
    const GeodesicFrame h = std::get<DivisorGeodesic>(r).frame;
    CHECK((leaf_infinity(h).approx_equal(leaf_infinity(g), 1e-9) || leaf_zero(h).approx_equal(leaf_infinity(g), 1e-9)));
  }
}

TEST_CASE("complex Hessian of the potential is the product Fubini-Study metric") {
  std::mt19937_64 rng(10);
  for (int k = 0; k < 30; ++k) {
    const int n = 1 + k % 2;
    const GeodesicFrame f = random_frame(n, rng);
    const ProductPoint p = leaf_map(f, {uniform(rng, 0.0, 6.0), uniform(rng, 0.3, 2.0)});
    const AffineChart chart = chart_for(p);
    const ChartField rho = [&](const CVector& c) { return kahler_potential(point_from_chart(c, chart, n)); };
    const CVector c = chart_coordinates(p, chart);
    CHECK((levi_form(rho, c).form - product_fs_metric(c)).cwiseAbs().maxCoeff() < 1e-5);
  }
}

TEST_CASE("json round trip") {
  std::mt19937_64 rng(12);
  const ProductPoint p(random_point(2, rng), random_point(2, rng));
  CHECK(product_point_from_json(to_json(p)).approx_equal(p, 1e-15));
  const GeodesicFrame f = random_frame(2, rng);
  const GeodesicFrame g = geodesic_frame_from_json(to_json(f));
  CHECK((g.z() - f.z()).norm() < 1e-15);
  CHECK(to_json(p).dump() == to_json(ProductPoint(cd(0, 1) * p.first().rep(), p.second().rep())).dump());
}
