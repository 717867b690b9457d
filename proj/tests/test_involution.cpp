#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "zoll/error.hpp"
#include "zoll/involution.hpp"

using namespace zoll;

namespace {

// Imaginary part of v after removing the global phase; zero iff [v] is a real point.
double distance_from_real(const CVector& v) {
  const CVector u = canonical_phase(v.normalized());
  return u.imag().norm();
}

cd random_unit(std::mt19937_64& rng) { return std::polar(1.0, std::uniform_real_distribution<double>(0, 2 * M_PI)(rng)); }

}  // namespace

TEST_CASE("involution test examples") {
  const InvolutionTest id = is_involution(AntiholMap(standard_real_structure(2)));
  CHECK(id.involution);
  CHECK(std::abs(id.c - 1.0) < 1e-15);
  const InvolutionTest j = is_involution(AntiholMap(standard_quaternionic_structure(3)));
  CHECK(j.involution);
  CHECK(std::abs(j.c + 1.0) < 1e-15);
  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = 1.0, d(1, 1) = 2.0;
  CHECK(!is_involution(AntiholMap(d)).involution);
  CHECK_THROWS_AS(AntiholMap(CMatrix::Zero(2, 2)), Error);
}

TEST_CASE("involution type examples") {
  CHECK(involution_type(AntiholMap(standard_real_structure(4))) == InvolutionType::Real);
  CHECK(involution_type(AntiholMap(standard_quaternionic_structure(1))) == InvolutionType::Quaternionic);
  std::mt19937_64 rng(61);
  const CMatrix U = random_invertible(3, rng);
  CHECK(involution_type(AntiholMap(CMatrix(U.conjugate().inverse() * U))) == InvolutionType::Real);
  CMatrix d = CMatrix::Identity(2, 2);
  d(1, 1) = 2.0;
  try {
    involution_type(AntiholMap(d));
    FAIL("expected NotInvolution");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotInvolution);
  }
  CHECK(involution_type(AntiholMap(CMatrix(cd(0, 1) * CMatrix::Identity(3, 3)))) == InvolutionType::Real);
}

TEST_CASE("invariance under projective equivalence") {
  std::mt19937_64 rng(62);
  for (int k = 0; k < 200; ++k) {
    const int n = 1 + 2 * static_cast<int>(rng() % 2);  // n + 1 even so both types exist
    const AntiholMap base(k % 2 ? standard_quaternionic_structure(n) : standard_real_structure(n));
    const AntiholMap m = base.conjugated(random_invertible(n + 1, rng), random_unit(rng));
    const InvolutionTest t = is_involution(m);
    CHECK(t.involution);
    CHECK(involution_type(m) == (k % 2 ? InvolutionType::Quaternionic : InvolutionType::Real));
  }
}

TEST_CASE("fixed points of the standard conjugation are real points") {
  std::mt19937_64 rng(63);
  const FixedPointSample s = fixed_points_sample(AntiholMap(standard_real_structure(2)), 2000, rng);
  CHECK(s.count == s.trials);
  CHECK(s.max_fixed_residual < 1e-9);
  REQUIRE(!s.representatives.empty());
  for (const ProjectivePoint& p : s.representatives) CHECK(distance_from_real(p.rep()) < 1e-9);
}

TEST_CASE("quaternionic structure has no fixed points") {
  std::mt19937_64 rng(64);
  const FixedPointSample s = fixed_points_sample(AntiholMap(standard_quaternionic_structure(1)), 100000, rng);
  CHECK(s.trials == 100000);
  CHECK(s.count == 0);
  CHECK(s.min_residual > 0.1);
}

TEST_CASE("fixed points transport under equivalence") {
  std::mt19937_64 rng(65);
  const AntiholMap id(standard_real_structure(2));
  for (int k = 0; k < 10; ++k) {
    const CMatrix B = random_invertible(3, rng);
    const AntiholMap m = id.conjugated(B);
    const FixedPointSample s = fixed_points_sample(m, 500, rng);
    CHECK(s.count > 0);
    CHECK(s.max_fixed_residual < 1e-9);
    for (const ProjectivePoint& p : s.representatives) {
      const CVector image = B * p.rep();
      CHECK(distance_from_real(image) < 1e-8);
      CHECK(fixed_point_residual(id, image.normalized()) < 1e-8);
    }
  }
}

TEST_CASE("product fixed sets contradict the cohomology of CP^n") {
  const AntiholMap r(standard_real_structure(3)), q(standard_quaternionic_structure(3));
  const ProductFixedSet rr = product_involution_fixed_set(r, r);
  CHECK(!rr.empty);
  CHECK(rr.contradiction);
  CHECK(rr.cohomology != cpn_cohomology(3));
  const ProductFixedSet qq = product_involution_fixed_set(q, q);
  CHECK(qq.empty);
  CHECK(qq.contradiction);
  const ProductFixedSet rq = product_involution_fixed_set(r, q);
  CHECK(rq.empty);
  CHECK(rq.contradiction);
  CHECK(rq.first == InvolutionType::Real);
  CHECK(rq.second == InvolutionType::Quaternionic);
  for (int n = 1; n <= 4; ++n) {
    const AntiholMap a(standard_real_structure(n));
    CHECK(product_involution_fixed_set(a, a).contradiction);
  }
}
