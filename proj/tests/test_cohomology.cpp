#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "zoll/cohomology.hpp"

using namespace zoll;

namespace {

FGAbelianGroup Z(int r = 1) { return FGAbelianGroup::free(r); }
FGAbelianGroup Zmod(long long d) { return FGAbelianGroup::from_cyclic({BigInt(d)}); }
const FGAbelianGroup O = FGAbelianGroup::zero();

// Kunneth for CP^n x CP^n: rank H^{2k} = #{a + b = k, 0 <= a, b <= n}.
CohomologyTable kunneth_X(int n) {
  CohomologyTable t(4 * n + 1);
  for (int k = 0; k <= 2 * n; ++k) t[2 * k] = Z(std::min(k, 2 * n - k) + 1);
  return t;
}

// D = P(T CP^n): a CP^{n-1} bundle over CP^n, so the Poincare polynomial is the product.
CohomologyTable projective_bundle_D(int n) {
  CohomologyTable t(4 * n - 1);
  for (int a = 0; a <= n; ++a)
    for (int b = 0; b <= n - 1; ++b) t[2 * (a + b)] = t[2 * (a + b)] + Z();
  return t;
}

CohomologyTable expected_UM(int n) {
  CohomologyTable t(4 * n);
  for (int j = 0; j <= 2 * n - 2; j += 2) t[j] = Z();
  t[2 * n] = Zmod(n + 1);
  for (int j = 2 * n + 1; j <= 4 * n - 1; j += 2) t[j] = Z();
  return t;
}

IntegerMatrix random_matrix(int rows, int cols, std::mt19937_64& rng, int range) {
  std::uniform_int_distribution<int> dist(-range, range);
  IntegerMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = dist(rng);
  return m;
}

}  // namespace

TEST_CASE("FGAbelianGroup normal form") {
  CHECK(FGAbelianGroup::from_cyclic({2, 3}) == Zmod(6));
  CHECK(FGAbelianGroup::from_cyclic({4, 6, 0, 1}).to_string() == "Z + Z/2 + Z/12");
  CHECK((Zmod(2) + Zmod(2)).torsion_string() == "2;2");
  CHECK(O.to_string() == "0");
  CHECK(Z(2).to_string() == "Z^2");
  CHECK((Z() + Zmod(3)).to_string() == "Z + Z/3");
}

TEST_CASE("Smith normal form examples") {
  const SmithForm a = smith_normal_form({{2, 0}, {0, 3}});
  CHECK(a.S == IntegerMatrix({{1, 0}, {0, 6}}));
  const SmithForm b = smith_normal_form({{3}});
  CHECK(b.diagonal == std::vector<BigInt>{3});
  CHECK(cokernel({{3}}) == Zmod(3));
  const IntegerMatrix zero(2, 3);
  CHECK(smith_normal_form(zero).rank == 0);
  CHECK(cokernel(zero) == Z(2));
  CHECK(kernel_rank(zero) == 3);
}

TEST_CASE("Smith normal form properties") {
  std::mt19937_64 rng(51);
  for (int k = 0; k < 200; ++k) {
    const int r = 1 + static_cast<int>(rng() % 5), c = 1 + static_cast<int>(rng() % 5);
    IntegerMatrix A = random_matrix(r, c, rng, 12);
    if (k % 4 == 0 && r > 1) {  // force a rank drop
      for (int j = 0; j < c; ++j) A(r - 1, j) = 2 * A(0, j) - 3 * A(r - 2, j);
    }
    const SmithForm s = smith_normal_form(A);
    CHECK(s.U * A * s.V == s.S);
    CHECK(s.S.is_diagonal());
    CHECK(abs(s.U.determinant()) == 1);
    CHECK(abs(s.V.determinant()) == 1);
    for (std::size_t i = 0; i + 1 < s.diagonal.size(); ++i) CHECK(s.diagonal[i + 1] % s.diagonal[i] == 0);
    CHECK(smith_normal_form(s.S).S == s.S);
    const IntegerMatrix K = kernel_basis(A);
    CHECK(K.cols() == kernel_rank(A));
    CHECK(kernel_rank(A) == c - s.rank);
    if (K.cols() > 0) CHECK(A * K == IntegerMatrix(r, K.cols()));
  }
}

TEST_CASE("Bareiss determinant") {
  CHECK(IntegerMatrix({{2, 1}, {7, 4}}).determinant() == 1);
  CHECK(IntegerMatrix({{0, 1}, {1, 0}}).determinant() == -1);
  CHECK(IntegerMatrix({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}}).determinant() == 0);
  IntegerMatrix big = IntegerMatrix::identity(3).scaled(BigInt(1) << 100);
  CHECK(big.determinant() == (BigInt(1) << 300));
}

TEST_CASE("sphere Gysin") {
  CHECK(sphere_gysin(cpn_cohomology(2), 3) == CohomologyTable{Z(), O, Z(), O, Zmod(3), Z(), O, Z()});
  CHECK(sphere_gysin(cpn_cohomology(1), 2) == CohomologyTable{Z(), O, Zmod(2), Z()});
  CHECK(sphere_gysin(cpn_cohomology(3), 4)[6] == Zmod(4));
}

TEST_CASE("circle Gysin") {
  const CohomologyTable d2 = circle_gysin(sphere_gysin(cpn_cohomology(2), 3));
  CHECK(d2 == CohomologyTable{Z(), O, Z(2), O, Z(2), O, Z()});
  CHECK(circle_gysin(sphere_gysin(cpn_cohomology(1), 2)) == CohomologyTable{Z(), O, Z()});
  const CohomologyTable d3 = circle_gysin(sphere_gysin(cpn_cohomology(3), 4));
  for (int j = 0; j <= 10; ++j) CHECK(d3[j] == (j % 2 ? O : Z(std::vector<int>{1, 2, 3, 3, 2, 1}[j / 2])));
}

TEST_CASE("Mayer-Vietoris") {
  for (int n = 1; n <= 3; ++n) {
    const CohomologyTable M = cpn_cohomology(n);
    const CohomologyTable UM = sphere_gysin(M, n + 1);
    const CohomologyTable X = mayer_vietoris_X(circle_gysin(UM), M, UM);
    CHECK(X == kunneth_X(n));
    CHECK(X[2 * n + 1].is_zero());
  }
}

TEST_CASE("tables for n = 1..10 against independent closed forms") {
  for (int n = 1; n <= 10; ++n) {
    const CohomologyReport r = compute_cohomology(n);
    CHECK(r.mismatches == 0);
    CHECK(r.UM == expected_UM(n));
    CHECK(r.D == projective_bundle_D(n));
    CHECK(r.X == kunneth_X(n));
    CHECK(r.UM == closed_form_UM(n));
    CHECK(r.D == closed_form_D(n));
    CHECK(r.X == closed_form_X(n));
    CHECK(euler_characteristic(r.X) == (n + 1) * (n + 1));
    CHECK(euler_characteristic(r.D) == n * (n + 1));
    CHECK(euler_characteristic(r.UM) == 0);
  }
}

TEST_CASE("cochain complexes") {
  const CochainComplex rp3 = rp_cochains(3);
  CHECK(cochain_cohomology(rp3.dims, rp3.differentials) == CohomologyTable{Z(), O, Zmod(2), Z()});
  const CochainComplex rp2 = rp_cochains(2);
  CHECK(cochain_cohomology(rp2.dims, rp2.differentials) == CohomologyTable{Z(), O, Zmod(2)});
  const CochainComplex sq = tensor(rp2, rp2);
  for (std::size_t k = 0; k + 1 < sq.differentials.size(); ++k) {
    CHECK(sq.differentials[k + 1] * sq.differentials[k] == IntegerMatrix(sq.dims[k + 2], sq.dims[k]));
  }
  // Kunneth with the Tor term in degree 3
  CHECK(cochain_cohomology(sq.dims, sq.differentials) ==
        CohomologyTable{Z(), O, Zmod(2) + Zmod(2), Zmod(2), Zmod(2)});
}

TEST_CASE("eigenspace argument") {
  const EigenspaceVerdict zero = eigenspace_argument(0);
  CHECK(zero.holds());
  CHECK(zero.eigenspace == IntegerMatrix({{0}, {1}}));
  CHECK(eigenspace_argument(5).holds());
  for (int d = -10; d <= 10; ++d) {
    const EigenspaceVerdict v = eigenspace_argument(d);
    CHECK(v.holds());
    CHECK(v.action * v.action == IntegerMatrix::identity(2));
    const IntegerMatrix image = v.action.transpose() * v.eigenspace;
    CHECK(image == v.eigenspace.scaled(-1));
  }
}
