#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "symmetra/perm_group.hpp"
#include "symmetra/star_algebra.hpp"

using namespace symmetra;

namespace {

GroupAction symmetric_group(int n) {
  GroupAction g;
  g.n = n;
  std::vector<int> swap01(n), cycle(n);
  for (int i = 0; i < n; ++i) {
    swap01[i] = i;
    cycle[i] = (i + 1) % n;
  }
  std::swap(swap01[0], swap01[1]);
  g.generators = {Permutation(swap01), Permutation(cycle)};
  return g;
}

std::vector<int> sorted(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  return v;
}

MatD unit(int n, int i, int j) {
  MatD E = MatD::Zero(n, n);
  E(i, j) = 1.0;
  return E;
}

}  // namespace

TEST_CASE("regular representation of the two-orbit algebra") {
  const auto o = pair_orbits(symmetric_group(3));
  const auto sc = structure_constants(o);
  const auto rep = regular_rep(sc);
  REQUIRE(rep.M == 2);

  CHECK((rep.L[0] - MatD::Identity(2, 2)).norm() == doctest::Approx(0.0));
  MatD expected(2, 2);
  const double rt2 = std::sqrt(2.0);
  expected << 0.0, rt2, rt2, 1.0;
  CHECK((rep.L[1] - expected).norm() == doctest::Approx(0.0).epsilon(1e-12));

  Eigen::SelfAdjointEigenSolver<MatD> eig(rep.L[1]);
  CHECK(eig.eigenvalues()[0] == doctest::Approx(-1.0));
  CHECK(eig.eigenvalues()[1] == doctest::Approx(2.0));

  Mat<long long> P = rep.integer_conjugate(1);
  CHECK(P(0, 0) == 0);
  CHECK(P(0, 1) == 2);
  CHECK(P(1, 0) == 1);
  CHECK(P(1, 1) == 1);

  // conjugated representation is multiplicative over the integers
  const auto P0 = rep.integer_conjugate(0);
  Mat<long long> prod = P * P;  // L(C_1)L(C_1) = 2 L(C_0) + L(C_1)
  Mat<long long> want = 2LL * P0 + P;
  CHECK((prod - want).cwiseAbs().maxCoeff() == 0);
}

TEST_CASE("integer conjugates stay multiplicative for a dihedral algebra") {
  GroupAction g;
  g.n = 12;
  std::vector<int> rot(12), refl(12);
  for (int i = 0; i < 12; ++i) {
    rot[i] = (i + 1) % 12;
    refl[i] = (12 - i) % 12;
  }
  g.generators = {Permutation(rot), Permutation(refl)};
  const auto o = pair_orbits(g);
  const auto sc = structure_constants(o);
  const auto rep = regular_rep(sc);

  std::vector<Mat<long long>> P;
  for (int r = 0; r < rep.M; ++r) {
    P.push_back(rep.integer_conjugate(r));
    // entries of D^{-1} L D round to integers essentially exactly
    for (int s = 0; s < rep.M; ++s)
      for (int t = 0; t < rep.M; ++t) {
        const double v = rep.L[r](s, t) *
                         std::sqrt(static_cast<double>(rep.norms_squared[t]) /
                                   static_cast<double>(rep.norms_squared[s]));
        CHECK(std::abs(v - std::llround(v)) < 1e-9);
      }
  }
  for (int r = 0; r < rep.M; ++r)
    for (int s = 0; s < rep.M; ++s) {
      Mat<long long> lhs = P[r] * P[s];
      Mat<long long> rhs = Mat<long long>::Zero(rep.M, rep.M);
      for (const auto& [t, v] : sc.product(r, s)) rhs += v * P[t];
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() == 0);
    }
}

TEST_CASE("block diagonalization of the two-orbit algebra is real") {
  const auto o = pair_orbits(symmetric_group(3));
  const auto sc = structure_constants(o);
  const auto basis = AlgebraBasis::from_orbits(o);
  const auto bd = block_diagonalize(basis, 1);

  REQUIRE(bd.d == 2);
  CHECK(bd.block_sizes == std::vector<int>{1, 1});
  CHECK(sorted(bd.multiplicities) == std::vector<int>{1, 2});
  CHECK(bd.kernel_dimension == 0);
  CHECK(bd.residual < 1e-9);
  CHECK(bd.real_images());

  // images of J - I are its two distinct eigenvalues 2 and -1
  std::vector<double> vals = {bd.images[1][0](0, 0).real(),
                              bd.images[1][1](0, 0).real()};
  std::sort(vals.begin(), vals.end());
  CHECK(vals[0] == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(vals[1] == doctest::Approx(2.0).epsilon(1e-9));

  const auto rep1 = verify_star_isomorphism(basis, bd, 1e-7, &sc);
  CHECK(rep1.pass);
  const auto rep2 = verify_star_isomorphism(basis, bd, 1e-7);
  CHECK(rep2.pass);
}

TEST_CASE("matrix units from the trivial group give one full block") {
  GroupAction g;
  g.n = 2;
  g.generators = {Permutation::identity(2)};
  const auto o = pair_orbits(g);
  const auto sc = structure_constants(o);
  const auto basis = AlgebraBasis::from_orbits(o);
  const auto bd = block_diagonalize(basis, 5);

  REQUIRE(bd.d == 1);
  CHECK(bd.block_sizes == std::vector<int>{2});
  CHECK(bd.multiplicities == std::vector<int>{1});
  CHECK(bd.kernel_dimension == 0);
  CHECK(verify_star_isomorphism(basis, bd, 1e-7, &sc).pass);
  CHECK(verify_star_isomorphism(basis, bd).pass);
}

TEST_CASE("one transposition splits a 2x2 and a 1x1 block") {
  GroupAction g;
  g.n = 3;
  g.generators = {Permutation({1, 0, 2})};
  const auto o = pair_orbits(g);
  REQUIRE(o.M == 5);
  const auto sc = structure_constants(o);
  const auto basis = AlgebraBasis::from_orbits(o);
  const auto bd = block_diagonalize(basis, 3);

  REQUIRE(bd.d == 2);
  CHECK(sorted(bd.block_sizes) == std::vector<int>{1, 2});
  CHECK(bd.multiplicities == std::vector<int>{1, 1});
  CHECK(bd.kernel_dimension == 0);
  CHECK(bd.real_images());
  CHECK(verify_star_isomorphism(basis, bd, 1e-7, &sc).pass);
}

TEST_CASE("cyclic shifts need complex one-dimensional blocks") {
  GroupAction g;
  g.n = 4;
  g.generators = {Permutation({1, 2, 3, 0})};
  const auto o = pair_orbits(g);
  REQUIRE(o.M == 4);
  const auto sc = structure_constants(o);
  const auto basis = AlgebraBasis::from_orbits(o);
  const auto bd = block_diagonalize(basis, 1);

  REQUIRE(bd.d == 4);
  CHECK(bd.block_sizes == std::vector<int>{1, 1, 1, 1});
  CHECK(bd.multiplicities == std::vector<int>{1, 1, 1, 1});
  CHECK(!bd.real_images());
  CHECK(verify_star_isomorphism(basis, bd, 1e-7, &sc).pass);

  // the one-step shift maps to the four 4th roots of unity
  std::vector<Cplx> roots;
  for (int k = 0; k < 4; ++k) roots.push_back(bd.images[1][k](0, 0));
  for (const Cplx& z : roots) CHECK(std::abs(std::abs(z) - 1.0) < 1e-8);
  auto count_near = [&](Cplx w) {
    int c = 0;
    for (const Cplx& z : roots)
      if (std::abs(z - w) < 1e-6) ++c;
    return c;
  };
  CHECK(count_near({1, 0}) == 1);
  CHECK(count_near({-1, 0}) == 1);
  CHECK(count_near({0, 1}) == 1);
  CHECK(count_near({0, -1}) == 1);
}

TEST_CASE("span of one diagonal unit has a two-dimensional kernel") {
  const auto basis = AlgebraBasis::from_dense(std::vector<MatD>{unit(3, 1, 1)});
  const auto bd = block_diagonalize(basis, 2);
  REQUIRE(bd.d == 1);
  CHECK(bd.block_sizes == std::vector<int>{1});
  CHECK(bd.multiplicities == std::vector<int>{1});
  CHECK(bd.kernel_dimension == 2);
  CHECK(bd.images[0][0](0, 0).real() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(verify_star_isomorphism(basis, bd).pass);
}

TEST_CASE("a span that is not a *-algebra is rejected") {
  const auto basis = AlgebraBasis::from_dense(std::vector<MatD>{unit(2, 0, 1)});
  CHECK_THROWS_AS(block_diagonalize(basis, 1), NotAnAlgebra);
}

TEST_CASE("verification detects products leaving the span") {
  const auto basis = AlgebraBasis::from_dense(
      std::vector<MatD>{unit(2, 0, 0), unit(2, 0, 1), unit(2, 1, 0)});
  BlockDiagonalization fake;
  fake.M = 3;
  fake.d = 1;
  fake.block_sizes = {2};
  fake.multiplicities = {1};
  fake.images.assign(3, {MatC::Zero(2, 2)});
  CHECK_THROWS_AS(verify_star_isomorphism(basis, fake), NotAnAlgebra);
}

TEST_CASE("square roots stay inside the algebra") {
  const auto o = pair_orbits(symmetric_group(3));
  const auto basis = AlgebraBasis::from_orbits(o);

  // A = 2 C_0 + C_1 = I + J, eigenvalues {4, 1, 1}
  MatC A = (2.0 * o.canonical_matrix(0) + o.canonical_matrix(1)).cast<Cplx>();
  const auto dec = psd_decompose(A, basis);
  CHECK(dec.residual < 1e-9);
  CHECK((dec.B * dec.B - A).norm() < 1e-9);
  // sqrt(I + J) = I + J/3 = (4/3) C_0 + (1/3) C_1
  CHECK(dec.coords[0].real() == doctest::Approx(4.0 / 3.0).epsilon(1e-9));
  CHECK(dec.coords[1].real() == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  CHECK(std::abs(dec.coords[0].imag()) < 1e-10);

  // I - J has eigenvalue -2
  MatC Bad = (o.canonical_matrix(0) - o.canonical_matrix(1)).cast<Cplx>();
  CHECK_THROWS_AS(psd_decompose(Bad, basis), NotPSD);
}

TEST_CASE("seeds are reproducible and recorded") {
  const auto o = pair_orbits(symmetric_group(4));
  const auto basis = AlgebraBasis::from_orbits(o);
  const auto a = block_diagonalize(basis, 42);
  const auto b = block_diagonalize(basis, 42);
  CHECK(a.seed_used == b.seed_used);
  CHECK(a.attempts == b.attempts);
  REQUIRE(a.d == b.d);
  for (int r = 0; r < a.M; ++r)
    for (int k = 0; k < a.d; ++k)
      CHECK((a.images[r][k] - b.images[r][k]).norm() == 0.0);
}
