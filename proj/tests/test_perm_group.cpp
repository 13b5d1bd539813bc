#include <doctest.h>

#include <utility>
#include <vector>

#include "symmetra/perm_group.hpp"

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
  if (n >= 2) std::swap(swap01[0], swap01[1]);
  g.generators = {Permutation(swap01), Permutation(cycle)};
  return g;
}

GroupAction dihedral_group(int n) {
  GroupAction g;
  g.n = n;
  std::vector<int> rot(n), refl(n);
  for (int i = 0; i < n; ++i) {
    rot[i] = (i + 1) % n;
    refl[i] = (n - i) % n;
  }
  g.generators = {Permutation(rot), Permutation(refl)};
  return g;
}

// C_r C_s must equal sum_t p^t_{rs} C_t exactly in integer arithmetic.
void check_products_exact(const PairOrbitStructure& o,
                          const StructureConstants& sc) {
  using MatLL = Mat<long long>;
  std::vector<MatLL> C;
  for (int r = 0; r < o.M; ++r)
    C.push_back(o.canonical_matrix_int(r).cast<long long>());
  for (int r = 0; r < o.M; ++r)
    for (int s = 0; s < o.M; ++s) {
      MatLL lhs = C[r] * C[s];
      MatLL rhs = MatLL::Zero(o.n, o.n);
      for (const auto& [t, v] : sc.product(r, s)) rhs += v * C[t];
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() == 0);
    }
}

}  // namespace

TEST_CASE("permutation basics") {
  Permutation a({1, 2, 0});
  Permutation b({0, 2, 1});
  CHECK(a.compose(b)(1) == a(b(1)));
  CHECK(a.compose(a.inverse()) == Permutation::identity(3));
  CHECK(a.inverse().compose(a) == Permutation::identity(3));
  CHECK_THROWS_AS(Permutation({0, 0, 1}), Error);
  CHECK_THROWS_AS(Permutation({0, 3}), Error);
}

TEST_CASE("pair orbits of the full symmetric group") {
  const auto o = pair_orbits(symmetric_group(3));
  REQUIRE(o.M == 2);
  CHECK(o.orbit_sizes == std::vector<long long>{3, 6});
  CHECK(o.orbit_is_diagonal(0));
  CHECK(!o.orbit_is_diagonal(1));
  CHECK(o.transpose_map == std::vector<int>{0, 1});
  CHECK(o.representative[0] == std::pair<int, int>{0, 0});
  CHECK(o.representative[1] == std::pair<int, int>{0, 1});

  const auto sc = structure_constants(o);
  CHECK(sc.p_of(0, 0, 0) == 1);
  CHECK(sc.p_of(0, 1, 1) == 1);
  CHECK(sc.p_of(1, 0, 1) == 1);
  CHECK(sc.p_of(1, 1, 0) == 2);  // (J-I)^2 = 2I + (J-I) on 3 points
  CHECK(sc.p_of(1, 1, 1) == 1);
  CHECK(sc.p_of(0, 0, 1) == 0);
  check_products_exact(o, sc);
}

TEST_CASE("cyclic action separates the two shift orbits") {
  GroupAction g;
  g.n = 3;
  g.generators = {Permutation({1, 2, 0})};
  const auto o = pair_orbits(g);
  REQUIRE(o.M == 3);
  CHECK(o.orbit_sizes == std::vector<long long>{3, 3, 3});
  CHECK(o.transpose_map == std::vector<int>{0, 2, 1});

  const auto sc = structure_constants(o);
  CHECK(sc.p_of(1, 2, 0) == 1);  // shift times its inverse is the identity
  CHECK(sc.p_of(1, 1, 2) == 1);
  CHECK(sc.p_of(1, 1, 0) == 0);
  check_products_exact(o, sc);
}

TEST_CASE("trivial group gives matrix units") {
  GroupAction g;
  g.n = 2;
  g.generators = {Permutation::identity(2)};
  const auto o = pair_orbits(g);
  REQUIRE(o.M == 4);
  for (int r = 0; r < 4; ++r) CHECK(o.orbit_sizes[r] == 1);
  for (int r = 0; r < 4; ++r) CHECK(o.second_representative[r].first == -1);
  const auto sc = structure_constants(o);
  // E_ij E_kl = [j==k] E_il; ids in row-major order
  auto id = [&](int i, int j) { return o.orbit_id(i, j); };
  CHECK(sc.p_of(id(0, 1), id(1, 0), id(0, 0)) == 1);
  CHECK(sc.p_of(id(0, 1), id(0, 1), id(0, 0)) == 0);
  CHECK(sc.product(id(0, 1), id(0, 0)).empty());
  check_products_exact(o, sc);
}

TEST_CASE("dihedral action on a 10-cycle") {
  const auto o = pair_orbits(dihedral_group(10));
  REQUIRE(o.M == 6);  // distance classes 0..5
  CHECK(o.orbit_sizes == std::vector<long long>{10, 20, 20, 20, 20, 10});
  for (int r = 0; r < o.M; ++r) CHECK(o.transpose_map[r] == r);
  check_products_exact(o, structure_constants(o));
}

TEST_CASE("larger symmetric and dihedral instances stay exact") {
  check_products_exact(pair_orbits(symmetric_group(7)),
                       structure_constants(pair_orbits(symmetric_group(7))));
  const auto o = pair_orbits(dihedral_group(24));
  check_products_exact(o, structure_constants(o));
  CHECK(o.M == 13);
}

TEST_CASE("group averaging is the invariant projection") {
  const auto g = dihedral_group(8);
  const auto o = pair_orbits(g);
  Rng rng(7);
  MatD X(8, 8);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) X(i, j) = rng.sym();

  const MatD avg = group_average(o, X);
  for (const auto& gen : g.generators)
    CHECK((conjugate_by(gen, avg) - avg).cwiseAbs().maxCoeff() ==
          doctest::Approx(0.0).epsilon(1e-13));
  CHECK((group_average(o, avg) - avg).cwiseAbs().maxCoeff() ==
        doctest::Approx(0.0).epsilon(1e-13));
  CHECK((group_average(g, X) - avg).cwiseAbs().maxCoeff() == 0.0);

  // self-adjoint as a projection: <avg X, Y> == <X, avg Y>
  MatD Y(8, 8);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) Y(i, j) = rng.sym();
  const double lhs = (avg.cwiseProduct(Y)).sum();
  const double rhs = (X.cwiseProduct(group_average(o, Y))).sum();
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));

  // invariant matrices are fixed points
  CHECK((group_average(o, o.canonical_matrix(2)) - o.canonical_matrix(2))
            .cwiseAbs()
            .maxCoeff() == 0.0);
}

TEST_CASE("representative audit rejects a partition that is not from a group") {
  // Hand-built partition of 3x3 pairs: diagonal, a 4-element class, and a
  // 2-element class.  Counting paths from (0,0) and from (1,1) disagrees.
  PairOrbitStructure o;
  o.n = 3;
  o.M = 3;
  o.orbit_id.resize(3, 3);
  o.orbit_id << 0, 1, 1, 1, 0, 2, 1, 2, 0;
  o.orbit_sizes = {3, 4, 2};
  o.transpose_map = {0, 1, 2};
  o.representative = {{0, 0}, {0, 1}, {1, 2}};
  o.second_representative = {{1, 1}, {0, 2}, {2, 1}};
  CHECK_THROWS_AS(structure_constants(o), RepresentativeMismatch);
  CHECK_NOTHROW(structure_constants(o, false));
}
