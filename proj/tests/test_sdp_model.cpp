#include <doctest.h>

#include <cmath>

#include "symmetra/sdp_model.hpp"

using namespace symmetra;

namespace {

MatI cycle_adjacency(int n) {
  MatI adj = MatI::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    adj(i, (i + 1) % n) = 1;
    adj((i + 1) % n, i) = 1;
  }
  return adj;
}

GroupAction pentagon_symmetries() {
  GroupAction g;
  g.n = 5;
  g.generators.push_back(Permutation({1, 2, 3, 4, 0}));
  g.generators.push_back(Permutation({0, 4, 3, 2, 1}));
  return g;
}

}  // namespace

TEST_CASE("clique-bound program on the 5-cycle reaches sqrt(5)") {
  const double target = std::sqrt(5.0);
  const MatrixSDP sdp = build_theta_prime(cycle_adjacency(5));

  const SDPAProblem dual = full_sdp_dual(sdp);
  const auto sol = solve_sdp(dual);
  REQUIRE(sol.status == SdpStatus::Optimal);
  CHECK(sol.primal_value == doctest::Approx(target).epsilon(1e-6));
}

TEST_CASE("orbit restriction contracts the 5-cycle program") {
  const MatrixSDP sdp = build_theta_prime(cycle_adjacency(5));
  const auto orbits = pair_orbits(pentagon_symmetries());
  REQUIRE(orbits.M == 3);

  const InvariantSDP inv = restrict_to_invariant(sdp, orbits);
  CHECK(inv.obj[0] == doctest::Approx(5.0));
  CHECK(inv.obj[1] + inv.obj[2] == doctest::Approx(20.0));
  CHECK(inv.entrywise_nonneg);
  // trace row plus one row per edge, all three orbits self-transposed
  CHECK(inv.eq.rows() == 6);
  CHECK(inv.eq_rhs[0] == doctest::Approx(1.0));
}

TEST_CASE("objective off the invariant subspace is rejected") {
  MatrixSDP sdp = build_theta_prime(cycle_adjacency(5));
  sdp.C(0, 1) += 0.5;
  sdp.C(1, 0) += 0.5;
  CHECK_THROWS_AS(restrict_to_invariant(sdp, pair_orbits(pentagon_symmetries())),
                  NotInvariant);
}

TEST_CASE("regular-representation reduction matches the unreduced value") {
  const double target = std::sqrt(5.0);
  const auto orbits = pair_orbits(pentagon_symmetries());
  const auto sc = structure_constants(orbits);
  const InvariantSDP inv =
      restrict_to_invariant(build_theta_prime(cycle_adjacency(5)), orbits);

  const ReducedSDP red = reduce_regular(inv, sc);
  const auto sol = solve_sdp(red.sdpa);
  REQUIRE(sol.status == SdpStatus::Optimal);
  CHECK(red.value(sol) == doctest::Approx(target).epsilon(1e-6));

  // recovered orbit coordinates satisfy the contracted constraints
  const VecD x = red.recover(sol.x);
  REQUIRE(x.size() == 3);
  CHECK((inv.eq * x - inv.eq_rhs).cwiseAbs().maxCoeff() < 1e-7);
  CHECK(x[0] == doctest::Approx(0.2).epsilon(1e-5));
  CHECK(std::abs(x[1]) < 1e-6);
  CHECK(inv.obj.dot(x) == doctest::Approx(target).epsilon(1e-6));
}

TEST_CASE("both block reductions agree with the regular one") {
  const double target = std::sqrt(5.0);
  const auto orbits = pair_orbits(pentagon_symmetries());
  const auto sc = structure_constants(orbits);
  const auto basis = AlgebraBasis::from_orbits(orbits);
  const auto bd = block_diagonalize(basis);
  const InvariantSDP inv =
      restrict_to_invariant(build_theta_prime(cycle_adjacency(5)), orbits);

  const ReducedSDP coeff =
      reduce_block(inv, basis, bd, BlockMode::Coefficient, &sc);
  const auto sol_c = solve_sdp(coeff.sdpa);
  REQUIRE(sol_c.status == SdpStatus::Optimal);
  CHECK(coeff.value(sol_c) == doctest::Approx(target).epsilon(1e-6));

  const ReducedSDP par =
      reduce_block(inv, basis, bd, BlockMode::Parametrized, &sc);
  const auto sol_p = solve_sdp(par.sdpa);
  REQUIRE(sol_p.status == SdpStatus::Optimal);
  CHECK(par.value(sol_p) == doctest::Approx(target).epsilon(1e-6));

  // parametrized recovery also lands in orbit coordinates
  const VecD xp = par.recover(sol_p.x);
  const VecD xc = coeff.recover(sol_c.x);
  REQUIRE(xp.size() == xc.size());
  CHECK((xp - xc).cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("noncommutative algebra: top eigenvalue through every route") {
  // max <J, X> with tr X = 1 equals the top eigenvalue 3 of the all-ones J
  GroupAction g;
  g.n = 3;
  g.generators.push_back(Permutation({1, 0, 2}));
  const auto orbits = pair_orbits(g);
  REQUIRE(orbits.M == 5);

  MatrixSDP sdp;
  sdp.C = MatD::Ones(3, 3);
  sdp.A.push_back(MatD::Identity(3, 3));
  sdp.b = VecD::Ones(1);
  sdp.maximize = true;

  const auto dual_sol = solve_sdp(full_sdp_dual(sdp));
  REQUIRE(dual_sol.status == SdpStatus::Optimal);
  CHECK(dual_sol.primal_value == doctest::Approx(3.0).epsilon(1e-6));

  const auto sc = structure_constants(orbits);
  const InvariantSDP inv = restrict_to_invariant(sdp, orbits);
  const auto sol_r = solve_sdp(reduce_regular(inv, sc).sdpa);
  REQUIRE(sol_r.status == SdpStatus::Optimal);
  CHECK(-sol_r.primal_value == doctest::Approx(3.0).epsilon(1e-6));

  const auto basis = AlgebraBasis::from_orbits(orbits);
  const auto bd = block_diagonalize(basis);
  for (const BlockMode mode : {BlockMode::Coefficient, BlockMode::Parametrized}) {
    const ReducedSDP red = reduce_block(inv, basis, bd, mode, &sc);
    const auto sol = solve_sdp(red.sdpa);
    REQUIRE(sol.status == SdpStatus::Optimal);
    CHECK(red.value(sol) == doctest::Approx(3.0).epsilon(1e-6));
  }
}

TEST_CASE("corrupted decomposition is refused") {
  const auto orbits = pair_orbits(pentagon_symmetries());
  const auto basis = AlgebraBasis::from_orbits(orbits);
  auto bd = block_diagonalize(basis);
  bd.images[1][0] *= 1.5;

  const InvariantSDP inv =
      restrict_to_invariant(build_theta_prime(cycle_adjacency(5)), orbits);
  CHECK_THROWS_AS(reduce_block(inv, basis, bd), UnverifiedIsomorphism);
}

TEST_CASE("equality elimination with a scalar inequality") {
  // min x0  s.t.  x0 + x1 = 1,  x0 >= 0.3 (as a 1x1 inequality block)
  LinearMatrixProgram p;
  p.n = 2;
  p.c = VecD::Zero(2);
  p.c[0] = 1.0;
  p.E = MatD::Ones(1, 2);
  p.f = VecD::Ones(1);
  LinearMatrixProgram::Lmi lmi;
  lmi.coeff = {MatD::Ones(1, 1), MatD::Zero(1, 1)};
  lmi.rhs = MatD::Constant(1, 1, 0.3);
  p.lmis.push_back(lmi);

  const ReducedSDP red = to_sdpa_form(p);
  CHECK(red.sdpa.m == 1);
  const auto sol = solve_sdp(red.sdpa);
  REQUIRE(sol.status == SdpStatus::Optimal);
  CHECK(red.value(sol) == doctest::Approx(0.3).epsilon(1e-6));
  const VecD x = red.recover(sol.x);
  CHECK(x[0] == doctest::Approx(0.3).epsilon(1e-5));
  CHECK(x[1] == doctest::Approx(0.7).epsilon(1e-5));
}

TEST_CASE("maximization sign convention with inequality rows") {
  // max x0  s.t.  x0 + x1 = 1,  x0 <= 2
  LinearMatrixProgram p;
  p.n = 2;
  p.c = VecD::Zero(2);
  p.c[0] = 1.0;
  p.maximize = true;
  p.E = MatD::Ones(1, 2);
  p.f = VecD::Ones(1);
  p.ineq = MatD::Zero(1, 2);
  p.ineq(0, 0) = -1.0;
  p.ineq_rhs = VecD::Constant(1, -2.0);

  const ReducedSDP red = to_sdpa_form(p);
  CHECK(red.sign == -1.0);
  const auto sol = solve_sdp(red.sdpa);
  REQUIRE(sol.status == SdpStatus::Optimal);
  CHECK(red.value(sol) == doctest::Approx(2.0).epsilon(1e-6));
  const VecD x = red.recover(sol.x);
  CHECK(x[0] == doctest::Approx(2.0).epsilon(1e-5));
  CHECK(x[1] == doctest::Approx(-1.0).epsilon(1e-5));
}

TEST_CASE("rows pinned by the equalities are validated, then dropped") {
  LinearMatrixProgram p;
  p.n = 2;
  p.c = VecD::Ones(2);
  p.E = MatD::Identity(2, 2);
  p.f = VecD::Zero(2);
  p.f[0] = 0.5;
  p.f[1] = 0.25;
  p.nonneg = {0, 1};

  const ReducedSDP red = to_sdpa_form(p);
  CHECK(red.sdpa.m == 0);
  REQUIRE(!red.warnings.empty());
  const auto sol = solve_sdp(red.sdpa);
  CHECK(red.value(sol) == doctest::Approx(0.75));

  LinearMatrixProgram bad = p;
  bad.f[0] = -0.5;
  CHECK_THROWS_AS(to_sdpa_form(bad), Error);
}

TEST_CASE("inconsistent equalities are rejected") {
  LinearMatrixProgram p;
  p.n = 1;
  p.c = VecD::Ones(1);
  p.E = MatD::Ones(2, 1);
  p.E(1, 0) = 2.0;
  p.f = VecD::Ones(2);  // x = 1 and 2x = 1
  CHECK_THROWS_AS(to_sdpa_form(p), Error);
}
