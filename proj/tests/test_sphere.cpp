#include "symmetra/sphere.hpp"

#include <cmath>
#include <vector>

#include "doctest.h"
#include "symmetra/hamming.hpp"
#include "symmetra/types.hpp"

using namespace symmetra;

namespace {

constexpr double kPi = 3.14159265358979323846;

double gauss(Rng& rng) {
  const double u1 = std::max(rng.uniform(), 1e-300);
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

std::vector<VecD> random_unit_points(int n, int count, Rng& rng) {
  std::vector<VecD> pts;
  for (int i = 0; i < count; ++i) {
    VecD x(n);
    for (int j = 0; j < n; ++j) x[j] = gauss(rng);
    pts.push_back(x / x.norm());
  }
  return pts;
}

// vertices of the regular icosahedron; min pairwise angle arccos(1/sqrt 5)
std::vector<VecD> icosahedron() {
  const double phi = 0.5 * (1.0 + std::sqrt(5.0));
  std::vector<VecD> pts;
  for (int cyc = 0; cyc < 3; ++cyc)
    for (double s1 : {-1.0, 1.0})
      for (double s2 : {-1.0, 1.0}) {
        VecD x = VecD::Zero(3);
        x[cyc] = 0.0;
        x[(cyc + 1) % 3] = s1;
        x[(cyc + 2) % 3] = s2 * phi;
        pts.push_back(x / x.norm());
      }
  return pts;
}

double max_pair_cosine(const std::vector<VecD>& pts) {
  double m = -1.0;
  for (std::size_t a = 0; a < pts.size(); ++a)
    for (std::size_t b = a + 1; b < pts.size(); ++b)
      m = std::max(m, pts[a].dot(pts[b]));
  return m;
}

double lambda_min(const MatD& m) {
  return Eigen::SelfAdjointEigenSolver<MatD>(m).eigenvalues().minCoeff();
}

}  // namespace

TEST_CASE("normalized jacobi values match hand-expanded polynomials") {
  CHECK(jacobi(0, 0.37, 1.2, -0.3) == 1.0);

  for (double al : {-0.5, 0.0, 0.5, 2.5})
    for (double be : {-0.5, 0.0, 1.0})
      for (double t : {-1.0, -0.2, 0.4, 1.0})
        CHECK(jacobi(1, t, al, be) ==
              doctest::Approx(((al + be + 2.0) * t + al - be) /
                              (2.0 * (al + 1.0)))
                  .epsilon(1e-14));

  // Legendre (n = 3) through degree 6
  for (double t : {-0.9, -0.5, 0.0, 0.3, 0.71, 1.0}) {
    const double t2 = t * t;
    CHECK(jacobi_sphere(3, 2, t) ==
          doctest::Approx((3.0 * t2 - 1.0) / 2.0).epsilon(1e-13));
    CHECK(jacobi_sphere(3, 3, t) ==
          doctest::Approx((5.0 * t2 - 3.0) * t / 2.0).epsilon(1e-13));
    CHECK(jacobi_sphere(3, 4, t) ==
          doctest::Approx((35.0 * t2 * t2 - 30.0 * t2 + 3.0) / 8.0)
              .epsilon(1e-13));
    CHECK(jacobi_sphere(3, 5, t) ==
          doctest::Approx((63.0 * t2 * t2 - 70.0 * t2 + 15.0) * t / 8.0)
              .epsilon(1e-13));
    CHECK(jacobi_sphere(3, 6, t) ==
          doctest::Approx(
              (231.0 * t2 * t2 * t2 - 315.0 * t2 * t2 + 105.0 * t2 - 5.0) /
              16.0)
              .epsilon(1e-13));
  }

  // n = 2 gives cos(k theta); alpha = beta = 1/2 gives the normalized
  // second-kind family sin((k+1)theta)/((k+1) sin theta)
  for (double th : {0.3, 1.1, 2.5})
    for (int k = 0; k <= 6; ++k) {
      CHECK(jacobi_sphere(2, k, std::cos(th)) ==
            doctest::Approx(std::cos(k * th)).epsilon(1e-12));
      CHECK(jacobi(k, std::cos(th), 0.5, 0.5) ==
            doctest::Approx(std::sin((k + 1) * th) /
                            ((k + 1) * std::sin(th)))
                .epsilon(1e-12));
      // an asymmetric classical pair: (-1/2, 1/2) is cos((2k+1)x/2)/cos(x/2)
      CHECK(jacobi(k, std::cos(th), -0.5, 0.5) ==
            doctest::Approx(std::cos((2 * k + 1) * th / 2.0) /
                            std::cos(th / 2.0))
                .epsilon(1e-12));
    }

  // the normalization anchor and the parity at -1
  for (int n : {2, 3, 4, 5, 8, 13, 24})
    for (int k = 0; k <= 50; ++k) {
      CHECK(jacobi_sphere(n, k, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(jacobi_sphere(n, k, -1.0) ==
            doctest::Approx(k % 2 ? -1.0 : 1.0).epsilon(1e-13));
    }

  // one sweep returns the same numbers as the pointwise calls
  const VecD row = jacobi_row(12, -0.37, 1.5, 0.25);
  for (int k = 0; k <= 12; ++k)
    CHECK(row[k] == doctest::Approx(jacobi(k, -0.37, 1.5, 0.25))
                        .epsilon(1e-14));

  CHECK_THROWS_AS(jacobi(-1, 0.0, 0.0, 0.0), Error);
  CHECK_THROWS_AS(jacobi(2, 0.0, -1.0, 0.0), Error);
  CHECK_THROWS_AS(jacobi_sphere(1, 2, 0.5), Error);
}

TEST_CASE("harmonic dimensions count spherical harmonics") {
  for (int n = 2; n <= 10; ++n) {
    CHECK(harmonic_dimension(n, 0) == 1);
    CHECK(harmonic_dimension(n, 1) == n);
    if (n >= 3)
      CHECK(harmonic_dimension(n, 2) ==
            static_cast<long long>(n) * (n + 1) / 2 - 1);
  }
  for (int k = 0; k <= 10; ++k) {
    CHECK(harmonic_dimension(3, k) == 2 * k + 1);
    CHECK(harmonic_dimension(2, k) == (k == 0 ? 1 : 2));
  }
  // the degrees up to d fill the polynomial functions of degree up to d
  for (int n = 2; n <= 8; ++n)
    for (int d = 0; d <= 10; ++d) {
      long long sum = 0;
      for (int k = 0; k <= d; ++k) sum += harmonic_dimension(n, k);
      CHECK(sum == binomial(n + d - 1, d) + binomial(n + d - 2, d - 1));
    }
  CHECK_THROWS_AS(harmonic_dimension(1, 2), Error);
}

TEST_CASE("zonal matrices of random point sets are positive semidefinite") {
  Rng rng(20240817);
  for (int n : {3, 4, 6}) {
    const auto pts = random_unit_points(n, 40, rng);
    for (int k = 1; k <= 8; ++k) {
      MatD g(40, 40);
      for (int a = 0; a < 40; ++a)
        for (int b = 0; b < 40; ++b)
          g(a, b) = jacobi_sphere(n, k, pts[a].dot(pts[b]));
      CHECK(lambda_min(g) >= -1e-9);
    }
  }
}

TEST_CASE("Y matrices follow their closed forms") {
  Rng rng(7);
  const int n = 5, d = 7;
  for (int trial = 0; trial < 12; ++trial) {
    const double u = rng.sym(), v = rng.sym(), t = rng.sym();

    // k = 0 is the rank-one power matrix
    const MatD y0 = yk_eval(n, d, 0, u, v, t);
    for (int i = 0; i <= d; ++i)
      for (int j = 0; j <= d; ++j)
        CHECK(y0(i, j) == doctest::Approx(std::pow(u, i) * std::pow(v, j))
                              .epsilon(1e-12));

    for (int k = 1; k <= d; ++k) {
      // transpose exchange of the first two arguments
      const MatD a = yk_eval(n, d, k, u, v, t);
      const MatD b = yk_eval(n, d, k, v, u, t);
      CHECK((a - b.transpose()).cwiseAbs().maxCoeff() <= 1e-12);

      // interior points match the square-root form evaluated directly
      const double w2 = (1.0 - u * u) * (1.0 - v * v);
      const double z = (t - u * v) / std::sqrt(w2);
      const double direct =
          std::pow(w2, k / 2.0) * jacobi(k, z, 0.5 * (n - 4.0), 0.5 * (n - 4.0));
      CHECK(qk_eval(n, k, u, v, t) ==
            doctest::Approx(direct).epsilon(1e-10));
    }
  }

  // the diagonal slice u = v, t = 1
  for (double u : {-0.8, -0.3, 0.2, 0.9, 1.0})
    for (int k = 0; k <= d; ++k) {
      const MatD y = yk_eval(n, d, k, u, u, 1.0);
      for (int i = 0; i <= d - k; ++i)
        for (int j = 0; j <= d - k; ++j)
          CHECK(y(i, j) == doctest::Approx(std::pow(u, i + j) *
                                           std::pow(1.0 - u * u, k))
                               .epsilon(1e-11));
    }

  // |u| = 1 needs no special casing and joins the limit continuously
  for (int k = 1; k <= 5; ++k) {
    const double v = 0.4, t = -0.6;
    const double at_edge = qk_eval(4, k, 1.0, v, t);
    const double near_edge = qk_eval(4, k, 1.0 - 1e-10, v, t);
    CHECK(at_edge == doctest::Approx(near_edge).epsilon(1e-6));
    CHECK(std::isfinite(at_edge));
  }
  CHECK_THROWS_AS(qk_eval(2, 1, 0.0, 0.0, 0.0), Error);
}

TEST_CASE("symmetrized S matrices: corner identities and invariance") {
  const int n = 5, d = 6;
  const MatD s0 = sk_eval(n, d, 0, 1.0, 1.0, 1.0);
  CHECK((s0 - MatD::Ones(d + 1, d + 1)).cwiseAbs().maxCoeff() <= 1e-13);
  for (int k = 1; k <= d; ++k)
    CHECK(sk_eval(n, d, k, 1.0, 1.0, 1.0).cwiseAbs().maxCoeff() <= 1e-13);

  Rng rng(11);
  for (int trial = 0; trial < 6; ++trial) {
    const double u = rng.sym(), v = rng.sym(), t = rng.sym();
    for (int k = 0; k <= d; ++k) {
      const MatD s = sk_eval(n, d, k, u, v, t);
      CHECK((s - s.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
      const double scale = 1.0 + s.cwiseAbs().maxCoeff();
      for (const auto& perm :
           {sk_eval(n, d, k, v, u, t), sk_eval(n, d, k, u, t, v),
            sk_eval(n, d, k, t, v, u), sk_eval(n, d, k, v, t, u)})
        CHECK((s - perm).cwiseAbs().maxCoeff() <= 1e-12 * scale);
    }
  }
}

TEST_CASE("pair evaluations contracted with psd F stay psd") {
  Rng rng(321);
  const int n = 4, d = 5, m = 30;
  const auto pts = random_unit_points(n, m, rng);
  VecD e = VecD::Zero(n);
  e[0] = 1.0;

  std::vector<MatD> F;
  for (int k = 0; k <= d; ++k) {
    MatD r(d - k + 1, d - k + 1);
    for (int i = 0; i < r.rows(); ++i)
      for (int j = 0; j < r.cols(); ++j) r(i, j) = rng.sym();
    F.push_back(r * r.transpose());
  }

  MatD M(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      double val = 0.0;
      for (int k = 0; k <= d; ++k)
        val += F[k]
                   .cwiseProduct(yk_eval(n, d, k, e.dot(pts[a]), e.dot(pts[b]),
                                         pts[a].dot(pts[b])))
                   .sum();
      M(a, b) = val;
    }
  CHECK((M - M.transpose()).cwiseAbs().maxCoeff() <= 1e-10 * M.norm());
  CHECK(lambda_min(M) >= -1e-8 * (1.0 + M.norm()));
}

TEST_CASE("sphere LP bound: grid and sos modes agree and dominate codes") {
  // the icosahedron realizes 12 points at min angle arccos(1/sqrt 5) > 60 deg
  auto code = icosahedron();
  REQUIRE(code.size() == 12);
  Rng rng(99);
  MatD R(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) R(i, j) = gauss(rng);
  const MatD Q = Eigen::HouseholderQR<MatD>(R).householderQ();
  for (auto& x : code) x = Q * x;
  CHECK(max_pair_cosine(code) <= std::cos(kPi / 3.0) + 1e-12);

  const SphereBound sos8 = delsarte_lp_sphere(3, kPi / 3.0, 8, CertifyMode::Sos);
  CHECK(sos8.certified);
  CHECK(sos8.value >= 12.0 - 1e-6);

  const SphereBound grid8 =
      delsarte_lp_sphere(3, kPi / 3.0, 8, CertifyMode::Grid);
  CHECK(grid8.value == doctest::Approx(sos8.value).epsilon(5e-4));
  CHECK(grid8.audit_violation <= 1e-2);

  // more degrees of freedom can only help
  const SphereBound sos4 = delsarte_lp_sphere(3, kPi / 3.0, 4, CertifyMode::Sos);
  const SphereBound sos6 = delsarte_lp_sphere(3, kPi / 3.0, 6, CertifyMode::Sos);
  CHECK(sos4.value >= sos6.value - 1e-7);
  CHECK(sos6.value >= sos8.value - 1e-7);
  CHECK(sos8.f.minCoeff() >= -1e-9);
}

TEST_CASE("sphere LP: dimension 8 at degree 11 gives the classical value") {
  const SphereBound b = delsarte_lp_sphere(8, kPi / 3.0, 11, CertifyMode::Sos);
  CHECK(b.certified);
  CHECK(b.value >= 240.0 - 1e-4);
  CHECK(b.value <= 240.01);
}

TEST_CASE("sphere LP: infeasible truncation reports +infinity") {
  const SphereBound b = delsarte_lp_sphere(4, kPi / 3.0, 1, CertifyMode::Sos);
  CHECK(std::isinf(b.value));
  CHECK_FALSE(b.certified);
  REQUIRE_FALSE(b.warnings.empty());
  CHECK(b.warnings.back().find("raise d") != std::string::npos);
  CHECK_THROWS_AS(delsarte_lp_sphere(3, kPi / 3.0, 0), Error);
}

TEST_CASE("theta2 for an avoided angle") {
  // n = 3 at 90 degrees: the Legendre minimum at 0 is P_2(0) = -1/2
  const AngleAvoidance a3 = theta2_avoid_angle(3, kPi / 2.0);
  CHECK(a3.min_value == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(a3.argmin == 2);
  CHECK(a3.tail_ok);
  CHECK(a3.value == doctest::Approx(1.0 / 3.0).epsilon(1e-9));

  // n = 4 at 90 degrees: U_k(0)/(k+1) has minimum -1/3 at k = 2
  const AngleAvoidance a4 = theta2_avoid_angle(4, kPi / 2.0);
  CHECK(a4.value == doctest::Approx(0.25).epsilon(1e-9));

  // the antipodal angle: odd degrees give -1 exactly
  const AngleAvoidance ap = theta2_avoid_angle(5, kPi);
  CHECK(ap.min_value == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(ap.value == doctest::Approx(0.5).epsilon(1e-9));

  for (double th : {0.5, 1.0, 2.0, 2.8}) {
    const AngleAvoidance av = theta2_avoid_angle(3, th);
    CHECK(av.value > 0.0);
    CHECK(av.value < 1.0);
  }

  // a nearly-zero angle has no negative zonal value in any finite range
  CHECK_THROWS_AS(theta2_avoid_angle(3, 1e-4), NoNegativeValue);
}

TEST_CASE("three point bound tightens the pair bound and dominates codes") {
  const ThreePointBound b = three_point_sdp(3, kPi / 3.0, 7, 40, 200);
  CHECK(b.audit_passed);
  CHECK(b.grid_rows == 200 + 40 * 41 * 42 / 6);
  CHECK(b.value >= 12.0 - 1e-6);  // the icosahedron again
  const SphereBound lp = delsarte_lp_sphere(3, kPi / 3.0, 7, CertifyMode::Sos);
  CHECK(b.value <= lp.value + 0.1);
  for (const auto& Fk : b.F) CHECK(lambda_min(Fk) >= -1e-7 * (1.0 + Fk.norm()));

  // wide separation: at most two points fit, and the program knows it
  const ThreePointBound t2 = three_point_sdp(3, 165.0 * kPi / 180.0, 3, 24, 60);
  CHECK(t2.audit_passed);
  CHECK(t2.value >= 2.0 - 1e-6);
  CHECK(t2.value <= 2.8);

  CHECK_THROWS_AS(three_point_sdp(2, kPi / 3.0, 5), Error);
  CHECK_THROWS_AS(three_point_sdp(3, kPi / 3.0, 5, 30, 100, -1.0), Error);
}
