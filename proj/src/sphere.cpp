#include "symmetra/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "symmetra/hamming.hpp"

namespace symmetra {

namespace {

// Classical Jacobi recurrence coefficients for step j >= 2:
//   A_j p_j = (B0_j + B1_j t) p_{j-1} - C_j p_{j-2}.
struct JacobiStep {
  double A, B0, B1, C;
  JacobiStep(int j, double al, double be) {
    const double s = 2.0 * j + al + be;
    A = 2.0 * j * (j + al + be) * (s - 2.0);
    B0 = (s - 1.0) * (al * al - be * be);
    B1 = (s - 1.0) * s * (s - 2.0);
    C = 2.0 * (j + al - 1.0) * (j + be - 1.0) * s;
  }
};

void check_jacobi_args(int k, double alpha, double beta) {
  if (k < 0) throw Error("jacobi: negative degree");
  if (!(alpha > -1.0) || !(beta > -1.0))
    throw Error("jacobi: parameters must exceed -1");
}

// Ratios of the normalized recurrence for the symmetric case alpha = beta:
//   P_j = a_j t P_{j-1} - c_j P_{j-2},  a_j - c_j = 1 (values at t=1 are 1).
// Multiplying by ((1-u^2)(1-v^2))^{j/2} turns this into the polynomial
// recurrence used by qk_eval; the odd B0 term vanishes exactly when
// alpha = beta, which is what keeps that rewrite possible.
struct UltraCoeffs {
  VecD a, c;  // valid for indices 2..kmax
};

UltraCoeffs ultra_coeffs(double alpha, int kmax) {
  UltraCoeffs uc;
  const int top = std::max(kmax, 1);
  uc.a = VecD::Zero(top + 1);
  uc.c = VecD::Zero(top + 1);
  double rho = 1.0 / (alpha + 1.0);  // p_{j-2}(1) / p_{j-1}(1)
  for (int j = 2; j <= kmax; ++j) {
    const JacobiStep st(j, alpha, alpha);
    const double D = st.B1 - st.C * rho;
    if (!(D > 0.0)) throw Error("jacobi: degenerate recurrence step");
    uc.a[j] = st.B1 / D;
    uc.c[j] = st.C * rho / D;
    rho = st.A / D;
  }
  return uc;
}

// All of Q_0 .. Q_kmax at one argument triple, given tu = t - uv and
// w2 = (1-u^2)(1-v^2).
void qk_all(const UltraCoeffs& uc, int kmax, double tu, double w2, VecD& out) {
  out.resize(kmax + 1);
  out[0] = 1.0;
  if (kmax >= 1) out[1] = tu;
  for (int j = 2; j <= kmax; ++j)
    out[j] = uc.a[j] * tu * out[j - 1] - uc.c[j] * w2 * out[j - 2];
}

void fill_powers(double x, int top, VecD& p) {
  p.resize(top + 1);
  p[0] = 1.0;
  for (int i = 1; i <= top; ++i) p[i] = p[i - 1] * x;
}

// Chebyshev points of the second kind on [a,b], endpoints included.
VecD cheb_span(double a, double b, int count) {
  if (count < 1) throw Error("grid needs at least one point");
  VecD g(count);
  if (count == 1) {
    g[0] = 0.5 * (a + b);
    return g;
  }
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  const double pi = std::acos(-1.0);
  for (int i = 0; i < count; ++i)
    g[i] = mid - half * std::cos(pi * i / (count - 1.0));
  return g;
}

double spherical_alpha(int n) {
  if (n < 2) throw Error("sphere dimension must be at least 2");
  return 0.5 * (n - 3.0);
}

void check_angle(double theta) {
  if (!(theta > 0.0) || !(theta <= std::acos(-1.0) + 1e-12))
    throw Error("angle must lie in (0, pi]");
}

std::string describe_failure(const SDPSolution& sol) {
  std::string s = "solver stopped with status " + to_string(sol.status);
  if (!sol.message.empty()) s += ": " + sol.message;
  return s;
}

}  // namespace

double jacobi(int k, double t, double alpha, double beta) {
  check_jacobi_args(k, alpha, beta);
  if (k == 0) return 1.0;
  double x2 = 1.0;
  double x1 = ((alpha + beta + 2.0) * t + alpha - beta) / (2.0 * (alpha + 1.0));
  double rho = 1.0 / (alpha + 1.0);
  for (int j = 2; j <= k; ++j) {
    const JacobiStep st(j, alpha, beta);
    const double D = st.B0 + st.B1 - st.C * rho;
    if (!(D > 0.0)) throw Error("jacobi: degenerate recurrence step");
    const double xj = ((st.B0 + st.B1 * t) * x1 - st.C * rho * x2) / D;
    rho = st.A / D;
    x2 = x1;
    x1 = xj;
  }
  return x1;
}

VecD jacobi_row(int kmax, double t, double alpha, double beta) {
  check_jacobi_args(kmax, alpha, beta);
  VecD out(kmax + 1);
  out[0] = 1.0;
  if (kmax == 0) return out;
  out[1] = ((alpha + beta + 2.0) * t + alpha - beta) / (2.0 * (alpha + 1.0));
  double rho = 1.0 / (alpha + 1.0);
  for (int j = 2; j <= kmax; ++j) {
    const JacobiStep st(j, alpha, beta);
    const double D = st.B0 + st.B1 - st.C * rho;
    if (!(D > 0.0)) throw Error("jacobi: degenerate recurrence step");
    out[j] = ((st.B0 + st.B1 * t) * out[j - 1] - st.C * rho * out[j - 2]) / D;
    rho = st.A / D;
  }
  return out;
}

double jacobi_sphere(int n, int k, double t) {
  const double al = spherical_alpha(n);
  return jacobi(k, t, al, al);
}

long long harmonic_dimension(int n, int k) {
  if (n < 2 || k < 0) throw Error("harmonic_dimension: need n >= 2, k >= 0");
  return binomial(n + k - 1, k) - binomial(n + k - 3, k - 2);
}

double qk_eval(int n, int k, double u, double v, double t) {
  if (n < 3) throw Error("qk_eval: needs n >= 3");
  if (k < 0) throw Error("qk_eval: negative degree");
  const UltraCoeffs uc = ultra_coeffs(0.5 * (n - 4.0), k);
  VecD q;
  qk_all(uc, k, t - u * v, (1.0 - u * u) * (1.0 - v * v), q);
  return q[k];
}

MatD yk_eval(int n, int d, int k, double u, double v, double t) {
  if (k < 0 || k > d) throw Error("yk_eval: need 0 <= k <= d");
  const double q = qk_eval(n, k, u, v, t);
  const int sz = d - k + 1;
  VecD pu, pv;
  fill_powers(u, sz - 1, pu);
  fill_powers(v, sz - 1, pv);
  return q * (pu * pv.transpose());
}

MatD sk_eval(int n, int d, int k, double u, double v, double t) {
  MatD s = yk_eval(n, d, k, u, v, t);
  s += yk_eval(n, d, k, v, u, t);
  s += yk_eval(n, d, k, u, t, v);
  s += yk_eval(n, d, k, t, u, v);
  s += yk_eval(n, d, k, v, t, u);
  s += yk_eval(n, d, k, t, v, u);
  return s / 6.0;
}

SphereBound delsarte_lp_sphere(int n, double theta_min, int d, CertifyMode mode,
                               int grid_points) {
  check_angle(theta_min);
  spherical_alpha(n);
  if (d < 1) throw Error("delsarte_lp_sphere: degree must be at least 1");
  const double al = spherical_alpha(n);
  const double s = std::cos(theta_min);

  SphereBound out;
  LinearMatrixProgram p;
  p.n = d;
  p.c = VecD::Ones(d);
  p.c0 = 1.0;
  p.maximize = false;
  for (int i = 0; i < d; ++i) p.nonneg.push_back(i);

  if (mode == CertifyMode::Grid) {
    const int G = std::max(grid_points, 2);
    const VecD grid = cheb_span(-1.0, s, G);
    p.ineq = MatD::Zero(G, d);
    p.ineq_rhs = VecD::Ones(G);
    for (int g = 0; g < G; ++g) {
      const VecD row = jacobi_row(d, grid[g], al, al);
      for (int k = 1; k <= d; ++k) p.ineq(g, k - 1) = -row[k];
    }
  } else {
    // Interval sign constraint as a polynomial identity:
    //   -1 - sum f_k P_k = w1(t) sigma(t) + w2(t) tau(t),
    // sigma, tau sums of squares.  Even degree: w1 = 1, w2 = (t+1)(s-t);
    // odd degree: w1 = t+1, w2 = s-t.  Gram matrices are written in the
    // Chebyshev basis of the interval; matching d+1 values at distinct
    // points pins the identity exactly.
    const bool odd = (d % 2) != 0;
    const int e = d / 2;
    const int sz1 = e + 1;
    const int sz2 = odd ? e + 1 : std::max(e, 1);
    const int n1 = sz1 * (sz1 + 1) / 2, n2 = sz2 * (sz2 + 1) / 2;
    p.n = d + n1 + n2;
    p.c = VecD::Zero(p.n);
    p.c.head(d).setOnes();

    auto tri = [](int sz, int i, int j) {  // i <= j, upper triangle
      return i * sz - i * (i - 1) / 2 + (j - i);
    };
    const int b1 = d, b2 = d + n1;

    LinearMatrixProgram::Lmi l1, l2;
    l1.rhs = MatD::Zero(sz1, sz1);
    l2.rhs = MatD::Zero(sz2, sz2);
    l1.coeff.assign(p.n, MatD::Zero(sz1, sz1));
    l2.coeff.assign(p.n, MatD::Zero(sz2, sz2));
    for (int i = 0; i < sz1; ++i)
      for (int j = i; j < sz1; ++j) {
        MatD& Cm = l1.coeff[b1 + tri(sz1, i, j)];
        Cm(i, j) = Cm(j, i) = 1.0;
      }
    for (int i = 0; i < sz2; ++i)
      for (int j = i; j < sz2; ++j) {
        MatD& Cm = l2.coeff[b2 + tri(sz2, i, j)];
        Cm(i, j) = Cm(j, i) = 1.0;
      }
    p.lmis.push_back(std::move(l1));
    p.lmis.push_back(std::move(l2));

    const VecD nodes = cheb_span(-1.0, s, d + 1);
    p.E = MatD::Zero(d + 1, p.n);
    p.f = VecD::Constant(d + 1, -1.0);
    const int szmax = std::max(sz1, sz2);
    for (int r = 0; r <= d; ++r) {
      const double t = nodes[r];
      const VecD pk = jacobi_row(d, t, al, al);
      for (int k = 1; k <= d; ++k) p.E(r, k - 1) = pk[k];
      const double xi = s > -1.0 ? (2.0 * t + 1.0 - s) / (1.0 + s) : 0.0;
      VecD T(szmax);
      T[0] = 1.0;
      if (szmax > 1) T[1] = xi;
      for (int i = 2; i < szmax; ++i) T[i] = 2.0 * xi * T[i - 1] - T[i - 2];
      const double w1 = odd ? (t + 1.0) : 1.0;
      const double w2 = odd ? (s - t) : (t + 1.0) * (s - t);
      for (int i = 0; i < sz1; ++i)
        for (int j = i; j < sz1; ++j)
          p.E(r, b1 + tri(sz1, i, j)) = (i == j ? 1.0 : 2.0) * T[i] * T[j] * w1;
      for (int i = 0; i < sz2; ++i)
        for (int j = i; j < sz2; ++j)
          p.E(r, b2 + tri(sz2, i, j)) = (i == j ? 1.0 : 2.0) * T[i] * T[j] * w2;
    }
  }

  ReducedSDP red = to_sdpa_form(p);
  out.warnings = red.warnings;
  SdpParams params;
  params.tol = 1e-9;
  SDPSolution sol = solve_sdp(red.sdpa, params);
  out.iterations = sol.iterations;
  if (sol.status == SdpStatus::Infeasible) {
    out.value = std::numeric_limits<double>::infinity();
    out.warnings.push_back(
        "truncated program infeasible at degree " + std::to_string(d) +
        "; raise d");
    return out;
  }
  if (sol.status != SdpStatus::Optimal &&
      sol.status != SdpStatus::IterationLimit)
    throw Error("delsarte_lp_sphere: " + describe_failure(sol));
  if (sol.status == SdpStatus::IterationLimit)
    out.warnings.push_back("iteration limit reached; value is approximate");

  const VecD x = red.recover(sol.x);
  out.value = red.value(sol);
  out.f = x.head(d);

  // a-posteriori sign audit of 1 + sum f_k P_k on a fine grid
  const int fine = (mode == CertifyMode::Grid) ? 10 * std::max(grid_points, 2)
                                               : 25 * (d + 1);
  const VecD audit = cheb_span(-1.0, s, fine);
  double worst = -std::numeric_limits<double>::infinity();
  for (int g = 0; g < fine; ++g) {
    const VecD pk = jacobi_row(d, audit[g], al, al);
    double val = 1.0;
    for (int k = 1; k <= d; ++k) val += out.f[k - 1] * pk[k];
    worst = std::max(worst, val);
  }
  out.audit_violation = worst;
  const double atol = 1e-6 * (1.0 + std::abs(out.value));
  bool ok = worst <= atol && sol.status == SdpStatus::Optimal;

  if (mode == CertifyMode::Sos && ok) {
    // the Gram blocks are the slack blocks of the solved program, psd by
    // construction; re-check their floors and the identity residual anyway
    const bool odd = (d % 2) != 0;
    const int e = d / 2;
    const int sz1 = e + 1;
    const int sz2 = odd ? e + 1 : std::max(e, 1);
    auto tri = [](int sz, int i, int j) {
      return i * sz - i * (i - 1) / 2 + (j - i);
    };
    MatD G1 = MatD::Zero(sz1, sz1), G2 = MatD::Zero(sz2, sz2);
    for (int i = 0; i < sz1; ++i)
      for (int j = i; j < sz1; ++j)
        G1(i, j) = G1(j, i) = x[d + tri(sz1, i, j)];
    const int b2 = d + sz1 * (sz1 + 1) / 2;
    for (int i = 0; i < sz2; ++i)
      for (int j = i; j < sz2; ++j)
        G2(i, j) = G2(j, i) = x[b2 + tri(sz2, i, j)];
    const double lam1 =
        Eigen::SelfAdjointEigenSolver<MatD>(G1).eigenvalues().minCoeff();
    const double lam2 =
        Eigen::SelfAdjointEigenSolver<MatD>(G2).eigenvalues().minCoeff();
    const double floor1 = -1e-7 * (1.0 + G1.norm());
    const double floor2 = -1e-7 * (1.0 + G2.norm());
    double resid = 0.0;
    for (int g = 0; g < fine; ++g) {
      const double t = audit[g];
      const double xi = s > -1.0 ? (2.0 * t + 1.0 - s) / (1.0 + s) : 0.0;
      VecD T(std::max(sz1, sz2));
      T[0] = 1.0;
      if (T.size() > 1) T[1] = xi;
      for (int i = 2; i < T.size(); ++i) T[i] = 2.0 * xi * T[i - 1] - T[i - 2];
      const double sg = T.head(sz1).dot(G1 * T.head(sz1));
      const double ta = T.head(sz2).dot(G2 * T.head(sz2));
      const double w1 = odd ? (t + 1.0) : 1.0;
      const double w2 = odd ? (s - t) : (t + 1.0) * (s - t);
      const VecD pk = jacobi_row(d, t, al, al);
      double lhs = 1.0;
      for (int k = 1; k <= d; ++k) lhs += out.f[k - 1] * pk[k];
      resid = std::max(resid, std::abs(lhs + w1 * sg + w2 * ta));
    }
    ok = lam1 >= floor1 && lam2 >= floor2 &&
         resid <= 1e-6 * (1.0 + std::abs(out.value));
    if (!ok)
      out.warnings.push_back("sum-of-squares certificate failed its audit");
  }
  out.certified = ok;
  return out;
}

AngleAvoidance theta2_avoid_angle(int n, double theta, int k_search) {
  check_angle(theta);
  const double al = spherical_alpha(n);
  if (k_search < 1) throw Error("theta2_avoid_angle: empty search range");
  const double s = std::cos(theta);

  AngleAvoidance out;
  int K = k_search;
  for (;;) {
    const VecD vals = jacobi_row(K, s, al, al);
    out.min_value = vals[0];
    out.argmin = 0;
    for (int k = 1; k <= K; ++k)
      if (vals[k] < out.min_value) {
        out.min_value = vals[k];
        out.argmin = k;
      }
    out.searched = K;
    if (out.min_value <= -1.0 + 1e-12) {
      // normalized symmetric Jacobi values never fall below -1 on [-1,1]
      out.tail_ok = true;
      break;
    }
    const int win = std::min(50, K);
    out.tail_ok = true;
    for (int k = K - win + 1; k <= K; ++k)
      if (!(std::abs(vals[k]) < std::abs(out.min_value))) {
        out.tail_ok = false;
        break;
      }
    if (out.tail_ok) break;
    if (2 * K > 16 * k_search) {
      out.warnings.push_back(
          "tail test still failing at k = " + std::to_string(K) +
          "; the reported minimum may not be settled");
      break;
    }
    K *= 2;
  }
  if (out.min_value >= 0.0)
    throw NoNegativeValue(
        "no negative zonal value up to k = " + std::to_string(out.searched) +
        "; minimum " + std::to_string(out.min_value) + " at k = " +
        std::to_string(out.argmin));
  out.value = out.min_value / (out.min_value - 1.0);
  return out;
}

ThreePointBound three_point_sdp(int n, double theta_min, int d,
                                int grid_density, int segment_points,
                                double margin) {
  if (n < 3) throw Error("three_point_sdp: needs n >= 3");
  check_angle(theta_min);
  if (d < 1) throw Error("three_point_sdp: degree must be at least 1");
  if (grid_density < 2 || segment_points < 2)
    throw Error("three_point_sdp: grids need at least two points");
  if (margin < 0.0) throw Error("three_point_sdp: negative margin");
  const double s = std::cos(theta_min);

  // variable layout: upper triangles of F_0 .. F_d, F_k of size d-k+1
  std::vector<int> base(d + 1), msize(d + 1);
  int nv = 0;
  for (int k = 0; k <= d; ++k) {
    msize[k] = d - k + 1;
    base[k] = nv;
    nv += msize[k] * (msize[k] + 1) / 2;
  }
  auto var = [&](int k, int i, int j) {  // i <= j
    return base[k] + i * msize[k] - i * (i - 1) / 2 + (j - i);
  };

  const UltraCoeffs uc = ultra_coeffs(0.5 * (n - 4.0), d);
  const VecD seg = cheb_span(-1.0, s, segment_points);
  const VecD axis = cheb_span(-1.0, s, grid_density);
  const int nbox =
      grid_density * (grid_density + 1) * (grid_density + 2) / 6;

  ThreePointBound out;
  out.grid_rows = segment_points + nbox;

  ReducedSDP red;
  {
    LinearMatrixProgram p;
    p.n = nv;
    p.c = VecD::Zero(nv);
    p.c0 = 1.0;
    p.maximize = false;
    for (int i = 0; i < msize[0]; ++i)
      for (int j = i; j < msize[0]; ++j) p.c[var(0, i, j)] = i == j ? 1.0 : 2.0;
    for (int k = 0; k <= d; ++k) {
      LinearMatrixProgram::Lmi lmi;
      lmi.rhs = MatD::Zero(msize[k], msize[k]);
      lmi.coeff.assign(nv, MatD::Zero(msize[k], msize[k]));
      for (int i = 0; i < msize[k]; ++i)
        for (int j = i; j < msize[k]; ++j) {
          MatD& Cm = lmi.coeff[var(k, i, j)];
          Cm(i, j) = Cm(j, i) = 1.0;
        }
      p.lmis.push_back(std::move(lmi));
    }

    p.ineq = MatD::Zero(out.grid_rows, nv);
    p.ineq_rhs = VecD::Zero(out.grid_rows);
    VecD pu, pv, pt, q1, q2, q3;
    auto fill_row = [&](Index r, double u, double v, double t) {
      fill_powers(u, d, pu);
      fill_powers(v, d, pv);
      fill_powers(t, d, pt);
      qk_all(uc, d, t - u * v, (1.0 - u * u) * (1.0 - v * v), q1);
      qk_all(uc, d, v - u * t, (1.0 - u * u) * (1.0 - t * t), q2);
      qk_all(uc, d, u - v * t, (1.0 - v * v) * (1.0 - t * t), q3);
      for (int k = 0; k <= d; ++k)
        for (int i = 0; i < msize[k]; ++i)
          for (int j = i; j < msize[k]; ++j) {
            const double skij =
                (q1[k] * (pu[i] * pv[j] + pv[i] * pu[j]) +
                 q2[k] * (pu[i] * pt[j] + pt[i] * pu[j]) +
                 q3[k] * (pv[i] * pt[j] + pt[i] * pv[j])) /
                6.0;
            p.ineq(r, var(k, i, j)) = -(i == j ? 1.0 : 2.0) * skij;
          }
    };
    Index r = 0;
    for (int g = 0; g < segment_points; ++g, ++r) {
      fill_row(r, seg[g], seg[g], 1.0);
      p.ineq_rhs[r] = 1.0 / 3.0 + margin;
    }
    for (int a = 0; a < grid_density; ++a)
      for (int b = a; b < grid_density; ++b)
        for (int c = b; c < grid_density; ++c, ++r) {
          fill_row(r, axis[a], axis[b], axis[c]);
          p.ineq_rhs[r] = margin;
        }
    red = to_sdpa_form(p);
  }

  out.warnings = red.warnings;
  SdpParams params;
  params.max_iter = 300;
  SDPSolution sol = solve_sdp(red.sdpa, params);
  out.iterations = sol.iterations;
  if (sol.status != SdpStatus::Optimal &&
      sol.status != SdpStatus::IterationLimit)
    throw Error("three_point_sdp: " + describe_failure(sol));
  if (sol.status == SdpStatus::IterationLimit)
    out.warnings.push_back("iteration limit reached; value is approximate");

  const VecD x = red.recover(sol.x);
  out.value = red.value(sol);
  out.F.resize(d + 1);
  for (int k = 0; k <= d; ++k) {
    out.F[k] = MatD::Zero(msize[k], msize[k]);
    for (int i = 0; i < msize[k]; ++i)
      for (int j = i; j < msize[k]; ++j)
        out.F[k](i, j) = out.F[k](j, i) = x[var(k, i, j)];
  }

  // audit: re-evaluate both constraint families on 4x finer grids
  VecD pu, pv, pt, q1, q2, q3;
  auto eval_sum = [&](double u, double v, double t) {
    fill_powers(u, d, pu);
    fill_powers(v, d, pv);
    fill_powers(t, d, pt);
    qk_all(uc, d, t - u * v, (1.0 - u * u) * (1.0 - v * v), q1);
    qk_all(uc, d, v - u * t, (1.0 - u * u) * (1.0 - t * t), q2);
    qk_all(uc, d, u - v * t, (1.0 - v * v) * (1.0 - t * t), q3);
    double val = 0.0;
    for (int k = 0; k <= d; ++k) {
      const int sz = msize[k];
      val += (q1[k] * pu.head(sz).dot(out.F[k] * pv.head(sz)) +
              q2[k] * pu.head(sz).dot(out.F[k] * pt.head(sz)) +
              q3[k] * pv.head(sz).dot(out.F[k] * pt.head(sz))) /
             3.0;
    }
    return val;
  };
  const VecD fine_seg = cheb_span(-1.0, s, 4 * segment_points);
  double worst_seg = -std::numeric_limits<double>::infinity();
  for (Index g = 0; g < fine_seg.size(); ++g)
    worst_seg = std::max(worst_seg, eval_sum(fine_seg[g], fine_seg[g], 1.0) +
                                        1.0 / 3.0);
  const int fg = 4 * grid_density;
  const VecD fine_axis = cheb_span(-1.0, s, fg);
  double worst_box = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < fg; ++a)
    for (int b = a; b < fg; ++b)
      for (int c = b; c < fg; ++c)
        worst_box = std::max(
            worst_box, eval_sum(fine_axis[a], fine_axis[b], fine_axis[c]));
  out.audit_segment = worst_seg;
  out.audit_box = worst_box;
  const double atol = 1e-7 * (1.0 + std::abs(out.value));
  out.audit_passed = worst_seg <= atol && worst_box <= atol &&
                     sol.status == SdpStatus::Optimal;
  out.warnings.push_back(
      std::string("grid-relaxed bound; audit on 4x finer grids ") +
      (out.audit_passed ? "passed" : "FAILED"));
  return out;
}

}  // namespace symmetra
