#pragma once

#include <string>
#include <vector>

#include "symmetra/sdp_model.hpp"
#include "symmetra/solver.hpp"
#include "symmetra/types.hpp"

namespace symmetra {

// Jacobi polynomial P_k^{(alpha,beta)}(t) normalized so that P_k(1) = 1.
// The classical three-term recurrence is carried in normalized form: every
// step divides through by the value at t = 1, so all intermediates stay O(1)
// and the evaluation never over- or underflows, whatever k.  alpha, beta > -1.
double jacobi(int k, double t, double alpha, double beta);

// all of P_0(t) .. P_kmax(t) in one sweep of the recurrence
VecD jacobi_row(int kmax, double t, double alpha, double beta);

// P_k^n(t) = P_k^{((n-3)/2,(n-3)/2)}(t), the zonal polynomial family of the
// unit sphere in R^n (a positive multiple of the Gegenbauer polynomial).
// n >= 2; n = 2 gives the Chebyshev polynomials cos(k arccos t).
double jacobi_sphere(int n, int k, double t);

// dimension of the harmonic polynomials of degree k in n variables:
//   binom(n+k-1, k) - binom(n+k-3, k-2)
long long harmonic_dimension(int n, int k);

// Q_k^{n-1}(u,v,t) = ((1-u^2)(1-v^2))^(k/2) P_k^{n-1}(z) with
// z = (t-uv)/sqrt((1-u^2)(1-v^2)).  Despite the square roots this is a
// polynomial in (u,v,t); it is evaluated by the recurrence rewritten in the
// invariants t-uv and (1-u^2)(1-v^2), which needs no special case at
// |u| = 1 or |v| = 1.  Requires n >= 3.
double qk_eval(int n, int k, double u, double v, double t);

// Matrix of size (d-k+1) with entries Y_{k,ij}(u,v,t) = u^i v^j Q_k^{n-1},
// 0 <= i,j <= d-k.  Y_k(u,v,t)^T = Y_k(v,u,t).
MatD yk_eval(int n, int d, int k, double u, double v, double t);

// Average of Y_k over the six orderings of (u,v,t).  The orderings come in
// transpose pairs, so the result is a symmetric matrix; the average (rather
// than the sum) makes S_0(1,1,1) = J_{d+1} and S_k(1,1,1) = 0 for k >= 1.
MatD sk_eval(int n, int d, int k, double u, double v, double t);

enum class CertifyMode { Grid, Sos };

struct SphereBound {
  double value = 0.0;     // +infinity when the truncation is infeasible
  bool certified = false;
  VecD f;                 // multipliers on P_1 .. P_d (the constant 1 is f_0)
  double audit_violation = 0.0;  // worst sign found by the a-posteriori audit
  int iterations = 0;
  std::vector<std::string> warnings;
};

// Linear programming bound on spherical codes in S^{n-1} with minimal angle
// theta_min (radians):
//   minimize 1 + sum_{k=1}^d f_k
//   s.t.     f_k >= 0,  1 + sum f_k P_k^n(t) <= 0 on [-1, cos theta_min].
// Grid mode enforces the sign constraint on a Chebyshev point set of the
// interval and audits the optimum on a 10x finer set; certified reports the
// audit.  Sos mode writes the constraint exactly with two sum-of-squares
// multipliers on the interval (one plain, one against the interval weight)
// and certifies the resulting polynomial identity a posteriori.  An
// infeasible truncation comes back as value = +infinity with a warning to
// raise d.
SphereBound delsarte_lp_sphere(int n, double theta_min, int d,
                               CertifyMode mode = CertifyMode::Grid,
                               int grid_points = 2000);

struct AngleAvoidance {
  double value = 0.0;      // m/(m-1)
  double min_value = 0.0;  // m = min_k P_k^n(cos theta)
  int argmin = 0;
  int searched = 0;   // largest k examined
  bool tail_ok = false;  // the last stretch stayed below |m| in magnitude
  std::vector<std::string> warnings;
};

// Maximal density of a measurable subset of S^{n-1} avoiding the angle theta
// between its points: m(s)/(m(s)-1) with s = cos theta and m(s) the minimum
// of P_k^n(s) over k >= 0.  The search runs k up to k_search and accepts once
// |P_k(s)| < |m| throughout the last 50 values of k, doubling the range (up
// to 16x) until that tail test passes.  Throws NoNegativeValue when every
// examined value is nonnegative (the message carries the minimum found).
AngleAvoidance theta2_avoid_angle(int n, double theta, int k_search = 200);

struct ThreePointBound {
  double value = 0.0;
  bool audit_passed = false;
  double audit_segment = 0.0;  // worst (constraint value + 1/3) on the audit
  double audit_box = 0.0;      // worst constraint value on the audit box
  int grid_rows = 0;
  int iterations = 0;
  std::vector<MatD> F;  // optimal F_0 .. F_d, F_k of size d-k+1
  std::vector<std::string> warnings;
};

// Three-point semidefinite bound on spherical codes with minimal angle
// theta_min:
//   inf 1 + <F_0, J_{d+1}>
//   s.t. F_k psd,  sum_k <F_k, S_k(u,u,1)> <= -1/3      on u in [-1,s],
//        sum_k <F_k, S_k(u,v,t)> <= 0                   on [-1,s]^3,
// with s = cos theta_min.  Both constraint families are enforced on Chebyshev
// grids (grid_density points per box axis, segment_points on the segment; the
// box only needs ordered triples since S_k is symmetric in its arguments) and
// tightened by `margin` so that the optimum has slack between grid nodes.
// The value is therefore a bound only up to discretization: the audit
// re-checks both families on 4x finer grids and its outcome is reported in
// audit_passed.  Requires n >= 3.
ThreePointBound three_point_sdp(int n, double theta_min, int d,
                                int grid_density = 60,
                                int segment_points = 400,
                                double margin = 1e-3);

}  // namespace symmetra
