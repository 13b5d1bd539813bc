#pragma once

#include <string>
#include <vector>

#include "symmetra/types.hpp"

namespace symmetra {

// One square block of a block-diagonal symmetric matrix.  Diagonal blocks
// (negative sizes in problem data) store only the diagonal so that large
// elementwise-nonnegativity blocks stay cheap.
struct SdpBlock {
  int size = 0;
  bool diagonal = false;
  MatD mat;  // used when !diagonal
  VecD vec;  // used when diagonal

  static SdpBlock dense_zero(int n) {
    SdpBlock b;
    b.size = n;
    b.mat = MatD::Zero(n, n);
    return b;
  }
  static SdpBlock diag_zero(int n) {
    SdpBlock b;
    b.size = n;
    b.diagonal = true;
    b.vec = VecD::Zero(n);
    return b;
  }
  double inner(const SdpBlock& o) const {
    return diagonal ? vec.dot(o.vec) : mat.cwiseProduct(o.mat).sum();
  }
  double norm() const { return diagonal ? vec.norm() : mat.norm(); }
  double trace() const { return diagonal ? vec.sum() : mat.trace(); }
};

using BlockDiagMat = std::vector<SdpBlock>;

// Standard-form semidefinite program
//   minimize    c^T x
//   subject to  S(x) = sum_i x_i F_i - F_0  psd,  blockwise,
// with the dual
//   maximize    <F_0, Y>
//   subject to  <F_i, Y> = c_i,  Y psd.
// objective_offset is added to both reported objective values; it carries the
// constant term dropped when a model is put into standard form.
struct SDPAProblem {
  int m = 0;
  std::vector<int> block_sizes;  // negative size = diagonal block
  VecD c;
  std::vector<BlockDiagMat> F;  // indices 0..m, F[0] is F_0
  double objective_offset = 0.0;

  BlockDiagMat zero_template() const;
  void validate() const;  // throws Error on inconsistent shapes
};

enum class SdpStatus {
  Optimal,
  Infeasible,
  Unbounded,
  IterationLimit,
  NumericalTrouble
};

std::string to_string(SdpStatus s);

struct SdpParams {
  double tol = 1e-8;        // relative gap and feasibility target
  int max_iter = 200;
  double init_scale = 0.0;  // starting multiple of identity; 0 = automatic
  bool verbose = false;
};

struct SDPSolution {
  SdpStatus status = SdpStatus::NumericalTrouble;
  VecD x;
  BlockDiagMat S;  // primal slack sum x_i F_i - F_0
  BlockDiagMat Y;  // dual matrix
  double primal_value = 0.0;  // c^T x + offset
  double dual_value = 0.0;    // <F_0, Y> + offset
  double rel_gap = 0.0;
  double primal_infeas = 0.0;  // ||sum x_i F_i - F_0 - S||_max, scaled
  double dual_infeas = 0.0;    // max_i |<F_i,Y> - c_i|, scaled
  int iterations = 0;
  std::string message;
};

// Primal-dual interior-point method (Mehrotra predictor-corrector with
// Nesterov-Todd scaling).  Requires strictly feasible primal and dual points
// to exist; detects plainly unbounded/infeasible instances by divergence.
SDPSolution solve_sdp(const SDPAProblem& prob, const SdpParams& params = {});

// Serialization in the sparse SDPA format.  The objective offset survives a
// round trip through a leading comment line; standard readers ignore it.
void write_sdpa(const SDPAProblem& prob, const std::string& path);
std::string to_sdpa_string(const SDPAProblem& prob);
SDPAProblem read_sdpa(const std::string& path);
SDPAProblem parse_sdpa_string(const std::string& text);

}  // namespace symmetra
