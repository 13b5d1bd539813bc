#pragma once

#include <string>
#include <vector>

#include "symmetra/perm_group.hpp"
#include "symmetra/solver.hpp"
#include "symmetra/star_algebra.hpp"
#include "symmetra/types.hpp"

namespace symmetra {

// Matrix program over one symmetric matrix variable X:
//   optimize <C, X>  subject to  <A_l, X> = b_l,  X psd,
//   optionally X >= 0 entrywise.
struct MatrixSDP {
  MatD C;
  std::vector<MatD> A;
  VecD b;
  bool maximize = true;
  bool entrywise_nonneg = false;
};

// The same program restricted to the invariant subspace spanned by the
// canonical orbit matrices:  X = sum_r x_r C_r.
struct InvariantSDP {
  int M = 0;
  VecD obj;      // obj[r] = <C, C_r>
  MatD eq;       // rows <A_l, C_r>
  VecD eq_rhs;
  bool maximize = true;
  bool entrywise_nonneg = false;  // becomes x_r >= 0 per orbit
};

// Throws NotInvariant when the objective is not constant on orbits.
// Constraint rows are contracted against the orbit basis as given; the caller
// is responsible for the feasible set being invariant as a whole.  Symmetry of
// X is kept by pairing equalities x_r = x_{r^T} for orbits swapped under
// transposition.
InvariantSDP restrict_to_invariant(const MatrixSDP& sdp,
                                   const PairOrbitStructure& orbits,
                                   double tol = 1e-9);

// General intermediate form emitted by the reductions:
//   optimize c.x + c0  subject to  E x = f,  x_i >= 0 (i in nonneg),
//   ineq x >= ineq_rhs  (one diagonal entry per row),
//   sum_j x_j lmi.coeff[j] - lmi.rhs  psd  for every lmi.
struct LinearMatrixProgram {
  int n = 0;
  VecD c;
  double c0 = 0.0;
  bool maximize = false;
  MatD E;  // 0 x n allowed
  VecD f;
  std::vector<int> nonneg;
  MatD ineq;  // 0 x n allowed
  VecD ineq_rhs;
  struct Lmi {
    std::vector<MatD> coeff;
    MatD rhs;
  };
  std::vector<Lmi> lmis;
};

// Standard-form translation of a LinearMatrixProgram.  Equalities are
// eliminated by substitution x = x_particular + basis * z over an orthonormal
// kernel basis; columns that touch nothing are dropped.  The original
// optimum equals  sign * solve_sdp(sdpa).primal_value.
struct ReducedSDP {
  SDPAProblem sdpa;
  double sign = 1.0;
  VecD x_particular;
  MatD x_recover;  // original x = x_particular + x_recover * z
  std::vector<std::string> warnings;

  VecD recover(const VecD& z) const { return x_particular + x_recover * z; }
  double value(const SDPSolution& sol) const {
    return sign * sol.primal_value;
  }
};

ReducedSDP to_sdpa_form(const LinearMatrixProgram& p, double tol = 1e-10);

// Reduction through the regular *-representation: the ambient psd constraint
// sum_r x_r C_r psd becomes sum_r x_r L_r psd on M x M matrices.
ReducedSDP reduce_regular(const InvariantSDP& inv, const StructureConstants& sc);

enum class BlockMode { Coefficient, Parametrized };

// Reduction through a numerical block diagonalization.  Coefficient mode
// keeps the x_r variables and rewrites the psd constraint blockwise (complex
// blocks fall back to the [[Re,-Im],[Im,Re]] embedding).  Parametrized mode
// switches variables to the upper-triangle entries of the blocks themselves;
// it requires real block images.  Both modes re-verify the isomorphism and
// throw UnverifiedIsomorphism when it fails its checks.
ReducedSDP reduce_block(const InvariantSDP& inv, const AlgebraBasis& basis,
                        const BlockDiagonalization& bd,
                        BlockMode mode = BlockMode::Coefficient,
                        const StructureConstants* sc = nullptr,
                        double verify_tol = 1e-7);

// Classical dual of a MatrixSDP as a standard-form program, for solving
// small instances without any symmetry reduction:
//   min b.y  s.t.  sum_l y_l A_l - C - N  psd,  N >= 0 diagonal-free entries
// (N present only with entrywise_nonneg).  With strong duality the reported
// optimum equals the MatrixSDP optimum.
SDPAProblem full_sdp_dual(const MatrixSDP& sdp);

// Adjacency-level helper: the variant of the Lovasz number with entrywise
// nonnegativity,  max <J, X>, tr X = 1, X_uv = 0 on edges, X psd, X >= 0.
MatrixSDP build_theta_prime(const MatI& adjacency);

}  // namespace symmetra
