#pragma once

#include <optional>
#include <vector>

#include "symmetra/perm_group.hpp"
#include "symmetra/types.hpp"

namespace symmetra {

// Basis of a matrix *-algebra.  The linear span must be closed under products
// and adjoints; products are only used through structure constants or through
// explicit ambient multiplication in verification.
struct AlgebraBasis {
  int n = 0;
  std::vector<SpMatC> elements;
  bool hermitian_closed = true;
  // If the adjoint permutes the basis, adjoint_map[r] is the index with
  // B_{adjoint_map[r]} = B_r^*; empty otherwise.
  std::vector<int> adjoint_map;

  static AlgebraBasis from_orbits(const PairOrbitStructure& orbits);
  static AlgebraBasis from_dense(const std::vector<MatD>& mats);
  static AlgebraBasis from_dense(const std::vector<MatC>& mats);
  MatC dense(int r) const { return MatC(elements[r]); }
};

// Regular *-representation on the algebra itself w.r.t. the normalized basis
// C_r/||C_r||:  L(C_r)_{st} = (||C_s||/||C_t||) p^s_{rt}.  Conjugating by
// diag(||C_s||) gives the integer matrices p^s_{rt}, so multiplicativity can
// be checked in exact integer arithmetic when norms^2 are integers.
struct RegularRep {
  int M = 0;
  std::vector<MatD> L;
  std::vector<long long> norms_squared;
  bool exact = true;

  // Integer conjugate D^{-1} L(C_r) D with D = diag(||C_s||).
  Mat<long long> integer_conjugate(int r) const;
};

RegularRep regular_rep(const StructureConstants& sc);

// Result of numerically block-diagonalizing the span of a basis: a
// *-isomorphism phi onto  ⊕_k C^{m_k x m_k}  given by images of every basis
// element plus the transform data needed to re-derive them.
struct BlockDiagonalization {
  int M = 0;
  int d = 0;
  std::vector<int> block_sizes;      // m_k, one per block
  std::vector<int> multiplicities;   // ambient multiplicity s_k of block k
  int kernel_dimension = 0;          // ambient directions annihilated by all
                                     // basis elements (algebras without 1)
  // images[r][k]: m_k x m_k image of basis element r in block k
  std::vector<std::vector<MatC>> images;
  double residual = 0.0;  // max deviation from exact block structure

  // transform: ambient unitary, cluster index sets and aligner unitaries
  MatC U;
  std::vector<std::vector<int>> clusters;        // eigenindex lists
  std::vector<std::vector<int>> class_clusters;  // per block: cluster ids
  std::vector<std::vector<MatC>> aligners;       // per block: one per cluster
  std::uint64_t seed_used = 0;
  int attempts = 0;

  bool real_images(double tol = 1e-10) const;
  // phi applied to a coefficient vector: x -> [sum_r x_r images[r][k]]_k
  std::vector<MatC> apply(const VecC& x) const;
};

BlockDiagonalization block_diagonalize(const AlgebraBasis& basis,
                                       std::uint64_t seed = 1,
                                       double tol = 1e-9);

// Same decomposition for a basis handed over as real sparse matrices, which
// stay sparse through sampling and the transform assembly; meant for large
// regular representations whose dense element list would not fit in memory.
// The algebra must split over the reals: this path has no complex fallback.
BlockDiagonalization block_diagonalize(const std::vector<SpMatD>& elements,
                                       int n, std::uint64_t seed = 1,
                                       double tol = 1e-9);

struct StarIsoReport {
  double mult_error = 0.0;
  double adjoint_error = 0.0;
  bool dim_ok = false;
  double eigenvalue_error = 0.0;
  bool pass = false;
};

/// Checks that the images define a *-isomorphism: multiplicativity over all
// basis pairs (through structure constants when given, else through ambient
// products), the adjoint law, the dimension count sum m_k^2 = M, and
// eigenvalue preservation on 5 seeded random Hermitian combinations.
StarIsoReport verify_star_isomorphism(const AlgebraBasis& basis,
                                      const BlockDiagonalization& bd,
                                      double tol = 1e-7,
                                      const StructureConstants* sc = nullptr,
                                      std::uint64_t seed = 1);

struct PsdDecomposition {
  MatC B;         // Hermitian psd with B*B = A, a polynomial in A
  VecC coords;    // coordinates of B in the basis
  double residual = 0.0;  // ||B*B - A||_F + basis-projection residual
};

// Square root inside the algebra (polynomial calculus on the sample).
// Throws NotPSD if A has an eigenvalue below -tol.
PsdDecomposition psd_decompose(const MatC& A, const AlgebraBasis& basis,
                               double tol = 1e-9);

}  // namespace symmetra
