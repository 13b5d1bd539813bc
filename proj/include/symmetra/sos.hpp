#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "symmetra/types.hpp"

namespace symmetra {

// Sparse real polynomial keyed by exponent vector.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(int n) : n_(n) {}

  int vars() const { return n_; }
  int degree() const;  // 0 for the zero polynomial
  // Adds c * x^expo, merging with an existing term; exact-zero results are
  // removed so that no zero coefficients are ever stored.
  void add_term(const std::vector<int>& expo, double c);
  double coefficient(const std::vector<int>& expo) const;
  const std::map<std::vector<int>, double>& terms() const { return c_; }
  double max_abs_coefficient() const;
  double evaluate(const VecD& x) const;
  // The polynomial x -> (*this)(A x), expanded into monomials.
  Polynomial substituted(const MatD& A) const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) {
    a += b;
    return a;
  }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) {
    a -= b;
    return a;
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

 private:
  int n_ = 0;
  std::map<std::vector<int>, double> c_;
};

// All exponent vectors with |e| <= d, listed degree by degree and within a
// degree in the order 1, x_1, x_2, ..., x_1^2, x_1 x_2, ...: the leading
// variables carry the highest exponents first.  Length binom(n+d, d).
std::vector<std::vector<int>> monomial_basis(int n, int d);

// Substitution representation on polynomials of degree at most d: pi(g)
// is the matrix of p -> p(g^{-1} x) in the monomial basis, so that
// pi(g) pi(h) = pi(gh).  Generators must be invertible.
struct MonomialRep {
  int n = 0;
  int d = 0;
  std::vector<std::vector<int>> monomials;
  std::vector<MatD> pi;  // one per generator
};

MonomialRep monomial_rep(const std::vector<MatD>& generators, int n, int d);

enum class SosStatus { Feasible, Infeasible };

// One exactly verified term w * (sum_e c_e x^e)^2 of a rational certificate;
// weight and coefficients are decimal-free "num/den" strings.
struct RationalSquare {
  std::string weight;
  std::vector<std::pair<std::vector<int>, std::string>> coefficients;
};

struct SosResult {
  SosStatus status = SosStatus::Infeasible;
  // Optimum of the phase-I program max { t : Gram >= t I, coefficients of
  // z^T Gram z match p }: nonnegative exactly when p is a sum of squares of
  // polynomials of degree at most deg(p)/2.
  double t = 0.0;
  long long group_order = 0;     // 0 when the closure was not enumerated
  std::vector<int> block_sizes;  // commutant blocks used by the reduction

  // Feasible side: Gram matrix on the monomial basis, squares with
  // sum q_i^2 = p, and the largest coefficient mismatch of that identity.
  MatD gram;
  std::vector<Polynomial> squares;
  double reconstruction_error = -1.0;
  // Set when rounding the Gram matrix to small rationals produced a
  // certificate verified in exact arithmetic; the terms are in
  // rational_squares.
  bool exact = false;
  std::vector<RationalSquare> rational_squares;

  // Infeasible side: weights y_e of a linear functional L(q) = sum y_e q_e
  // that is nonnegative on every square but negative on p, plus the margins
  // established when re-verifying it: L(p), the smallest eigenvalue of the
  // matrix sum_e y_e A_e (nonnegativity of L on all squares), and the
  // smallest L(q^2) over sampled random q.
  std::vector<std::pair<std::vector<int>, double>> dual_functional;
  double dual_value = 0.0;
  double dual_min_eigenvalue = 0.0;
  double dual_square_floor = 0.0;

  std::vector<std::string> warnings;
};

// Symmetry-reduced sum-of-squares feasibility for a polynomial invariant
// under the group generated by the given matrices: the Gram matrix is
// restricted to the commutant of the substitution representation, which is
// block diagonalized before solving.  The generators must act orthogonally
// on the monomial basis (permutations and sign changes of variables do).
// Throws NotInvariant when p moves under a generator and UnverifiedIsomorphism
// when the decomposition fails its checks; infeasibility is only reported
// with an independently re-verified dual functional.
SosResult sos_gram_sdp(const Polynomial& p, const std::vector<MatD>& generators,
                       std::uint64_t seed = 1);

// The same feasibility problem over the full Gram matrix, no symmetry used;
// reference implementation for cross-checking the reduction.
SosResult sos_gram_full(const Polynomial& p, std::uint64_t seed = 1);

}  // namespace symmetra
