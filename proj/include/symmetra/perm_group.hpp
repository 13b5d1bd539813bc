#pragma once

#include <utility>
#include <vector>

#include "symmetra/types.hpp"

namespace symmetra {

// Permutation of {0,...,n-1} stored as an image table.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<int> images);
  static Permutation identity(int n);

  int size() const { return static_cast<int>(img_.size()); }
  int operator()(int i) const { return img_[i]; }
  const std::vector<int>& images() const { return img_; }

  Permutation inverse() const;
  // (a.compose(b))(i) == a(b(i))
  Permutation compose(const Permutation& other) const;
  bool operator==(const Permutation& other) const { return img_ == other.img_; }

 private:
  std::vector<int> img_;
};

struct GroupAction {
  int n = 0;
  std::vector<Permutation> generators;  // all of degree n
};

// Orbits of the diagonal action on ordered pairs.  Orbit ids are assigned in
// lexicographic order of the first-encountered pair, so the canonical basis
// C_0,...,C_{M-1} (0/1 indicator matrices of the orbits) is deterministic for
// a fixed generator list.
struct PairOrbitStructure {
  int n = 0;
  int M = 0;
  MatI orbit_id;                                    // n x n, entries in [0,M)
  std::vector<long long> orbit_sizes;               // |R_r| = ||C_r||^2
  std::vector<int> transpose_map;                   // involution r -> r^T
  std::vector<std::pair<int, int>> representative;  // first pair of each orbit
  std::vector<std::pair<int, int>> second_representative;  // (-1,-1) if size 1

  MatD canonical_matrix(int r) const;
  MatI canonical_matrix_int(int r) const;
  bool orbit_is_diagonal(int r) const {
    return representative[r].first == representative[r].second;
  }
};

// p^t_{rs} with C_r C_s = sum_t p^t_{rs} C_t.  Entries are exact nonnegative
// integers; p^t_{rs} counts k with (i,k) in R_r, (k,j) in R_s for a fixed
// (i,j) in R_t and does not depend on the representative.
struct StructureConstants {
  int M = 0;
  std::vector<long long> norms_squared;  // orbit sizes
  // p[r*M+s] lists (t, p^t_{rs}) with p > 0, sorted by t.
  std::vector<std::vector<std::pair<int, long long>>> p;

  long long p_of(int r, int s, int t) const;
  const std::vector<std::pair<int, long long>>& product(int r, int s) const {
    return p[static_cast<std::size_t>(r) * M + s];
  }
};

PairOrbitStructure pair_orbits(const GroupAction& g);

// audit_second_representative recomputes every p^t_{rs} from a second orbit
// element when one exists and throws RepresentativeMismatch on disagreement.
StructureConstants structure_constants(const PairOrbitStructure& orbits,
                                       bool audit_second_representative = true);

// Orthogonal projection onto the invariant subspace: entry (i,j) becomes the
// mean of X over the orbit of (i,j).  Idempotent and self-adjoint.
MatD group_average(const PairOrbitStructure& orbits, const MatD& X);
MatD group_average(const GroupAction& g, const MatD& X);

// Applies sigma to rows and columns: returns X(sigma^{-1}(i), sigma^{-1}(j)).
MatD conjugate_by(const Permutation& sigma, const MatD& X);

}  // namespace symmetra
