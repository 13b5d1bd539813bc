#pragma once

#include <string>
#include <vector>

#include "symmetra/perm_group.hpp"
#include "symmetra/sdp_model.hpp"
#include "symmetra/solver.hpp"
#include "symmetra/types.hpp"

namespace symmetra {

// Cyclic permutation of {1,...,m} in canonical cycle form: the cycle written
// starting at 1, so {1, c[1], ..., c[m-1]} sends 1 -> c[1] -> ... -> 1.
struct CyclicPerm {
  std::vector<int> cycle;  // cycle[0] == 1; entries are a permutation of 1..m

  int m() const { return static_cast<int>(cycle.size()); }
  // Image table of the underlying permutation, 0-based.
  Permutation as_permutation() const;
  // Throws Error unless p is a single cycle through all points.
  static CyclicPerm from_permutation(const Permutation& p);
  // The same circular sequence walked backwards (the inverse permutation).
  CyclicPerm reversed() const;
  bool operator==(const CyclicPerm& other) const = default;
};

// All (m-1)! cyclic permutations of [m], ordered lexicographically by their
// canonical cycle.  3 <= m <= 9.
std::vector<CyclicPerm> enumerate_cyclic(int m);
// Position of c within the enumerate_cyclic ordering.
int cyclic_index(const CyclicPerm& c);

// Minimum number of crossings in a drawing of K_{m,2} whose two centers see
// their edges leave in clockwise orders sigma and tau: the minimum number of
// swaps of cyclically adjacent entries turning sigma into tau reversed.
int star_crossing(const CyclicPerm& sigma, const CyclicPerm& tau);
// One full row of those values, indexed in enumerate_cyclic order; a single
// breadth-first sweep over the swap graph.
std::vector<int> star_crossing_row(const CyclicPerm& sigma);
// Exhaustive check value from an annulus normal form of the drawing: every
// edge becomes a monotone curve between the two star boundaries, crossings
// count winding-number differences, and all bounded winding assignments are
// enumerated.  Exponential in m; restricted to m <= 4.
int star_crossing_oracle(const CyclicPerm& sigma, const CyclicPerm& tau);

// The group S_m x {+-1} acting on cyclic permutations by conjugation and
// inversion, as generator permutations of the enumerate_cyclic index space.
GroupAction crossing_action(int m);

// Pair orbits of that action through the generic orbit machinery.  Every
// orbit meets the row of sigma_0 = (1,...,m), which is index 0, so all
// representatives come out as (sigma_0, tau).  Memory grows as ((m-1)!)^2:
// fine through m = 7, ~100 MB at m = 8, not sensible at m = 9.
PairOrbitStructure orbit_structure(int m);

// The same orbit data computed without the quadratic pair table: pairs are
// labeled by mapping the first coordinate to sigma_0 and canonicalizing the
// second under the 2m-element stabilizer of sigma_0.  Structure constants
// are accumulated per orbit column and audited against a second
// representative pair.
struct CyclicPairOrbits {
  int m = 0;
  int n = 0;  // (m-1)!
  int M = 0;  // orbit count
  std::vector<int> rep_tau;            // orbit t represented by (sigma_0, tau)
  std::vector<long long> orbit_sizes;  // pairs per orbit
  std::vector<int> transpose_map;
  std::vector<int> label;  // label[j]: orbit of (sigma_0, j-th cyclic perm)
  StructureConstants sc;
};
CyclicPairOrbits cyclic_pair_orbits(int m);

enum class AlphaBackend {
  // Solve over the regular representation: one M x M matrix inequality with
  // the M orbit coefficients as variables.
  Regular,
  // Additionally block diagonalize that representation and solve over the
  // resulting small blocks; same optimum, far smaller matrices.  This is the
  // only path that fits in memory at m = 9.
  BlockCompressed,
};

struct AlphaResult {
  double value = 0.0;
  int orbit_count = 0;
  int iterations = 0;
  SdpStatus status = SdpStatus::Optimal;
  std::vector<std::string> warnings;
};

// alpha_m = min <X, C> over X psd with nonnegative entries and <X, J> = 1,
// where C is the star-crossing matrix on cyclic permutations of [m].  The
// default backend is Regular for m <= 8 and BlockCompressed for m = 9.
// Desk scale through m = 7; m = 8 takes minutes and m = 9 on the order of
// hours (the survey of record reports seven days for it on 2006 hardware).
AlphaResult alpha_m(int m);
AlphaResult alpha_m(int m, AlphaBackend backend);

// Floor((m-1)^2/4) * floor((n-1)^2/4): the crossing count of the classical
// layout of K_{m,n}, conjectured optimal.
long long zarankiewicz(long long m, long long n);
// The derived lower bound (alpha * n^2 - n * floor((m-1)^2/4)) / 2 on the
// crossing number of K_{m,n}.
double crossing_bound(int m, long long n, double alpha);

}  // namespace symmetra
