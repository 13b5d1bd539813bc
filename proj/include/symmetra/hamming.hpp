#pragma once

#include <array>
#include <string>
#include <vector>

#include "symmetra/perm_group.hpp"
#include "symmetra/sdp_model.hpp"
#include "symmetra/solver.hpp"
#include "symmetra/star_algebra.hpp"
#include "symmetra/types.hpp"

namespace symmetra {

// Words of length n over an alphabet of size q, with Hamming distance.
struct HammingSpace {
  int q = 2;
  int n = 1;
  long long size() const;  // q^n
};

// Exact binomial coefficient; 0 outside 0 <= k <= n.  Throws on long long
// overflow.
long long binomial(int n, int k);

long long int_pow(long long base, int e);

// P_i(x) = sum_k (-1)^k binom(x,k) binom(n-x,i-k) (q-1)^(i-k), the
// eigenvalue of the distance-i adjacency matrix on the weight-x character
// eigenspace.  Exact integer arithmetic.
long long krawtchouk(int i, int x, int n, int q);

struct KrawtchoukTable {
  int n = 0;
  int q = 2;
  Mat<long long> P;  // (n+1) x (n+1), P(i, x) = P_i(x)
};
KrawtchoukTable krawtchouk_table(int n, int q);

// Distance matrices A_0..A_n on all q^n words: (A_i)_{u,v} = 1 iff
// d(u,v) = i.  They commute, sum to J, and span a *-algebra.
// Throws TooLarge when q^n exceeds 2^max_n.
AlgebraBasis distance_basis(const HammingSpace& space, int max_n = 12);

// Adjacency matrix of the graph joining words at distance 1..d-1 (the
// conflict graph of minimum-distance-d codes; empty for d = 1).
MatI distance_graph(const HammingSpace& space, int d);

// Verifies on sampled rows that every character vector u -> omega^<u,w> is an
// eigenvector of each A_i with eigenvalue P_i(|w|): for rows_per_weight
// sampled rows u and one w per weight, the row sum
//   sum_{z : d(u,z) = i} omega^<z,w>
// is compared against omega^<u,w> P_i(|w|).  Returns the largest absolute
// deviation.  Scales to spaces far beyond dense diagonalization.
double spectral_identity_error(const HammingSpace& space, int rows_per_weight = 3,
                               std::uint64_t seed = 1);

struct LpBound {
  double value = 0.0;
  bool certified = false;  // exact rational arithmetic end to end
  std::string exact;       // optimum as a rational string when certified
  VecD distribution;       // optimal x_0..x_n (zeros on excluded distances)
};

// Largest value of sum_i binom(n,i)(q-1)^i x_i subject to x_0 = 1,
// x_1..x_{d-1} = 0, x_i >= 0 and sum_i x_i P_i(j) >= 0 for all j: an upper
// bound for the size of length-n codes with minimum distance d.
LpBound delsarte_lp(int n, int d, int q, bool rational = false);

// Orbits of pairs (v, w) of binary words under coordinate permutations,
// indexed by (i, j, t) = (|v|, |w|, |v & w|) with 0 <= t <= i, j <= n and
// i + j - t <= n; there are binom(n+3, 3) of them, listed in lex order.
// Triples (u, v, w) of words correspond to pairs rooted at u = 0; reordering
// the triple permutes the pairwise distances {i, j, i+j-2t} and acts on the
// index set, partitioning it into symmetry classes.
struct TripleOrbitIndex {
  int n = 0;
  std::vector<std::array<int, 3>> ijt;  // lex order
  std::vector<int> cls;                 // symmetry class of each orbit
  std::vector<std::vector<int>> class_members;

  int count() const { return static_cast<int>(ijt.size()); }
  int id(int i, int j, int t) const;  // -1 when out of range
  // Pairwise distances {i, j, i+j-2t} of any triple in the orbit.
  std::array<int, 3> distances(int r) const;

  std::vector<int> lut;  // (n+1)^3 lookup, -1 on invalid triples
};
TripleOrbitIndex triple_orbit_index(int n);

// Structure constants of the 0/1 orbit basis A_{i,j}^t ((v,w) with |v| = i,
// |w| = j, |v & w| = t), computed by enumerating all 2^n words against an
// orbit representative and audited against a second representative.
// Throws TooLarge for n > 14.
StructureConstants terwilliger_structure_constants(int n);

// The same basis as explicit sparse 2^n x 2^n matrices, ordered like
// triple_orbit_index(n).  Throws TooLarge for n > 12.
AlgebraBasis terwilliger_basis(int n);

enum class TripleBackend { Regular, BlockDiag };

struct TripleBound {
  double bound = 0.0;
  SdpStatus status = SdpStatus::Optimal;
  SDPAProblem sdpa;               // the solved standard-form program
  int orbit_count = 0;            // binom(n+3,3)
  int variable_count = 0;         // symmetry classes kept
  std::vector<int> block_sizes;   // psd block sizes in the solved program
  std::vector<std::string> warnings;
};

// Upper bound for binary codes from the triple distribution: one variable
// per symmetry class of triple orbits, x_{(0,0,0)} = 1, classes meeting a
// forbidden distance dropped, objective sum_i binom(n,i) x_{(i,0,0)}, and
// the two psd constraints
//   sum x_{i,j}^t A_{i,j}^t >= 0,
//   sum (x_{i+j-2t,0}^0 - x_{i,j}^t) A_{i,j}^t >= 0
// mapped through the regular representation of the orbit algebra (n <= 14)
// or through its numerical block diagonalization (n <= 10).
TripleBound schrijver_triple_sdp(int n, int d,
                                 TripleBackend backend = TripleBackend::Regular);

}  // namespace symmetra
