#include "symmetra/crossing.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <utility>

#include "symmetra/star_algebra.hpp"

namespace symmetra {

namespace {

constexpr int kMinM = 3;
constexpr int kMaxM = 9;

void check_m(int m, const char* where) {
  if (m < kMinM || m > kMaxM)
    throw Error(std::string(where) + ": m must be between 3 and 9, got " +
                std::to_string(m));
}

int factorial(int k) {
  int f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// Internal form of a cyclic permutation: its 0-based cycle sequence rotated
// so position 0 holds the point 0; seq[(i+1) mod m] is the image of seq[i].
using Seq = std::array<int, kMaxM>;

Seq to_seq(const CyclicPerm& c) {
  const int m = c.m();
  Seq s{};
  std::array<bool, kMaxM> seen{};
  for (int i = 0; i < m; ++i) {
    const int v = c.cycle[i] - 1;
    if (v < 0 || v >= m) throw Error("cycle entry out of range");
    if (seen[v]) throw Error("cycle entry repeated");
    seen[v] = true;
    s[i] = v;
  }
  if (s[0] != 0) throw Error("canonical cycle must start at 1");
  return s;
}

CyclicPerm from_seq(const Seq& s, int m) {
  CyclicPerm c;
  c.cycle.resize(m);
  for (int i = 0; i < m; ++i) c.cycle[i] = s[i] + 1;
  return c;
}

void canon_rotate(Seq& s, int m) {
  int z = 0;
  while (s[z] != 0) ++z;
  if (z == 0) return;
  Seq t;
  for (int i = 0; i < m; ++i) t[i] = s[(z + i) % m];
  s = t;
}

// Lexicographic rank of the tail s[1..m-1] among permutations of {1,...,m-1}.
int rank_seq(const Seq& s, int m) {
  int r = 0;
  int f = factorial(m - 2);
  for (int i = 1; i < m - 1; ++i) {
    int c = 0;
    for (int j = i + 1; j < m; ++j)
      if (s[j] < s[i]) ++c;
    r += c * f;
    f /= m - 1 - i;
  }
  return r;
}

Seq unrank_seq(int m, int idx) {
  Seq s{};
  std::array<int, kMaxM> pool{};
  for (int i = 0; i < m - 1; ++i) pool[i] = i + 1;
  int f = factorial(m - 2);
  int left = m - 1;
  for (int i = 1; i < m; ++i) {
    const int q = left > 1 ? idx / f : 0;
    idx -= q * f;
    s[i] = pool[q];
    for (int j = q; j < left - 1; ++j) pool[j] = pool[j + 1];
    --left;
    if (left > 1) f /= left;
  }
  return s;
}

Seq reversed_seq(const Seq& s, int m) {
  Seq t;
  t[0] = s[0];
  for (int i = 1; i < m; ++i) t[i] = s[m - i];
  return t;
}

// pi sigma pi^{-1} maps pi(x) -> pi(sigma(x)): apply pi entrywise, rotate.
template <class Map>
Seq conj_seq(const Map& pi, const Seq& s, int m) {
  Seq t;
  for (int i = 0; i < m; ++i) t[i] = pi[s[i]];
  canon_rotate(t, m);
  return t;
}

// All cycle sequences in enumerate order, flattened row-major.
std::vector<int> all_seqs(int m) {
  const int n = factorial(m - 1);
  std::vector<int> flat(static_cast<std::size_t>(n) * m);
  for (int j = 0; j < n; ++j) {
    const Seq s = unrank_seq(m, j);
    for (int i = 0; i < m; ++i) flat[static_cast<std::size_t>(j) * m + i] = s[i];
  }
  return flat;
}

Seq seq_at(const std::vector<int>& flat, int m, int j) {
  Seq s{};
  for (int i = 0; i < m; ++i) s[i] = flat[static_cast<std::size_t>(j) * m + i];
  return s;
}

// Distances from src in the graph whose moves swap two cyclically adjacent
// entries of the cycle sequence.
std::vector<int> bfs_swap_distances(int m, int src) {
  const int n = factorial(m - 1);
  std::vector<int> dist(n, -1);
  std::vector<int> queue;
  queue.reserve(n);
  dist[src] = 0;
  queue.push_back(src);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int cur = queue[head];
    const Seq s = unrank_seq(m, cur);
    for (int p = 0; p < m; ++p) {
      Seq t = s;
      std::swap(t[p], t[(p + 1) % m]);
      canon_rotate(t, m);
      const int nb = rank_seq(t, m);
      if (dist[nb] < 0) {
        dist[nb] = dist[cur] + 1;
        queue.push_back(nb);
      }
    }
  }
  return dist;
}

int require_same_m(const CyclicPerm& sigma, const CyclicPerm& tau,
                   const char* where) {
  if (sigma.m() != tau.m())
    throw Error(std::string(where) + ": cyclic permutations of different m");
  check_m(sigma.m(), where);
  return sigma.m();
}

}  // namespace

Permutation CyclicPerm::as_permutation() const {
  check_m(m(), "CyclicPerm");
  const Seq s = to_seq(*this);
  std::vector<int> img(m());
  for (int i = 0; i < m(); ++i) img[s[i]] = s[(i + 1) % m()];
  return Permutation(std::move(img));
}

CyclicPerm CyclicPerm::from_permutation(const Permutation& p) {
  const int mm = p.size();
  check_m(mm, "CyclicPerm::from_permutation");
  CyclicPerm c;
  c.cycle.resize(mm);
  int x = 0;
  for (int i = 0; i < mm; ++i) {
    c.cycle[i] = x + 1;
    x = p(x);
    if (x == 0 && i + 1 != mm)
      throw Error("permutation is not a single m-cycle");
  }
  if (x != 0) throw Error("permutation is not a single m-cycle");
  return c;
}

CyclicPerm CyclicPerm::reversed() const {
  check_m(m(), "CyclicPerm");
  return from_seq(reversed_seq(to_seq(*this), m()), m());
}

std::vector<CyclicPerm> enumerate_cyclic(int m) {
  check_m(m, "enumerate_cyclic");
  const int n = factorial(m - 1);
  std::vector<CyclicPerm> out;
  out.reserve(n);
  for (int j = 0; j < n; ++j) out.push_back(from_seq(unrank_seq(m, j), m));
  return out;
}

int cyclic_index(const CyclicPerm& c) {
  check_m(c.m(), "cyclic_index");
  return rank_seq(to_seq(c), c.m());
}

std::vector<int> star_crossing_row(const CyclicPerm& sigma) {
  const int m = sigma.m();
  check_m(m, "star_crossing_row");
  const int n = factorial(m - 1);
  const std::vector<int> dist =
      bfs_swap_distances(m, rank_seq(to_seq(sigma), m));
  std::vector<int> row(n);
  for (int j = 0; j < n; ++j)
    row[j] = dist[rank_seq(reversed_seq(unrank_seq(m, j), m), m)];
  return row;
}

int star_crossing(const CyclicPerm& sigma, const CyclicPerm& tau) {
  const int m = require_same_m(sigma, tau, "star_crossing");
  const std::vector<int> dist =
      bfs_swap_distances(m, rank_seq(to_seq(sigma), m));
  return dist[rank_seq(reversed_seq(to_seq(tau), m), m)];
}

int star_crossing_oracle(const CyclicPerm& sigma, const CyclicPerm& tau) {
  const int m = require_same_m(sigma, tau, "star_crossing_oracle");
  if (m > 4)
    throw TooLarge(
        "star_crossing_oracle enumerates all winding assignments "
        "and is limited to m <= 4");
  const Seq ss = to_seq(sigma), ts = to_seq(tau);
  std::array<double, kMaxM> a{}, b{};
  for (int i = 0; i < m; ++i) {
    // Spoke v leaves the inner star at angle a[v] (clockwise order sigma) and
    // meets the outer boundary at angle b[v]; the outer rotation is seen
    // mirrored from inside the annulus, hence the sign.
    a[ss[i]] = static_cast<double>(i) / m;
    b[ts[i]] = static_cast<double>(-i) / m;
  }
  // Curve v winds k[v] extra turns on its way out.  Two radially monotone
  // curves must cross |floor(beta) - floor(alpha)| times, where alpha and
  // beta are their angular differences at the two boundaries, and straight
  // lines in (angle, radius) coordinates attain that for all pairs at once.
  // A global twist fixes k[0] = 0; an optimal assignment never needs |k|
  // beyond m.
  std::array<int, kMaxM> k{};
  int best = std::numeric_limits<int>::max();
  const int lo = -m, hi = m;
  for (int v = 1; v < m; ++v) k[v] = lo;
  for (;;) {
    int tot = 0;
    for (int i = 0; i < m && tot < best; ++i)
      for (int j = i + 1; j < m; ++j) {
        const double alpha = a[i] - a[j];
        const double beta = (b[i] + k[i]) - (b[j] + k[j]);
        tot += std::abs(static_cast<int>(std::floor(beta)) -
                        static_cast<int>(std::floor(alpha)));
      }
    best = std::min(best, tot);
    int v = 1;
    while (v < m && k[v] == hi) k[v++] = lo;
    if (v == m) break;
    ++k[v];
  }
  return best;
}

GroupAction crossing_action(int m) {
  check_m(m, "crossing_action");
  const int n = factorial(m - 1);
  std::array<int, kMaxM> swap01{}, cyc{};
  for (int x = 0; x < m; ++x) {
    swap01[x] = x;
    cyc[x] = (x + 1) % m;
  }
  std::swap(swap01[0], swap01[1]);

  GroupAction g;
  g.n = n;
  std::vector<int> img(n);
  for (int j = 0; j < n; ++j)
    img[j] = rank_seq(conj_seq(swap01, unrank_seq(m, j), m), m);
  g.generators.emplace_back(img);
  for (int j = 0; j < n; ++j)
    img[j] = rank_seq(conj_seq(cyc, unrank_seq(m, j), m), m);
  g.generators.emplace_back(img);
  for (int j = 0; j < n; ++j)
    img[j] = rank_seq(reversed_seq(unrank_seq(m, j), m), m);
  g.generators.emplace_back(std::move(img));
  return g;
}

PairOrbitStructure orbit_structure(int m) {
  check_m(m, "orbit_structure");
  if (m > 8)
    throw TooLarge("orbit_structure stores an 8!^2 pair table at m = 9; "
                   "use cyclic_pair_orbits");
  PairOrbitStructure orbits = pair_orbits(crossing_action(m));
  for (const auto& [i, j] : orbits.representative)
    if (i != 0) throw Error("orbit representative escaped the row of sigma_0");
  return orbits;
}

CyclicPairOrbits cyclic_pair_orbits(int m) {
  check_m(m, "cyclic_pair_orbits");
  CyclicPairOrbits out;
  out.m = m;
  const int n = out.n = factorial(m - 1);
  const std::vector<int> seqs = all_seqs(m);

  // Stabilizer of sigma_0 = (0 1 ... m-1) inside S_m x {+-1}: conjugation by
  // a power of sigma_0 keeps it, and conjugation by x -> -x mod m undoes an
  // inversion.  That is 2m elements, and (sigma_0, tau), (sigma_0, tau') lie
  // in the same pair orbit exactly when a stabilizer element carries tau to
  // tau'.
  std::vector<int> stab(static_cast<std::size_t>(2 * m) * n);
  for (int sidx = 0; sidx < 2 * m; ++sidx) {
    const bool invert = sidx >= m;
    const int shift = sidx % m;
    std::array<int, kMaxM> pi{};
    for (int x = 0; x < m; ++x) {
      const int y = (x + shift) % m;
      pi[x] = invert ? (m - y) % m : y;
    }
    for (int j = 0; j < n; ++j) {
      Seq s = seq_at(seqs, m, j);
      if (invert) s = reversed_seq(s, m);
      stab[static_cast<std::size_t>(sidx) * n + j] =
          rank_seq(conj_seq(pi, s, m), m);
    }
  }

  // Orbit of (sigma_0, tau_j) is named by the smallest index in the
  // stabilizer orbit of j; increasing minima reproduce the id order the
  // generic pair scan would assign.
  std::vector<int> canon(n);
  for (int j = 0; j < n; ++j) {
    int best = j;
    for (int sidx = 0; sidx < 2 * m; ++sidx)
      best = std::min(best, stab[static_cast<std::size_t>(sidx) * n + j]);
    canon[j] = best;
  }
  stab.clear();
  stab.shrink_to_fit();
  std::vector<int> orbit_of_min(n, -1);
  for (int j = 0; j < n; ++j)
    if (canon[j] == j) {
      orbit_of_min[j] = out.M++;
      out.rep_tau.push_back(j);
    }
  out.label.resize(n);
  std::vector<long long> count(out.M, 0);
  for (int j = 0; j < n; ++j) {
    out.label[j] = orbit_of_min[canon[j]];
    ++count[out.label[j]];
  }
  out.orbit_sizes.resize(out.M);
  for (int t = 0; t < out.M; ++t)
    out.orbit_sizes[t] = count[t] * static_cast<long long>(n);

  // pull[j] conjugates the j-th cyclic permutation back to sigma_0.
  std::vector<int> pull(static_cast<std::size_t>(n) * m);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < m; ++i)
      pull[static_cast<std::size_t>(j) * m +
           seqs[static_cast<std::size_t>(j) * m + i]] = i;

  const int M = out.M;
  out.transpose_map.resize(M);
  for (int t = 0; t < M; ++t) {
    // (tau_t, sigma_0) maps under pull[tau_t] to (sigma_0, that conjugator
    // read as a cycle sequence).
    Seq s{};
    for (int i = 0; i < m; ++i)
      s[i] = pull[static_cast<std::size_t>(out.rep_tau[t]) * m + i];
    canon_rotate(s, m);
    out.transpose_map[t] = out.label[rank_seq(s, m)];
  }
  for (int t = 0; t < M; ++t)
    if (out.transpose_map[out.transpose_map[t]] != t)
      throw Error("transpose map is not an involution");

  // Structure constants.  For orbit t with representative (first, tau_t),
  // every middle point k adds one unit at (r, s) = (orbit of (first, k),
  // orbit of (k, tau_t)); the per-(r,s) totals are the p^t_{rs}.  rlab holds
  // the first-coordinate labels; the second is pulled back through pull[k].
  auto column_runs = [&](const std::vector<int>& rlab, const Seq& taut,
                         std::vector<std::int64_t>& keys) {
    keys.clear();
    for (int k = 0; k < n; ++k) {
      const int* pk = &pull[static_cast<std::size_t>(k) * m];
      Seq img;
      for (int i = 0; i < m; ++i) img[i] = pk[taut[i]];
      canon_rotate(img, m);
      keys.push_back(static_cast<std::int64_t>(rlab[k]) * M +
                     out.label[rank_seq(img, m)]);
    }
    std::sort(keys.begin(), keys.end());
  };

  std::vector<std::int64_t> keys;
  keys.reserve(n);
  std::vector<int> occ(static_cast<std::size_t>(M) * M, 0);
  for (int t = 0; t < M; ++t) {
    column_runs(out.label, seq_at(seqs, m, out.rep_tau[t]), keys);
    for (std::size_t i = 0; i < keys.size();) {
      std::size_t j = i;
      while (j < keys.size() && keys[j] == keys[i]) ++j;
      ++occ[static_cast<std::size_t>(keys[i])];
      i = j;
    }
  }
  out.sc.M = M;
  out.sc.norms_squared = out.orbit_sizes;
  out.sc.p.assign(static_cast<std::size_t>(M) * M, {});
  for (std::size_t cell = 0; cell < out.sc.p.size(); ++cell)
    if (occ[cell] > 0) out.sc.p[cell].reserve(occ[cell]);
  for (int t = 0; t < M; ++t) {
    column_runs(out.label, seq_at(seqs, m, out.rep_tau[t]), keys);
    for (std::size_t i = 0; i < keys.size();) {
      std::size_t j = i;
      while (j < keys.size() && keys[j] == keys[i]) ++j;
      out.sc.p[static_cast<std::size_t>(keys[i])].emplace_back(
          t, static_cast<long long>(j - i));
      i = j;
    }
  }

  // Audit from a second representative: conjugate both coordinates by the
  // transposition q = (1 2).  The first coordinate is no longer sigma_0, so
  // its labels go through an explicit pull-back, and the recount must
  // reproduce every stored column exactly.
  {
    std::array<int, kMaxM> q{};
    for (int x = 0; x < m; ++x) q[x] = x;
    std::swap(q[0], q[1]);
    Seq sigma0{};
    for (int i = 0; i < m; ++i) sigma0[i] = i;
    const Seq first = conj_seq(q, sigma0, m);
    std::array<int, kMaxM> pull_first{};
    for (int i = 0; i < m; ++i) pull_first[first[i]] = i;
    std::vector<int> rlab2(n);
    for (int k = 0; k < n; ++k)
      rlab2[k] =
          out.label[rank_seq(conj_seq(pull_first, seq_at(seqs, m, k), m), m)];

    std::vector<std::int64_t> keys2;
    keys2.reserve(n);
    for (int t = 0; t < M; ++t) {
      column_runs(rlab2, conj_seq(q, seq_at(seqs, m, out.rep_tau[t]), m),
                  keys2);
      // Stored column t and this recount both hold n units in total, so
      // matching every recount run against the stored lists pins both
      // directions.
      bool ok = true;
      for (std::size_t i = 0; i < keys2.size() && ok;) {
        std::size_t j = i;
        while (j < keys2.size() && keys2[j] == keys2[i]) ++j;
        const auto& lst = out.sc.p[static_cast<std::size_t>(keys2[i])];
        const auto it = std::lower_bound(
            lst.begin(), lst.end(), std::make_pair(t, 0LL),
            [](const std::pair<int, long long>& a,
               const std::pair<int, long long>& b) {
              return a.first < b.first;
            });
        ok = it != lst.end() && it->first == t &&
             it->second == static_cast<long long>(j - i);
        i = j;
      }
      if (!ok)
        throw RepresentativeMismatch(
            "structure constants disagree between representatives of orbit " +
            std::to_string(t));
    }
  }

  return out;
}

namespace {

// min <X, C> over psd X with nonnegative entries and <X, J> = 1, in orbit
// coordinates: objective sizes .* values, one normalization row, pairing
// rows for symmetry of X.
InvariantSDP crossing_invariant_sdp(const CyclicPairOrbits& od,
                                    const std::vector<long long>& cval) {
  const int M = od.M;
  InvariantSDP inv;
  inv.M = M;
  inv.maximize = false;
  inv.entrywise_nonneg = true;
  inv.obj = VecD(M);
  for (int r = 0; r < M; ++r)
    inv.obj[r] = static_cast<double>(od.orbit_sizes[r] * cval[r]);
  int pairs = 0;
  for (int r = 0; r < M; ++r)
    if (r < od.transpose_map[r]) ++pairs;
  inv.eq = MatD::Zero(1 + pairs, M);
  inv.eq_rhs = VecD::Zero(1 + pairs);
  for (int r = 0; r < M; ++r)
    inv.eq(0, r) = static_cast<double>(od.orbit_sizes[r]);
  inv.eq_rhs[0] = 1.0;
  int row = 1;
  for (int r = 0; r < M; ++r)
    if (r < od.transpose_map[r]) {
      inv.eq(row, r) = 1.0;
      inv.eq(row, od.transpose_map[r]) = -1.0;
      ++row;
    }
  return inv;
}

// L_r of the regular representation, as triplets from one sc column sweep.
template <class Scalar>
Eigen::SparseMatrix<Scalar> regular_rep_element(const StructureConstants& sc,
                                                const std::vector<double>& norm,
                                                int r) {
  const int M = sc.M;
  std::vector<Eigen::Triplet<Scalar>> trip;
  for (int t = 0; t < M; ++t)
    for (const auto& [s, v] : sc.product(r, t))
      trip.emplace_back(s, t,
                        Scalar(norm[s] / norm[t] * static_cast<double>(v)));
  Eigen::SparseMatrix<Scalar> L(M, M);
  L.setFromTriplets(trip.begin(), trip.end());
  return L;
}

std::vector<double> basis_norms(const StructureConstants& sc) {
  std::vector<double> norm(sc.M);
  for (int s = 0; s < sc.M; ++s)
    norm[s] = std::sqrt(static_cast<double>(sc.norms_squared[s]));
  return norm;
}

}  // namespace

AlphaResult alpha_m(int m) {
  return alpha_m(m, m >= 9 ? AlphaBackend::BlockCompressed
                           : AlphaBackend::Regular);
}

AlphaResult alpha_m(int m, AlphaBackend backend) {
  check_m(m, "alpha_m");
  const CyclicPairOrbits od = cyclic_pair_orbits(m);
  CyclicPerm sigma0;
  sigma0.cycle.resize(m);
  std::iota(sigma0.cycle.begin(), sigma0.cycle.end(), 1);
  const std::vector<int> row = star_crossing_row(sigma0);
  std::vector<long long> cval(od.M);
  for (int t = 0; t < od.M; ++t) cval[t] = row[od.rep_tau[t]];

  const InvariantSDP inv = crossing_invariant_sdp(od, cval);
  ReducedSDP red;
  if (backend == AlphaBackend::Regular) {
    red = reduce_regular(inv, od.sc);
  } else {
    const std::vector<double> norm = basis_norms(od.sc);
    BlockDiagonalization bd;
    {
      std::vector<SpMatD> L;
      L.reserve(od.M);
      for (int r = 0; r < od.M; ++r)
        L.push_back(regular_rep_element<double>(od.sc, norm, r));
      bd = block_diagonalize(L, od.M);
    }
    AlgebraBasis basis;
    basis.n = od.M;
    basis.hermitian_closed = true;
    basis.adjoint_map = od.transpose_map;
    basis.elements.reserve(od.M);
    for (int r = 0; r < od.M; ++r)
      basis.elements.push_back(regular_rep_element<Cplx>(od.sc, norm, r));
    red = reduce_block(inv, basis, bd, BlockMode::Coefficient, &od.sc);
  }

  const SDPSolution sol = solve_sdp(red.sdpa);
  AlphaResult out;
  out.value = red.value(sol);
  out.orbit_count = od.M;
  out.iterations = sol.iterations;
  out.status = sol.status;
  out.warnings = red.warnings;
  if (sol.status == SdpStatus::Optimal) {
    if (!sol.message.empty()) out.warnings.push_back(sol.message);
  } else if (sol.status == SdpStatus::IterationLimit ||
             sol.status == SdpStatus::NumericalTrouble) {
    out.warnings.push_back("solve stopped early (" + to_string(sol.status) +
                           "): " + sol.message);
  } else {
    throw Error("alpha_m solve failed (" + to_string(sol.status) +
                "): " + sol.message);
  }
  return out;
}

long long zarankiewicz(long long m, long long n) {
  return ((m - 1) * (m - 1) / 4) * ((n - 1) * (n - 1) / 4);
}

double crossing_bound(int m, long long n, double alpha) {
  check_m(m, "crossing_bound");
  const double diag = static_cast<double>((m - 1) * (m - 1) / 4);
  return 0.5 * alpha * static_cast<double>(n) * static_cast<double>(n) -
         0.5 * static_cast<double>(n) * diag;
}

}  // namespace symmetra
