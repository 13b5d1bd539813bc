#include "symmetra/hamming.hpp"

#include <algorithm>
#include <bit>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <utility>

#include "symmetra/simplex.hpp"

namespace symmetra {

namespace {

using int128 = boost::multiprecision::int128_t;
using Rational = boost::multiprecision::cpp_rational;

long long checked_ll(const int128& v, const char* what) {
  if (v > std::numeric_limits<long long>::max() ||
      v < std::numeric_limits<long long>::min())
    throw Error(std::string(what) + " overflows 64-bit arithmetic");
  return static_cast<long long>(v);
}

// Per-word digit access for general alphabets; q = 2 callers use bit ops.
struct WordOps {
  int q, n;
  std::vector<long long> pw;  // pw[k] = q^k

  WordOps(int q_, int n_) : q(q_), n(n_), pw(n_ + 1) {
    pw[0] = 1;
    for (int k = 1; k <= n; ++k) pw[k] = pw[k - 1] * q;
  }
  int digit(long long u, int k) const {
    return static_cast<int>((u / pw[k]) % q);
  }
  int dist(long long u, long long v) const {
    if (q == 2) return std::popcount(static_cast<std::uint64_t>(u ^ v));
    int d = 0;
    long long a = u, b = v;
    for (int k = 0; k < n; ++k, a /= q, b /= q) d += (a % q) != (b % q);
    return d;
  }
};

void check_space(const HammingSpace& s) {
  if (s.q < 2 || s.n < 1) throw Error("Hamming space needs q >= 2 and n >= 1");
}

}  // namespace

long long HammingSpace::size() const {
  check_space(*this);
  return int_pow(q, n);
}

long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  int128 c = 1;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return checked_ll(c, "binomial coefficient");
}

long long int_pow(long long base, int e) {
  int128 r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return checked_ll(r, "integer power");
}

long long krawtchouk(int i, int x, int n, int q) {
  if (q < 2 || n < 1) throw Error("krawtchouk needs q >= 2 and n >= 1");
  if (i < 0 || i > n || x < 0 || x > n)
    throw Error("krawtchouk indices must satisfy 0 <= i, x <= n");
  int128 sum = 0;
  for (int k = 0; k <= i; ++k) {
    int128 term = int128(binomial(x, k)) * binomial(n - x, i - k);
    for (int e = 0; e < i - k; ++e) term *= q - 1;
    sum += (k % 2 == 0) ? term : -term;
  }
  return checked_ll(sum, "Krawtchouk value");
}

KrawtchoukTable krawtchouk_table(int n, int q) {
  KrawtchoukTable t;
  t.n = n;
  t.q = q;
  t.P.setZero(n + 1, n + 1);
  for (int i = 0; i <= n; ++i)
    for (int x = 0; x <= n; ++x) t.P(i, x) = krawtchouk(i, x, n, q);
  return t;
}

AlgebraBasis distance_basis(const HammingSpace& space, int max_n) {
  check_space(space);
  const long long N = space.size();
  if (N > (1LL << max_n))
    throw TooLarge("distance basis needs " + std::to_string(N) +
                   " ambient dimensions, cap is 2^" + std::to_string(max_n));
  const WordOps ops(space.q, space.n);
  AlgebraBasis basis;
  basis.n = static_cast<int>(N);
  basis.hermitian_closed = true;
  basis.adjoint_map.resize(space.n + 1);
  for (int i = 0; i <= space.n; ++i) {
    basis.adjoint_map[i] = i;  // each A_i is symmetric
    std::vector<Eigen::Triplet<Cplx>> trip;
    for (long long u = 0; u < N; ++u)
      for (long long v = 0; v < N; ++v)
        if (ops.dist(u, v) == i)
          trip.emplace_back(static_cast<int>(u), static_cast<int>(v),
                            Cplx(1.0, 0.0));
    SpMatC A(static_cast<int>(N), static_cast<int>(N));
    A.setFromTriplets(trip.begin(), trip.end());
    basis.elements.push_back(std::move(A));
  }
  return basis;
}

MatI distance_graph(const HammingSpace& space, int d) {
  check_space(space);
  if (d < 1 || d > space.n) throw Error("distance graph needs 1 <= d <= n");
  const long long N = space.size();
  if (N > (1LL << 12))
    throw TooLarge("distance graph on " + std::to_string(N) + " words");
  const WordOps ops(space.q, space.n);
  MatI adj = MatI::Zero(static_cast<int>(N), static_cast<int>(N));
  for (long long u = 0; u < N; ++u)
    for (long long v = u + 1; v < N; ++v) {
      const int dist = ops.dist(u, v);
      if (dist >= 1 && dist < d) {
        adj(static_cast<int>(u), static_cast<int>(v)) = 1;
        adj(static_cast<int>(v), static_cast<int>(u)) = 1;
      }
    }
  return adj;
}

double spectral_identity_error(const HammingSpace& space, int rows_per_weight,
                               std::uint64_t seed) {
  check_space(space);
  const long long N = space.size();
  if (N > (1LL << 22))
    throw TooLarge("character check on " + std::to_string(N) + " words");
  const int n = space.n, q = space.q;
  const WordOps ops(q, n);
  const KrawtchoukTable tab = krawtchouk_table(n, q);
  const double two_pi = 2.0 * std::acos(-1.0);
  std::vector<Cplx> omega(static_cast<std::size_t>(q));
  for (int a = 0; a < q; ++a)
    omega[static_cast<std::size_t>(a)] = std::polar(1.0, two_pi * a / q);
  Rng rng(seed);

  double worst = 0.0;
  std::vector<Cplx> acc(static_cast<std::size_t>(n) + 1);
  for (int m = 0; m <= n; ++m) {
    // character w with digit vector (1,...,1,0,...,0) of weight m; the row
    // sum over words at distance i from u must equal omega^<u,w> P_i(m)
    for (int row = 0; row < rows_per_weight; ++row) {
      const long long u =
          (row == 0)
              ? 0
              : static_cast<long long>(rng.below(static_cast<std::uint64_t>(N)));
      std::fill(acc.begin(), acc.end(), Cplx(0.0, 0.0));
      for (long long z = 0; z < N; ++z) {
        long long zz = z;
        int ip = 0, dist = 0;
        for (int k = 0; k < n; ++k, zz /= q) {
          const int dig = static_cast<int>(zz % q);
          if (k < m) ip += dig;
          if (dig != ops.digit(u, k)) ++dist;
        }
        acc[static_cast<std::size_t>(dist)] += omega[static_cast<std::size_t>(ip % q)];
      }
      int uip = 0;
      for (int k = 0; k < m; ++k) uip += ops.digit(u, k);
      const Cplx phase = omega[static_cast<std::size_t>(uip % q)];
      for (int i = 0; i <= n; ++i)
        worst = std::max(
            worst, std::abs(acc[static_cast<std::size_t>(i)] -
                            phase * static_cast<double>(tab.P(i, m))));
    }
  }
  return worst;
}

namespace {

template <class S>
LpResult<S> delsarte_solve(int n, int d, int q) {
  LpProblem<S> lp;
  lp.n = n - d + 1;  // x_d .. x_n; x_0 = 1 handled as a constant
  lp.maximize = true;
  lp.c.resize(static_cast<std::size_t>(lp.n));
  for (int i = d; i <= n; ++i)
    lp.c[static_cast<std::size_t>(i - d)] =
        S(binomial(n, i) * int_pow(q - 1, i));
  for (int j = 0; j <= n; ++j) {
    std::vector<S> row(static_cast<std::size_t>(lp.n));
    for (int i = d; i <= n; ++i)
      row[static_cast<std::size_t>(i - d)] = S(krawtchouk(i, j, n, q));
    lp.add_row(std::move(row), Cmp::GE, S(-1));  // -P_0(j)
  }
  auto res = solve_lp(lp);
  if (res.status != LpStatus::Optimal)
    throw Error("distance-distribution LP did not reach an optimum");
  return res;
}

}  // namespace

LpBound delsarte_lp(int n, int d, int q, bool rational) {
  if (q < 2 || n < 1) throw Error("Hamming space needs q >= 2 and n >= 1");
  if (d < 1 || d > n) throw Error("delsarte_lp needs 1 <= d <= n");
  LpBound out;
  out.distribution = VecD::Zero(n + 1);
  out.distribution[0] = 1.0;
  if (rational) {
    const auto res = delsarte_solve<Rational>(n, d, q);
    const Rational value = 1 + res.value;
    out.value = value.convert_to<double>();
    out.exact = value.str();
    out.certified = true;
    for (int i = d; i <= n; ++i)
      out.distribution[i] = res.x[static_cast<std::size_t>(i - d)].convert_to<double>();
  } else {
    const auto res = delsarte_solve<double>(n, d, q);
    out.value = 1.0 + res.value;
    for (int i = d; i <= n; ++i)
      out.distribution[i] = res.x[static_cast<std::size_t>(i - d)];
  }
  return out;
}

int TripleOrbitIndex::id(int i, int j, int t) const {
  if (i < 0 || j < 0 || t < 0 || i > n || j > n || t > n) return -1;
  return lut[(static_cast<std::size_t>(i) * (n + 1) + j) * (n + 1) + t];
}

std::array<int, 3> TripleOrbitIndex::distances(int r) const {
  const auto [i, j, t] = ijt[static_cast<std::size_t>(r)];
  return {i, j, i + j - 2 * t};
}

TripleOrbitIndex triple_orbit_index(int n) {
  if (n < 1) throw Error("triple orbits need n >= 1");
  TripleOrbitIndex idx;
  idx.n = n;
  idx.lut.assign(static_cast<std::size_t>(n + 1) * (n + 1) * (n + 1), -1);
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      for (int t = 0; t <= std::min(i, j); ++t) {
        if (i + j - t > n) continue;
        idx.lut[(static_cast<std::size_t>(i) * (n + 1) + j) * (n + 1) + t] =
            static_cast<int>(idx.ijt.size());
        idx.ijt.push_back({i, j, t});
      }

  // Reordering the triple roles is generated by swapping the two free words,
  // (i,j,t) -> (j,i,t), and by re-rooting at the first free word,
  // (i,j,t) -> (i, i+j-2t, i-t).
  const int M = idx.count();
  idx.cls.assign(static_cast<std::size_t>(M), -1);
  for (int r = 0; r < M; ++r) {
    if (idx.cls[static_cast<std::size_t>(r)] >= 0) continue;
    const int c = static_cast<int>(idx.class_members.size());
    std::vector<int> stack{r}, members;
    idx.cls[static_cast<std::size_t>(r)] = c;
    while (!stack.empty()) {
      const int s = stack.back();
      stack.pop_back();
      members.push_back(s);
      const auto [i, j, t] = idx.ijt[static_cast<std::size_t>(s)];
      for (const int nb : {idx.id(j, i, t), idx.id(i, i + j - 2 * t, i - t)}) {
        if (nb < 0) throw Error("triple reordering left the index set");
        if (idx.cls[static_cast<std::size_t>(nb)] < 0) {
          idx.cls[static_cast<std::size_t>(nb)] = c;
          stack.push_back(nb);
        } else if (idx.cls[static_cast<std::size_t>(nb)] != c) {
          throw Error("triple reordering classes are inconsistent");
        }
      }
    }
    std::sort(members.begin(), members.end());
    idx.class_members.push_back(std::move(members));
  }
  return idx;
}

namespace {

// Counts, for every word z, the orbit pair of (u,z) and (z,w); cnt is M*M
// dense with a touched-list so repeated calls stay cheap.
void count_triples(int n, long long u, long long w, const TripleOrbitIndex& idx,
                   std::vector<long long>& cnt, std::vector<int>& touched) {
  const int M = idx.count();
  const int ui = std::popcount(static_cast<std::uint64_t>(u));
  const int wj = std::popcount(static_cast<std::uint64_t>(w));
  for (long long z = 0; z < (1LL << n); ++z) {
    const int zi = std::popcount(static_cast<std::uint64_t>(z));
    const int r =
        idx.id(ui, zi, std::popcount(static_cast<std::uint64_t>(u & z)));
    const int s =
        idx.id(zi, wj, std::popcount(static_cast<std::uint64_t>(z & w)));
    if (r < 0 || s < 0) throw Error("word pair fell outside the orbit index");
    const int key = r * M + s;
    if (cnt[static_cast<std::size_t>(key)] == 0) touched.push_back(key);
    ++cnt[static_cast<std::size_t>(key)];
  }
}

long long reverse_bits(long long x, int n) {
  long long y = 0;
  for (int k = 0; k < n; ++k)
    if (x >> k & 1) y |= 1LL << (n - 1 - k);
  return y;
}

}  // namespace

StructureConstants terwilliger_structure_constants(int n) {
  if (n < 1) throw Error("Terwilliger structure constants need n >= 1");
  if (n > 14) throw TooLarge("word enumeration is capped at n = 14");
  const TripleOrbitIndex idx = triple_orbit_index(n);
  const int M = idx.count();
  StructureConstants sc;
  sc.M = M;
  sc.norms_squared.resize(static_cast<std::size_t>(M));
  for (int r = 0; r < M; ++r) {
    const auto [i, j, t] = idx.ijt[static_cast<std::size_t>(r)];
    sc.norms_squared[static_cast<std::size_t>(r)] =
        binomial(n, i) * binomial(i, t) * binomial(n - i, j - t);
  }
  sc.p.assign(static_cast<std::size_t>(M) * M, {});

  std::vector<long long> cnt(static_cast<std::size_t>(M) * M, 0);
  std::vector<long long> cnt2(cnt);
  std::vector<int> touched, touched2;
  for (int T = 0; T < M; ++T) {
    const auto [i, j, t] = idx.ijt[static_cast<std::size_t>(T)];
    // representative pair: |u| = i, |w| = j, |u & w| = t
    const long long u = (1LL << i) - 1;
    const long long w = ((1LL << t) - 1) | (((1LL << (j - t)) - 1) << i);
    count_triples(n, u, w, idx, cnt, touched);
    // audit against the coordinate-reversed representative
    count_triples(n, reverse_bits(u, n), reverse_bits(w, n), idx, cnt2,
                  touched2);
    if (touched.size() != touched2.size())
      throw RepresentativeMismatch(
          "triple counts differ between orbit representatives");
    for (const int key : touched)
      if (cnt[static_cast<std::size_t>(key)] !=
          cnt2[static_cast<std::size_t>(key)])
        throw RepresentativeMismatch(
            "triple counts differ between orbit representatives");
    for (const int key : touched) {
      sc.p[static_cast<std::size_t>(key)].emplace_back(
          T, cnt[static_cast<std::size_t>(key)]);
      cnt[static_cast<std::size_t>(key)] = 0;
    }
    for (const int key : touched2) cnt2[static_cast<std::size_t>(key)] = 0;
    touched.clear();
    touched2.clear();
  }
  return sc;
}

AlgebraBasis terwilliger_basis(int n) {
  if (n < 1) throw Error("Terwilliger basis needs n >= 1");
  if (n > 12) throw TooLarge("explicit Terwilliger basis is capped at n = 12");
  const TripleOrbitIndex idx = triple_orbit_index(n);
  const int M = idx.count();
  const int N = 1 << n;
  std::vector<std::vector<std::pair<int, int>>> entries(
      static_cast<std::size_t>(M));
  for (int v = 0; v < N; ++v)
    for (int w = 0; w < N; ++w) {
      const int r = idx.id(std::popcount(static_cast<unsigned>(v)),
                           std::popcount(static_cast<unsigned>(w)),
                           std::popcount(static_cast<unsigned>(v & w)));
      entries[static_cast<std::size_t>(r)].emplace_back(v, w);
    }
  AlgebraBasis basis;
  basis.n = N;
  basis.hermitian_closed = true;
  basis.adjoint_map.resize(static_cast<std::size_t>(M));
  for (int r = 0; r < M; ++r) {
    const auto [i, j, t] = idx.ijt[static_cast<std::size_t>(r)];
    basis.adjoint_map[static_cast<std::size_t>(r)] = idx.id(j, i, t);
    std::vector<Eigen::Triplet<Cplx>> trip;
    trip.reserve(entries[static_cast<std::size_t>(r)].size());
    for (const auto& [v, w] : entries[static_cast<std::size_t>(r)])
      trip.emplace_back(v, w, Cplx(1.0, 0.0));
    SpMatC A(N, N);
    A.setFromTriplets(trip.begin(), trip.end());
    basis.elements.push_back(std::move(A));
  }
  return basis;
}

namespace {

// Class-summed coefficients of the two psd constraints, one block list per
// kept variable.  block_of(r) yields the constraint blocks of basis element
// r; elements are visited one at a time so the images never sit in memory
// all at once.
struct TripleProgram {
  std::vector<int> kept;          // class id per variable
  std::vector<int> var_of_class;  // -1 for dropped classes
  std::vector<std::vector<MatD>> K1, K2;  // [variable][block]
};

TripleProgram assemble_triple_program(
    int d, const TripleOrbitIndex& idx,
    const std::function<std::vector<MatD>(int)>& block_of) {
  const int M = idx.count();
  const int C = static_cast<int>(idx.class_members.size());
  TripleProgram tp;
  tp.var_of_class.assign(static_cast<std::size_t>(C), -1);
  for (int c = 0; c < C; ++c) {
    const auto dist =
        idx.distances(idx.class_members[static_cast<std::size_t>(c)][0]);
    const bool allowed = std::none_of(dist.begin(), dist.end(), [&](int delta) {
      return delta >= 1 && delta <= d - 1;
    });
    if (allowed) {
      tp.var_of_class[static_cast<std::size_t>(c)] =
          static_cast<int>(tp.kept.size());
      tp.kept.push_back(c);
    }
  }
  std::vector<MatD> zero = block_of(0);
  for (auto& B : zero) B.setZero();
  tp.K1.assign(tp.kept.size(), zero);
  tp.K2.assign(tp.kept.size(), zero);
  const int nb = static_cast<int>(zero.size());
  for (int r = 0; r < M; ++r) {
    const int own =
        tp.var_of_class[static_cast<std::size_t>(idx.cls[static_cast<std::size_t>(r)])];
    const int delta = idx.distances(r)[2];
    const int pair_var = tp.var_of_class[static_cast<std::size_t>(
        idx.cls[static_cast<std::size_t>(idx.id(delta, 0, 0))])];
    if (own < 0 && pair_var < 0) continue;
    const std::vector<MatD> blocks = block_of(r);
    for (int k = 0; k < nb; ++k) {
      const MatD& L = blocks[static_cast<std::size_t>(k)];
      if (own >= 0) {
        tp.K1[static_cast<std::size_t>(own)][static_cast<std::size_t>(k)] += L;
        tp.K2[static_cast<std::size_t>(own)][static_cast<std::size_t>(k)] -= L;
      }
      if (pair_var >= 0)
        tp.K2[static_cast<std::size_t>(pair_var)][static_cast<std::size_t>(k)] += L;
    }
  }
  return tp;
}

}  // namespace

TripleBound schrijver_triple_sdp(int n, int d, TripleBackend backend) {
  if (n < 1 || d < 1 || d > n) throw Error("triple bound needs 1 <= d <= n");
  const int cap = backend == TripleBackend::Regular ? 14 : 10;
  if (n > cap)
    throw TooLarge("triple bound backend is capped at n = " + std::to_string(cap));
  const TripleOrbitIndex idx = triple_orbit_index(n);
  const int M = idx.count();

  TripleBound out;
  out.orbit_count = M;

  TripleProgram tp;
  if (backend == TripleBackend::Regular) {
    const StructureConstants sc = terwilliger_structure_constants(n);
    std::vector<double> nrm(static_cast<std::size_t>(M));
    for (int r = 0; r < M; ++r)
      nrm[static_cast<std::size_t>(r)] = std::sqrt(
          static_cast<double>(sc.norms_squared[static_cast<std::size_t>(r)]));
    // L(A_r)_{st} = (|A_s| / |A_t|) p^s_{rt}
    tp = assemble_triple_program(d, idx, [&](int r) {
      MatD L = MatD::Zero(M, M);
      for (int t = 0; t < M; ++t)
        for (const auto& [s, val] : sc.product(r, t))
          L(s, t) = nrm[static_cast<std::size_t>(s)] /
                    nrm[static_cast<std::size_t>(t)] * static_cast<double>(val);
      return std::vector<MatD>{std::move(L)};
    });
  } else {
    const AlgebraBasis basis = terwilliger_basis(n);
    const StructureConstants sc = terwilliger_structure_constants(n);
    const BlockDiagonalization bd = block_diagonalize(basis);
    const StarIsoReport rep = verify_star_isomorphism(basis, bd, 1e-7, &sc);
    if (!rep.pass)
      throw UnverifiedIsomorphism("block diagonalization failed verification");
    std::vector<int> expect;
    for (int k = 0; 2 * k <= n; ++k) expect.push_back(n + 1 - 2 * k);
    std::vector<int> got = bd.block_sizes;
    std::sort(got.begin(), got.end(), std::greater<>());
    if (got != expect)
      throw Error("unexpected block structure for the triple orbit algebra");
    if (!bd.real_images())
      throw Error("triple orbit algebra produced complex blocks");
    const int nb = static_cast<int>(bd.block_sizes.size());
    tp = assemble_triple_program(d, idx, [&](int r) {
      std::vector<MatD> blocks(static_cast<std::size_t>(nb));
      for (int k = 0; k < nb; ++k)
        blocks[static_cast<std::size_t>(k)] =
            bd.images[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)]
                .real();
      return blocks;
    });
  }

  LinearMatrixProgram p;
  p.n = static_cast<int>(tp.kept.size());
  p.maximize = true;
  p.c = VecD::Zero(p.n);
  for (int i = 0; i <= n; ++i) {
    if (i >= 1 && i <= d - 1) continue;  // forbidden pair distance
    const int var = tp.var_of_class[static_cast<std::size_t>(
        idx.cls[static_cast<std::size_t>(idx.id(i, 0, 0))])];
    p.c[var] += static_cast<double>(binomial(n, i));
  }
  p.E = MatD::Zero(1, p.n);
  p.E(0, tp.var_of_class[static_cast<std::size_t>(
             idx.cls[static_cast<std::size_t>(idx.id(0, 0, 0))])]) = 1.0;
  p.f = VecD::Ones(1);
  p.nonneg.resize(static_cast<std::size_t>(p.n));
  std::iota(p.nonneg.begin(), p.nonneg.end(), 0);
  const int nb = static_cast<int>(tp.K1[0].size());
  for (int k = 0; k < nb; ++k) {
    for (const auto* K : {&tp.K1, &tp.K2}) {
      LinearMatrixProgram::Lmi lmi;
      lmi.rhs = MatD::Zero((*K)[0][static_cast<std::size_t>(k)].rows(),
                           (*K)[0][static_cast<std::size_t>(k)].cols());
      for (int v = 0; v < p.n; ++v)
        lmi.coeff.push_back(
            (*K)[static_cast<std::size_t>(v)][static_cast<std::size_t>(k)]);
      p.lmis.push_back(std::move(lmi));
    }
  }

  ReducedSDP red = to_sdpa_form(p);
  for (const auto& w : red.warnings) out.warnings.push_back(w);
  const SDPSolution sol = solve_sdp(red.sdpa);
  out.status = sol.status;
  if (sol.status != SdpStatus::Optimal && sol.status != SdpStatus::IterationLimit)
    throw Error("triple bound solve failed: " + sol.message);
  out.bound = red.value(sol);
  out.variable_count = p.n;
  out.block_sizes = red.sdpa.block_sizes;
  out.sdpa = std::move(red.sdpa);
  return out;
}

}  // namespace symmetra
