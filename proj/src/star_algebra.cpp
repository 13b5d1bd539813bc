#include "symmetra/star_algebra.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cassert>
#include <cmath>
#include <complex>
#include <numeric>

namespace symmetra {

AlgebraBasis AlgebraBasis::from_orbits(const PairOrbitStructure& o) {
  AlgebraBasis b;
  b.n = o.n;
  b.elements.reserve(o.M);
  for (int r = 0; r < o.M; ++r) {
    std::vector<Eigen::Triplet<Cplx>> trip;
    for (int i = 0; i < o.n; ++i)
      for (int j = 0; j < o.n; ++j)
        if (o.orbit_id(i, j) == r) trip.emplace_back(i, j, Cplx(1.0, 0.0));
    SpMatC m(o.n, o.n);
    m.setFromTriplets(trip.begin(), trip.end());
    b.elements.push_back(std::move(m));
  }
  b.adjoint_map = o.transpose_map;
  b.hermitian_closed = true;
  return b;
}

AlgebraBasis AlgebraBasis::from_dense(const std::vector<MatC>& mats) {
  AlgebraBasis b;
  if (mats.empty()) throw Error("empty basis");
  b.n = static_cast<int>(mats[0].rows());
  for (const auto& m : mats) {
    if (m.rows() != b.n || m.cols() != b.n)
      throw Error("basis elements must share one square ambient dimension");
    b.elements.push_back(m.sparseView());
  }
  b.hermitian_closed = true;  // caller's responsibility; verified downstream
  return b;
}

AlgebraBasis AlgebraBasis::from_dense(const std::vector<MatD>& mats) {
  std::vector<MatC> cm;
  cm.reserve(mats.size());
  for (const auto& m : mats) cm.push_back(m.cast<Cplx>());
  return from_dense(cm);
}

RegularRep regular_rep(const StructureConstants& sc) {
  RegularRep rep;
  rep.M = sc.M;
  rep.norms_squared = sc.norms_squared;
  std::vector<double> norms(sc.M);
  for (int r = 0; r < sc.M; ++r)
    norms[r] = std::sqrt(static_cast<double>(sc.norms_squared[r]));
  rep.L.assign(sc.M, MatD::Zero(sc.M, sc.M));
  // L(C_r)_{st} = (||C_s||/||C_t||) p^s_{rt}
  for (int r = 0; r < sc.M; ++r)
    for (int t = 0; t < sc.M; ++t)
      for (const auto& [s, v] : sc.product(r, t))
        rep.L[r](s, t) = norms[s] / norms[t] * static_cast<double>(v);
  return rep;
}

Mat<long long> RegularRep::integer_conjugate(int r) const {
  Mat<long long> P = Mat<long long>::Zero(M, M);
  for (int s = 0; s < M; ++s)
    for (int t = 0; t < M; ++t) {
      const double v =
          L[r](s, t) * std::sqrt(static_cast<double>(norms_squared[t]) /
                                 static_cast<double>(norms_squared[s]));
      P(s, t) = std::llround(v);
    }
  return P;
}

bool BlockDiagonalization::real_images(double tol) const {
  for (const auto& per_r : images)
    for (const auto& blk : per_r)
      if (blk.imag().cwiseAbs().maxCoeff() > tol) return false;
  return true;
}

std::vector<MatC> BlockDiagonalization::apply(const VecC& x) const {
  std::vector<MatC> out;
  out.reserve(d);
  for (int k = 0; k < d; ++k)
    out.push_back(MatC::Zero(block_sizes[k], block_sizes[k]));
  for (int r = 0; r < M; ++r)
    for (int k = 0; k < d; ++k) out[k] += x[r] * images[r][k];
  return out;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

template <class S>
S random_coeff(Rng& rng);
template <>
double random_coeff<double>(Rng& rng) {
  return rng.sym();
}
template <>
Cplx random_coeff<Cplx>(Rng& rng) {
  return {rng.sym(), rng.sym()};
}

template <class S>
void add_scaled(Mat<S>& A, const S& c, const Mat<S>& e) {
  A += c * e;
}
template <class S>
void add_scaled(Mat<S>& A, const S& c, const Eigen::SparseMatrix<S>& e) {
  for (int k = 0; k < e.outerSize(); ++k)
    for (typename Eigen::SparseMatrix<S>::InnerIterator it(e, k); it; ++it)
      A(it.row(), it.col()) += c * it.value();
}

// One attempt of the decomposition over scalar S (double when the basis is
// real and expected to split over the reals, complex otherwise); returns
// false on a degeneracy that a new sample may fix.  The element type E is
// either Mat<S> or a sparse matrix over S; products against the dense
// eigenvector matrix work the same way for both.
template <class S, class E>
bool try_decompose(const std::vector<E>& elems, int n, std::uint64_t seed,
                   double tol, BlockDiagonalization& out, std::string& why) {
  const int M = static_cast<int>(elems.size());
  Rng rng(seed);

  // Generic self-adjoint element of the algebra.
  Mat<S> A = Mat<S>::Zero(n, n);
  for (int r = 0; r < M; ++r) add_scaled(A, random_coeff<S>(rng), elems[r]);
  A = ((A + A.adjoint()) / 2.0).eval();

  Eigen::SelfAdjointEigenSolver<Mat<S>> eig(A);
  if (eig.info() != Eigen::Success) {
    why = "eigendecomposition failed";
    return false;
  }
  const VecD lam = eig.eigenvalues();
  const Mat<S> U = eig.eigenvectors();
  const double scale = std::max(lam.cwiseAbs().maxCoeff(), 1e-300);

  // Cluster eigenvalues by relative gap.  The threshold sits far above
  // eigensolver noise (below 1e-12 * scale even for a few thousand ambient
  // dimensions) yet small enough that spectra with hundreds of distinct
  // eigenvalues rarely produce an accidental spacing inside the stability
  // window checked below.
  const double gap = 1e-9 * scale;
  std::vector<std::vector<int>> clusters;
  for (int i = 0; i < n; ++i) {
    if (i == 0 || lam[i] - lam[i - 1] > gap) clusters.push_back({});
    clusters.back().push_back(i);
  }
  const int c = static_cast<int>(clusters.size());

  // Genericity: the clustering must be stable across a two-decade widening
  // of the gap tolerance.  A spectral gap inside the ambiguous zone means the
  // sample cannot be trusted to separate the blocks; a fresh sample usually
  // can.  Truly degenerate samples that merge clusters consistently are
  // caught later by the dimension and residual checks.
  {
    int coarse = 0;
    for (int i = 0; i < n; ++i)
      if (i == 0 || lam[i] - lam[i - 1] > 100.0 * gap) ++coarse;
    if (coarse != c) {
      why = "eigenvalue clustering unstable (clusters=" + std::to_string(c) +
            " at widened tolerance=" + std::to_string(coarse) + ")";
      return false;
    }
  }

  auto block_norms = [&](const Mat<S>& Bt, MatD& norms) {
    for (int a = 0; a < c; ++a)
      for (int b = 0; b < c; ++b) {
        double s = 0;
        for (int i : clusters[a])
          for (int j : clusters[b]) s += std::norm(Bt(i, j));
        norms(a, b) = std::sqrt(s);
      }
  };

  // Pass 1: cluster-block coupling and aligner-source bookkeeping.
  MatD best_norm = MatD::Zero(c, c);  // max over r of relative block norm
  MatI best_src = MatI::Constant(c, c, -1);
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> coupled(c, c);
  coupled.setConstant(false);
  MatD norms(c, c);
  for (int r = 0; r < M; ++r) {
    const Mat<S> Bt = U.adjoint() * (elems[r] * U);
    block_norms(Bt, norms);
    const double maxn = norms.maxCoeff();
    if (maxn <= 0) continue;
    for (int a = 0; a < c; ++a)
      for (int b = 0; b < c; ++b) {
        const double rel = norms(a, b) / maxn;
        if (rel > 1e-8) coupled(a, b) = true;
        if (rel > best_norm(a, b)) {
          best_norm(a, b) = rel;
          best_src(a, b) = r;
        }
      }
  }

  // Kernel clusters: no coupling at all, including the diagonal.
  std::vector<bool> is_kernel(c, true);
  for (int a = 0; a < c; ++a)
    for (int b = 0; b < c; ++b)
      if (coupled(a, b)) is_kernel[a] = is_kernel[b] = false;

  UnionFind uf(c);
  for (int a = 0; a < c; ++a)
    for (int b = 0; b < c; ++b)
      if (coupled(a, b)) uf.unite(a, b);

  std::vector<std::vector<int>> classes;  // each: sorted cluster ids
  {
    std::vector<int> root_to_class(c, -1);
    for (int a = 0; a < c; ++a) {
      if (is_kernel[a]) continue;
      const int root = uf.find(a);
      if (root_to_class[root] < 0) {
        root_to_class[root] = static_cast<int>(classes.size());
        classes.push_back({});
      }
      classes[root_to_class[root]].push_back(a);
    }
  }
  const int d = static_cast<int>(classes.size());

  // Within a class all clusters carry the same multiplicity.
  std::vector<int> mult(d), bsize(d);
  long long dimsum = 0;
  for (int k = 0; k < d; ++k) {
    const int s0 = static_cast<int>(clusters[classes[k][0]].size());
    for (int a : classes[k])
      if (static_cast<int>(clusters[a].size()) != s0) {
        why = "clusters of one simple class have unequal sizes";
        return false;
      }
    mult[k] = s0;
    bsize[k] = static_cast<int>(classes[k].size());
    dimsum += static_cast<long long>(bsize[k]) * bsize[k];
  }
  if (dimsum != M) {
    why = "block dimension count " + std::to_string(dimsum) +
          " does not match basis size " + std::to_string(M);
    return false;
  }

  // Aligners: unitary polar factors of the pivot-row blocks with the largest
  // relative norm (equivalently largest smallest singular value, since every
  // nonzero cluster block of an algebra element is a multiple of a unitary).
  std::vector<std::vector<Mat<S>>> aligners(d);
  {
    std::vector<int> sources;
    for (int k = 0; k < d; ++k)
      for (std::size_t i = 1; i < classes[k].size(); ++i) {
        const int src = best_src(classes[k][0], classes[k][i]);
        if (src < 0) {
          why = "missing pivot-row coupling inside a class";
          return false;
        }
        sources.push_back(src);
      }
    std::sort(sources.begin(), sources.end());
    sources.erase(std::unique(sources.begin(), sources.end()), sources.end());
    std::vector<Mat<S>> cache;
    for (int r : sources) cache.push_back(U.adjoint() * (elems[r] * U));
    for (int k = 0; k < d; ++k) {
      const int s = mult[k];
      aligners[k].assign(classes[k].size(), Mat<S>::Identity(s, s));
      for (std::size_t i = 1; i < classes[k].size(); ++i) {
        const int a0 = classes[k][0], ai = classes[k][i];
        const int src = best_src(a0, ai);
        const auto pos =
            std::find(sources.begin(), sources.end(), src) - sources.begin();
        const Mat<S>& Bt = cache[pos];
        Mat<S> blk(s, s);
        for (int p = 0; p < s; ++p)
          for (int q = 0; q < s; ++q)
            blk(p, q) = Bt(clusters[a0][p], clusters[ai][q]);
        Eigen::JacobiSVD<Mat<S>> svd(blk,
                                     Eigen::ComputeThinU | Eigen::ComputeThinV);
        const double smin = svd.singularValues().minCoeff();
        const double smax = svd.singularValues().maxCoeff();
        if (smin < 1e-6 * smax) {
          why = "pivot block far from a unitary multiple";
          return false;
        }
        // With T_0 = I, the relation T_0 B~_{0i} T_i^* = lambda I forces
        // T_i to be the unitary polar factor of the pivot-row block.
        aligners[k][i] = svd.matrixU() * svd.matrixV().adjoint();
      }
    }
  }

  // Pass 2: extract scalar images and the residual.
  std::vector<std::vector<MatC>> images(M);
  double residual = 0;
  for (int r = 0; r < M; ++r) {
    const Mat<S> Bt = U.adjoint() * (elems[r] * U);
    block_norms(Bt, norms);
    const double maxn = std::max(norms.maxCoeff(), 1e-300);
    double dev = 0;
    // off-class and kernel couplings must vanish
    for (int a = 0; a < c; ++a)
      for (int b = 0; b < c; ++b) {
        const bool same_class =
            !is_kernel[a] && !is_kernel[b] && uf.find(a) == uf.find(b);
        if (!same_class) dev = std::max(dev, norms(a, b));
      }
    images[r].reserve(d);
    for (int k = 0; k < d; ++k) {
      const int m = bsize[k], s = mult[k];
      Mat<S> img(m, m);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          Mat<S> blk(s, s);
          for (int p = 0; p < s; ++p)
            for (int q = 0; q < s; ++q)
              blk(p, q) =
                  Bt(clusters[classes[k][i]][p], clusters[classes[k][j]][q]);
          const Mat<S> aligned = aligners[k][i] * blk * aligners[k][j].adjoint();
          const S lambda = aligned.trace() / static_cast<double>(s);
          img(i, j) = lambda;
          dev = std::max(dev,
                         (aligned - lambda * Mat<S>::Identity(s, s)).norm());
        }
      images[r].push_back(img.template cast<Cplx>());
    }
    residual = std::max(residual, dev / std::max(1.0, maxn));
  }
  if (residual > std::max(tol, 1e-7)) {
    why = "block residual " + std::to_string(residual) + " above tolerance";
    return false;
  }

  out.M = M;
  out.d = d;
  out.block_sizes = bsize;
  out.multiplicities = mult;
  out.kernel_dimension = 0;
  for (int a = 0; a < c; ++a)
    if (is_kernel[a]) out.kernel_dimension += static_cast<int>(clusters[a].size());
  out.images = std::move(images);
  out.residual = residual;
  out.U = U.template cast<Cplx>();
  out.clusters = clusters;
  out.class_clusters = classes;
  out.aligners.assign(d, {});
  for (int k = 0; k < d; ++k)
    for (const auto& T : aligners[k])
      out.aligners[k].push_back(T.template cast<Cplx>());
  out.seed_used = seed;
  return true;
}

}  // namespace

BlockDiagonalization block_diagonalize(const AlgebraBasis& basis,
                                       std::uint64_t seed, double tol) {
  constexpr int kRetryCap = 8;
  BlockDiagonalization out;
  std::string why, first_why;
  int dim_mismatches = 0;

  bool real_basis = true;
  for (const auto& e : basis.elements) {
    for (int k = 0; k < e.outerSize() && real_basis; ++k)
      for (SpMatC::InnerIterator it(e, k); it; ++it)
        if (it.value().imag() != 0.0) {
          real_basis = false;
          break;
        }
    if (!real_basis) break;
  }

  // A real basis whose algebra splits over the reals yields real images; when
  // it does not split (complex or quaternionic parts), every real attempt
  // fails a consistency check and we fall back to complex arithmetic.
  if (real_basis) {
    std::vector<MatD> elems;
    elems.reserve(basis.elements.size());
    for (const auto& e : basis.elements) elems.push_back(MatC(e).real());
    for (int attempt = 0; attempt < kRetryCap; ++attempt) {
      if (try_decompose<double>(elems, basis.n, seed + attempt, tol, out,
                                why)) {
        out.attempts = attempt + 1;
        return out;
      }
    }
  }

  std::vector<MatC> elems;
  elems.reserve(basis.elements.size());
  for (const auto& e : basis.elements) elems.push_back(MatC(e));
  for (int attempt = 0; attempt < kRetryCap; ++attempt) {
    if (try_decompose<Cplx>(elems, basis.n, seed + attempt, tol, out, why)) {
      out.attempts = attempt + 1;
      return out;
    }
    if (first_why.empty()) first_why = why;
    if (why.find("dimension count") != std::string::npos) ++dim_mismatches;
  }
  if (dim_mismatches == kRetryCap)
    throw NotAnAlgebra("span is not closed under multiplication: " + why);
  throw DegenerateSample("no generic sample after " + std::to_string(kRetryCap) +
                         " attempts: " + first_why);
}

BlockDiagonalization block_diagonalize(const std::vector<SpMatD>& elements,
                                       int n, std::uint64_t seed, double tol) {
  constexpr int kRetryCap = 8;
  BlockDiagonalization out;
  std::string why, first_why;
  int dim_mismatches = 0;
  for (int attempt = 0; attempt < kRetryCap; ++attempt) {
    if (try_decompose<double>(elements, n, seed + attempt, tol, out, why)) {
      out.attempts = attempt + 1;
      return out;
    }
    if (first_why.empty()) first_why = why;
    if (why.find("dimension count") != std::string::npos) ++dim_mismatches;
  }
  if (dim_mismatches == kRetryCap)
    throw NotAnAlgebra("span is not closed under multiplication: " + why);
  throw DegenerateSample("no generic sample after " + std::to_string(kRetryCap) +
                         " attempts: " + first_why +
                         " (sparse bases are decomposed over the reals only)");
}

namespace {

std::vector<MatC> block_product(const std::vector<MatC>& a,
                                const std::vector<MatC>& b) {
  std::vector<MatC> out;
  out.reserve(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out.push_back(a[k] * b[k]);
  return out;
}

double block_dist(const std::vector<MatC>& a, const std::vector<MatC>& b) {
  double e = 0;
  for (std::size_t k = 0; k < a.size(); ++k)
    e = std::max(e, (a[k] - b[k]).norm());
  return e;
}

double block_norm(const std::vector<MatC>& a) {
  double e = 0;
  for (const auto& m : a) e = std::max(e, m.norm());
  return e;
}

}  // namespace

StarIsoReport verify_star_isomorphism(const AlgebraBasis& basis,
                                      const BlockDiagonalization& bd,
                                      double tol, const StructureConstants* sc,
                                      std::uint64_t seed) {
  const int M = bd.M;
  StarIsoReport rep;
  long long dimsum = 0;
  for (int m : bd.block_sizes) dimsum += static_cast<long long>(m) * m;
  rep.dim_ok = (dimsum == M);

  MatC gram;  // lazily built ambient Gram for coordinate solves
  Eigen::FullPivLU<MatC> gram_lu;
  auto coords_of = [&](const MatC& X) -> VecC {
    if (gram.size() == 0) {
      gram.resize(M, M);
      for (int r = 0; r < M; ++r)
        for (int s = 0; s < M; ++s)
          gram(r, s) = MatC(basis.elements[r])
                           .cwiseProduct(MatC(basis.elements[s]).conjugate())
                           .sum();
      gram_lu.compute(gram.transpose());
    }
    VecC rhs(M);
    for (int t = 0; t < M; ++t)
      rhs[t] = X.cwiseProduct(MatC(basis.elements[t]).conjugate()).sum();
    return gram_lu.solve(rhs);
  };

  // Multiplicativity over all basis pairs.
  for (int r = 0; r < M; ++r) {
    for (int s = 0; s < M; ++s) {
      const auto lhs = block_product(bd.images[r], bd.images[s]);
      std::vector<MatC> rhs;
      for (int k = 0; k < bd.d; ++k)
        rhs.push_back(MatC::Zero(bd.block_sizes[k], bd.block_sizes[k]));
      if (sc) {
        for (const auto& [t, v] : sc->product(r, s))
          for (int k = 0; k < bd.d; ++k)
            rhs[k] += static_cast<double>(v) * bd.images[t][k];
      } else {
        const MatC P = MatC(basis.elements[r]) * MatC(basis.elements[s]);
        const VecC cf = coords_of(P);
        MatC R = P;
        for (int t = 0; t < M; ++t) R -= cf[t] * MatC(basis.elements[t]);
        if (R.norm() > tol * std::max(1.0, P.norm()))
          throw NotAnAlgebra(
              "product of basis elements leaves the span (error " +
              std::to_string(R.norm()) + ")");
        for (int t = 0; t < M; ++t)
          for (int k = 0; k < bd.d; ++k) rhs[k] += cf[t] * bd.images[t][k];
      }
      const double scale =
          std::max(1.0, std::max(block_norm(lhs), block_norm(rhs)));
      rep.mult_error = std::max(rep.mult_error, block_dist(lhs, rhs) / scale);
    }
  }

  // Adjoint law.
  for (int r = 0; r < M; ++r) {
    std::vector<MatC> lhs;
    for (const auto& blk : bd.images[r]) lhs.push_back(blk.adjoint());
    std::vector<MatC> rhs;
    if (!basis.adjoint_map.empty()) {
      rhs = bd.images[basis.adjoint_map[r]];
    } else {
      const VecC cf = coords_of(MatC(basis.elements[r]).adjoint());
      for (int k = 0; k < bd.d; ++k)
        rhs.push_back(MatC::Zero(bd.block_sizes[k], bd.block_sizes[k]));
      for (int t = 0; t < M; ++t)
        for (int k = 0; k < bd.d; ++k) rhs[k] += cf[t] * bd.images[t][k];
    }
    const double scale = std::max(1.0, block_norm(lhs));
    rep.adjoint_error =
        std::max(rep.adjoint_error, block_dist(lhs, rhs) / scale);
  }

  // Eigenvalue preservation on seeded self-adjoint combinations.
  Rng rng(seed);
  for (int trial = 0; trial < 5; ++trial) {
    MatC A = MatC::Zero(basis.n, basis.n);
    std::vector<MatC> phiA;
    for (int k = 0; k < bd.d; ++k)
      phiA.push_back(MatC::Zero(bd.block_sizes[k], bd.block_sizes[k]));
    for (int r = 0; r < M; ++r) {
      const Cplx cr(rng.sym(), rng.sym());
      A += cr * MatC(basis.elements[r]);
      for (int k = 0; k < bd.d; ++k) phiA[k] += cr * bd.images[r][k];
    }
    A = ((A + A.adjoint()) / 2.0).eval();
    for (auto& blk : phiA) blk = ((blk + blk.adjoint()) / 2.0).eval();

    std::vector<double> amb, img;
    {
      Eigen::SelfAdjointEigenSolver<MatC> eig(A);
      for (int i = 0; i < basis.n; ++i) amb.push_back(eig.eigenvalues()[i]);
    }
    for (int k = 0; k < bd.d; ++k) {
      Eigen::SelfAdjointEigenSolver<MatC> eig(phiA[k]);
      for (int i = 0; i < bd.block_sizes[k]; ++i)
        for (int s = 0; s < bd.multiplicities[k]; ++s)
          img.push_back(eig.eigenvalues()[i]);
    }
    for (int i = 0; i < bd.kernel_dimension; ++i) img.push_back(0.0);
    std::sort(amb.begin(), amb.end());
    std::sort(img.begin(), img.end());
    double scale = 1.0, err = 0.0;
    for (double v : amb) scale = std::max(scale, std::abs(v));
    if (amb.size() != img.size()) {
      err = 1e30;  // ambient dimension bookkeeping failed
    } else {
      for (std::size_t i = 0; i < amb.size(); ++i)
        err = std::max(err, std::abs(amb[i] - img[i]));
    }
    rep.eigenvalue_error = std::max(rep.eigenvalue_error, err / scale);
  }

  rep.pass = rep.dim_ok && rep.mult_error <= tol && rep.adjoint_error <= tol &&
             rep.eigenvalue_error <= tol;
  return rep;
}

PsdDecomposition psd_decompose(const MatC& A, const AlgebraBasis& basis,
                               double tol) {
  if ((A - A.adjoint()).norm() > 1e-9 * std::max(1.0, A.norm()))
    throw Error("psd_decompose expects a Hermitian matrix");
  Eigen::SelfAdjointEigenSolver<MatC> eig((A + A.adjoint()) / 2.0);
  const VecD lam = eig.eigenvalues();
  const double scale = std::max(1.0, lam.cwiseAbs().maxCoeff());
  if (lam.minCoeff() < -tol * scale)
    throw NotPSD("matrix has eigenvalue " + std::to_string(lam.minCoeff()));

  VecD rt(lam.size());
  for (Index i = 0; i < lam.size(); ++i)
    rt[i] = std::sqrt(std::max(0.0, lam[i]));
  PsdDecomposition out;
  out.B = eig.eigenvectors() * rt.asDiagonal() * eig.eigenvectors().adjoint();

  const int M = static_cast<int>(basis.elements.size());
  MatC gram(M, M);
  VecC rhs(M);
  for (int r = 0; r < M; ++r) {
    for (int s = 0; s < M; ++s)
      gram(r, s) = MatC(basis.elements[r])
                       .cwiseProduct(MatC(basis.elements[s]).conjugate())
                       .sum();
    rhs[r] = out.B.cwiseProduct(MatC(basis.elements[r]).conjugate()).sum();
  }
  out.coords = gram.transpose().fullPivLu().solve(rhs);
  MatC recon = MatC::Zero(basis.n, basis.n);
  for (int r = 0; r < M; ++r) recon += out.coords[r] * MatC(basis.elements[r]);
  out.residual = (recon - out.B).norm() + (out.B * out.B - A).norm();
  return out;
}

}  // namespace symmetra
