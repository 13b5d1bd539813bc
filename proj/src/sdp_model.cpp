#include "symmetra/sdp_model.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <tuple>
#include <utility>

namespace symmetra {

InvariantSDP restrict_to_invariant(const MatrixSDP& sdp,
                                   const PairOrbitStructure& orbits,
                                   double tol) {
  const int n = orbits.n;
  const int M = orbits.M;
  if (sdp.C.rows() != n || sdp.C.cols() != n)
    throw Error("objective matrix size != group degree");
  const int L = static_cast<int>(sdp.A.size());
  if (static_cast<int>(sdp.b.size()) != L)
    throw Error("constraint right-hand side length mismatch");
  for (const auto& Al : sdp.A)
    if (Al.rows() != n || Al.cols() != n)
      throw Error("constraint matrix size != group degree");

  InvariantSDP inv;
  inv.M = M;
  inv.maximize = sdp.maximize;
  inv.entrywise_nonneg = sdp.entrywise_nonneg;

  const double scale = sdp.C.cwiseAbs().maxCoeff();
  VecD ref(M);
  for (int r = 0; r < M; ++r)
    ref[r] = sdp.C(orbits.representative[r].first,
                    orbits.representative[r].second);
  inv.obj = VecD::Zero(M);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int r = static_cast<int>(orbits.orbit_id(i, j));
      if (std::abs(sdp.C(i, j) - ref[r]) > tol * (1.0 + scale))
        throw NotInvariant("objective is not constant on pair orbits");
      inv.obj[r] += sdp.C(i, j);
    }

  int extra = 0;
  for (int r = 0; r < M; ++r)
    if (r < orbits.transpose_map[r]) ++extra;
  inv.eq = MatD::Zero(L + extra, M);
  inv.eq_rhs = VecD::Zero(L + extra);
  for (int l = 0; l < L; ++l) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        inv.eq(l, orbits.orbit_id(i, j)) += sdp.A[l](i, j);
    inv.eq_rhs[l] = sdp.b[l];
  }
  // X stays symmetric: coordinates agree across transposed orbit pairs
  int row = L;
  for (int r = 0; r < M; ++r)
    if (r < orbits.transpose_map[r]) {
      inv.eq(row, r) = 1.0;
      inv.eq(row, orbits.transpose_map[r]) = -1.0;
      ++row;
    }
  return inv;
}

namespace {

// Combined coefficient blocks must come out symmetric (the variable space is
// transpose-closed); symmetrize and reject anything structurally wrong.
void symmetrize_checked(MatD& B) {
  if (B.rows() == 0) return;
  const double mx = B.cwiseAbs().maxCoeff();
  const double asym = (B - B.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-8 * (1.0 + mx))
    throw Error(
        "combined coefficient block is not symmetric; the variable space "
        "is not closed under transposition");
  B = ((B + B.transpose()) / 2.0).eval();
}

}  // namespace

ReducedSDP to_sdpa_form(const LinearMatrixProgram& p, double tol) {
  const int n = p.n;
  if (static_cast<int>(p.c.size()) != n) throw Error("lmp: objective length != n");
  if (p.E.rows() != p.f.size()) throw Error("lmp: equality shapes disagree");
  if (p.E.rows() > 0 && p.E.cols() != n) throw Error("lmp: equality width != n");
  if (p.ineq.rows() != p.ineq_rhs.size())
    throw Error("lmp: inequality shapes disagree");
  if (p.ineq.rows() > 0 && p.ineq.cols() != n)
    throw Error("lmp: inequality width != n");
  for (const auto& lmi : p.lmis) {
    if (static_cast<int>(lmi.coeff.size()) != n)
      throw Error("lmp: lmi coefficient count != n");
    if (lmi.rhs.rows() != lmi.rhs.cols()) throw Error("lmp: lmi rhs not square");
    for (const auto& Cm : lmi.coeff)
      if (Cm.rows() != lmi.rhs.rows() || Cm.cols() != lmi.rhs.cols())
        throw Error("lmp: lmi coefficient shape mismatch");
  }
  for (int i : p.nonneg)
    if (i < 0 || i >= n) throw Error("lmp: nonneg index out of range");

  ReducedSDP out;

  // substitute x = x_particular + K z over an orthonormal kernel basis
  VecD xp = VecD::Zero(n);
  MatD K;
  if (p.E.rows() > 0) {
    Eigen::FullPivLU<MatD> lu(p.E);
    xp = lu.solve(p.f);
    const double fscale =
        1.0 + (p.f.size() ? p.f.cwiseAbs().maxCoeff() : 0.0) +
        p.E.cwiseAbs().maxCoeff() * (1.0 + xp.cwiseAbs().maxCoeff());
    if ((p.E * xp - p.f).cwiseAbs().maxCoeff() > 1e-8 * fscale)
      throw Error("equality constraints are inconsistent");
    const Index kd = lu.dimensionOfKernel();
    if (kd == 0) {
      K = MatD::Zero(n, 0);
    } else {
      MatD ker = lu.kernel();
      Eigen::HouseholderQR<MatD> qr(ker);
      K = qr.householderQ() * MatD::Identity(n, kd);
    }
  } else {
    K = MatD::Identity(n, n);
  }
  const int k = static_cast<int>(K.cols());

  const double sgn = p.maximize ? -1.0 : 1.0;
  const VecD ct = sgn * (K.transpose() * p.c);
  out.sign = sgn;

  // inequality rows collapse into one diagonal block; rows fully determined
  // by the equalities are checked and dropped
  std::vector<VecD> grow;
  std::vector<double> grhs;
  int dropped = 0;
  auto add_ineq = [&](const VecD& a, double beta) {
    VecD g = K.transpose() * a;
    const double amax = a.size() ? a.cwiseAbs().maxCoeff() : 0.0;
    if ((g.size() ? g.cwiseAbs().maxCoeff() : 0.0) <= tol * (1.0 + amax)) {
      if (a.dot(xp) < beta - 1e-7 * (1.0 + std::abs(beta)))
        throw Error("inequality row is made infeasible by the equalities");
      ++dropped;
      return;
    }
    grow.push_back(std::move(g));
    grhs.push_back(beta - a.dot(xp));
  };
  for (Index r = 0; r < p.ineq.rows(); ++r)
    add_ineq(p.ineq.row(r).transpose(), p.ineq_rhs[r]);
  for (int i : p.nonneg) {
    VecD a = VecD::Zero(n);
    a[i] = 1.0;
    add_ineq(a, 0.0);
  }
  if (dropped > 0)
    out.warnings.push_back(std::to_string(dropped) +
                           " inequality rows determined by the equalities "
                           "were dropped");
  const int q = static_cast<int>(grow.size());

  // assemble candidate coefficient blocks for every z column
  const int nlmi = static_cast<int>(p.lmis.size());
  std::vector<BlockDiagMat> F(k + 1);
  for (int j = 0; j <= k; ++j) {
    for (int li = 0; li < nlmi; ++li) {
      const auto& lmi = p.lmis[li];
      const int s = static_cast<int>(lmi.rhs.rows());
      MatD B = MatD::Zero(s, s);
      if (j == 0) {
        B = lmi.rhs;
        for (int i = 0; i < n; ++i)
          if (xp[i] != 0.0) B -= xp[i] * lmi.coeff[i];
      } else {
        for (int i = 0; i < n; ++i)
          if (K(i, j - 1) != 0.0) B += K(i, j - 1) * lmi.coeff[i];
      }
      symmetrize_checked(B);
      SdpBlock blk = SdpBlock::dense_zero(s);
      blk.mat = std::move(B);
      F[j].push_back(std::move(blk));
    }
    if (q > 0) {
      SdpBlock blk = SdpBlock::diag_zero(q);
      for (int r = 0; r < q; ++r)
        blk.vec[r] = (j == 0) ? grhs[r] : grow[r][j - 1];
      F[j].push_back(std::move(blk));
    }
  }

  // z columns touching no block are dropped (or flagged when the objective
  // still moves along them)
  double gscale = 0.0;
  for (const auto& Fj : F)
    for (const auto& blk : Fj)
      gscale = std::max(gscale, blk.size == 0 ? 0.0
                                   : (blk.diagonal ? blk.vec.cwiseAbs().maxCoeff()
                                                   : blk.mat.cwiseAbs().maxCoeff()));
  const double cmax = ct.size() ? ct.cwiseAbs().maxCoeff() : 0.0;
  std::vector<int> keep;
  int dead = 0;
  for (int j = 1; j <= k; ++j) {
    double mx = 0.0;
    for (const auto& blk : F[j])
      mx = std::max(mx, blk.size == 0 ? 0.0
                            : (blk.diagonal ? blk.vec.cwiseAbs().maxCoeff()
                                            : blk.mat.cwiseAbs().maxCoeff()));
    if (mx <= 1e-12 * (1.0 + gscale)) {
      if (std::abs(ct[j - 1]) > 1e-12 * (1.0 + cmax)) {
        out.warnings.push_back(
            "objective moves along a direction no constraint touches; the "
            "problem is likely unbounded");
        keep.push_back(j - 1);
      } else {
        ++dead;
      }
    } else {
      keep.push_back(j - 1);
    }
  }
  if (dead > 0)
    out.warnings.push_back(std::to_string(dead) +
                           " unconstrained zero-cost columns were dropped");

  const int m = static_cast<int>(keep.size());
  out.sdpa.m = m;
  for (int li = 0; li < nlmi; ++li)
    out.sdpa.block_sizes.push_back(static_cast<int>(p.lmis[li].rhs.rows()));
  if (q > 0) out.sdpa.block_sizes.push_back(-q);
  out.sdpa.c = VecD::Zero(m);
  for (int j = 0; j < m; ++j) out.sdpa.c[j] = ct[keep[j]];
  out.sdpa.F.push_back(std::move(F[0]));
  for (int j = 0; j < m; ++j) out.sdpa.F.push_back(std::move(F[keep[j] + 1]));
  out.sdpa.objective_offset = sgn * (p.c.dot(xp) + p.c0);
  out.x_particular = std::move(xp);
  out.x_recover = MatD::Zero(n, m);
  for (int j = 0; j < m; ++j) out.x_recover.col(j) = K.col(keep[j]);
  out.sdpa.validate();
  return out;
}

ReducedSDP reduce_regular(const InvariantSDP& inv, const StructureConstants& sc) {
  if (inv.M != sc.M) throw Error("orbit count mismatch");
  if (static_cast<int>(inv.obj.size()) != inv.M)
    throw Error("objective length != orbit count");
  RegularRep rep = regular_rep(sc);

  LinearMatrixProgram p;
  p.n = inv.M;
  p.c = inv.obj;
  p.maximize = inv.maximize;
  p.E = inv.eq;
  p.f = inv.eq_rhs;
  if (inv.entrywise_nonneg)
    for (int r = 0; r < inv.M; ++r) p.nonneg.push_back(r);
  LinearMatrixProgram::Lmi lmi;
  lmi.coeff = std::move(rep.L);
  lmi.rhs = MatD::Zero(inv.M, inv.M);
  p.lmis.push_back(std::move(lmi));
  return to_sdpa_form(p);
}

ReducedSDP reduce_block(const InvariantSDP& inv, const AlgebraBasis& basis,
                        const BlockDiagonalization& bd, BlockMode mode,
                        const StructureConstants* sc, double verify_tol) {
  const int M = inv.M;
  if (static_cast<int>(basis.elements.size()) != M || bd.M != M)
    throw Error("basis/decomposition size mismatch");
  const StarIsoReport report = verify_star_isomorphism(basis, bd, verify_tol, sc);
  if (!report.pass)
    throw UnverifiedIsomorphism(
        "decomposition failed verification (mult " +
        std::to_string(report.mult_error) + ", adjoint " +
        std::to_string(report.adjoint_error) + ", eig " +
        std::to_string(report.eigenvalue_error) +
        (report.dim_ok ? ")" : ", dimension count off)"));

  const int nb = static_cast<int>(bd.block_sizes.size());
  const bool real = bd.real_images();

  if (mode == BlockMode::Coefficient) {
    LinearMatrixProgram p;
    p.n = M;
    p.c = inv.obj;
    p.maximize = inv.maximize;
    p.E = inv.eq;
    p.f = inv.eq_rhs;
    if (inv.entrywise_nonneg)
      for (int r = 0; r < M; ++r) p.nonneg.push_back(r);
    std::vector<std::string> warn;
    for (int kb = 0; kb < nb; ++kb) {
      const int s = bd.block_sizes[kb];
      LinearMatrixProgram::Lmi lmi;
      lmi.coeff.reserve(M);
      if (real) {
        lmi.rhs = MatD::Zero(s, s);
        for (int r = 0; r < M; ++r) lmi.coeff.push_back(bd.images[r][kb].real());
      } else {
        // psd over Hermitian images via the standard real embedding
        lmi.rhs = MatD::Zero(2 * s, 2 * s);
        for (int r = 0; r < M; ++r) {
          MatD emb(2 * s, 2 * s);
          const MatD re = bd.images[r][kb].real();
          const MatD im = bd.images[r][kb].imag();
          emb << re, -im, im, re;
          lmi.coeff.push_back(std::move(emb));
        }
        warn.push_back("block " + std::to_string(kb) +
                       " is complex; embedded with doubled size");
      }
      p.lmis.push_back(std::move(lmi));
    }
    ReducedSDP out = to_sdpa_form(p);
    out.warnings.insert(out.warnings.end(), warn.begin(), warn.end());
    return out;
  }

  // Parametrized mode: variables are the upper-triangle entries of the block
  // images themselves.
  if (!real)
    throw Error("parametrized reduction needs real block images");
  std::vector<int> off(nb + 1, 0);
  for (int kb = 0; kb < nb; ++kb)
    off[kb + 1] = off[kb] + bd.block_sizes[kb] * bd.block_sizes[kb];
  if (off[nb] != M) throw Error("block dimension count mismatch");

  MatD Xi(M, M);
  for (int r = 0; r < M; ++r)
    for (int kb = 0; kb < nb; ++kb) {
      const int s = bd.block_sizes[kb];
      for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j)
          Xi(off[kb] + i * s + j, r) = bd.images[r][kb](i, j).real();
    }
  Eigen::FullPivLU<MatD> XiLu(Xi);
  if (XiLu.rank() < M)
    throw UnverifiedIsomorphism("block images do not span the algebra");

  std::vector<std::tuple<int, int, int>> yvar;  // (block, i, j) with i <= j
  for (int kb = 0; kb < nb; ++kb)
    for (int i = 0; i < bd.block_sizes[kb]; ++i)
      for (int j = i; j < bd.block_sizes[kb]; ++j) yvar.emplace_back(kb, i, j);
  const int ny = static_cast<int>(yvar.size());

  MatD Phi(M, ny);
  VecD v(M);
  for (int e = 0; e < ny; ++e) {
    const auto [kb, i, j] = yvar[e];
    const int s = bd.block_sizes[kb];
    v.setZero();
    v[off[kb] + i * s + j] = 1.0;
    if (i != j) v[off[kb] + j * s + i] = 1.0;
    Phi.col(e) = XiLu.solve(v);
  }

  LinearMatrixProgram p;
  p.n = ny;
  p.c = Phi.transpose() * inv.obj;
  p.maximize = inv.maximize;
  if (inv.eq.rows() > 0) {
    p.E = inv.eq * Phi;
    p.f = inv.eq_rhs;
  }
  if (inv.entrywise_nonneg) {
    p.ineq = Phi;
    p.ineq_rhs = VecD::Zero(M);
  }
  for (int kb = 0; kb < nb; ++kb) {
    const int s = bd.block_sizes[kb];
    LinearMatrixProgram::Lmi lmi;
    lmi.rhs = MatD::Zero(s, s);
    lmi.coeff.assign(ny, MatD::Zero(s, s));
    for (int e = 0; e < ny; ++e) {
      const auto [kb2, i, j] = yvar[e];
      if (kb2 != kb) continue;
      lmi.coeff[e](i, j) = 1.0;
      lmi.coeff[e](j, i) = 1.0;
    }
    p.lmis.push_back(std::move(lmi));
  }
  ReducedSDP out = to_sdpa_form(p);
  // report recovery in orbit coordinates, matching the other modes
  out.x_particular = (Phi * out.x_particular).eval();
  out.x_recover = (Phi * out.x_recover).eval();
  return out;
}

SDPAProblem full_sdp_dual(const MatrixSDP& sdp) {
  if (!sdp.maximize)
    throw Error("dual construction expects a maximization problem");
  const int n = static_cast<int>(sdp.C.rows());
  if (sdp.C.cols() != n) throw Error("objective matrix not square");
  const int L = static_cast<int>(sdp.A.size());
  if (static_cast<int>(sdp.b.size()) != L)
    throw Error("constraint right-hand side length mismatch");

  std::vector<std::pair<int, int>> pairs;
  if (sdp.entrywise_nonneg)
    for (int u = 0; u < n; ++u)
      for (int vtx = u; vtx < n; ++vtx) pairs.emplace_back(u, vtx);
  const int np = static_cast<int>(pairs.size());

  SDPAProblem out;
  out.m = L + np;
  out.block_sizes.push_back(n);
  if (np > 0) out.block_sizes.push_back(-np);
  out.c = VecD::Zero(out.m);
  for (int l = 0; l < L; ++l) out.c[l] = sdp.b[l];

  out.F.assign(out.m + 1, out.zero_template());
  out.F[0][0].mat = (sdp.C + sdp.C.transpose()) / 2.0;
  for (int l = 0; l < L; ++l)
    out.F[l + 1][0].mat = (sdp.A[l] + sdp.A[l].transpose()) / 2.0;
  for (int e = 0; e < np; ++e) {
    const auto [u, vtx] = pairs[e];
    auto& blk = out.F[L + e + 1];
    blk[0].mat(u, vtx) -= 1.0;
    blk[0].mat(vtx, u) = blk[0].mat(u, vtx);
    blk[1].vec[e] = 1.0;
  }
  out.validate();
  return out;
}

MatrixSDP build_theta_prime(const MatI& adjacency) {
  const int n = static_cast<int>(adjacency.rows());
  if (adjacency.cols() != n) throw Error("adjacency matrix not square");
  for (int i = 0; i < n; ++i) {
    if (adjacency(i, i) != 0) throw Error("adjacency has a loop");
    for (int j = 0; j < n; ++j) {
      if (adjacency(i, j) != adjacency(j, i))
        throw Error("adjacency not symmetric");
      if (adjacency(i, j) != 0 && adjacency(i, j) != 1)
        throw Error("adjacency entries must be 0/1");
    }
  }
  MatrixSDP sdp;
  sdp.C = MatD::Ones(n, n);
  sdp.maximize = true;
  sdp.entrywise_nonneg = true;
  sdp.A.push_back(MatD::Identity(n, n));
  for (int u = 0; u < n; ++u)
    for (int vtx = u + 1; vtx < n; ++vtx)
      if (adjacency(u, vtx) != 0) {
        MatD A = MatD::Zero(n, n);
        A(u, vtx) = 1.0;
        A(vtx, u) = 1.0;
        sdp.A.push_back(A);
      }
  sdp.b = VecD::Zero(static_cast<int>(sdp.A.size()));
  sdp.b[0] = 1.0;
  return sdp;
}

}  // namespace symmetra
