#include "symmetra/perm_group.hpp"

#include <algorithm>
#include <cassert>

namespace symmetra {

Permutation::Permutation(std::vector<int> images) : img_(std::move(images)) {
  std::vector<char> seen(img_.size(), 0);
  for (int v : img_) {
    if (v < 0 || v >= static_cast<int>(img_.size()) || seen[v])
      throw Error("permutation image table is not a bijection");
    seen[v] = 1;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<int> img(n);
  for (int i = 0; i < n; ++i) img[i] = i;
  return Permutation(img);
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(img_.size());
  for (int i = 0; i < static_cast<int>(img_.size()); ++i) inv[img_[i]] = i;
  Permutation p;
  p.img_ = std::move(inv);
  return p;
}

Permutation Permutation::compose(const Permutation& other) const {
  assert(size() == other.size());
  std::vector<int> img(img_.size());
  for (int i = 0; i < static_cast<int>(img_.size()); ++i) img[i] = img_[other(i)];
  Permutation p;
  p.img_ = std::move(img);
  return p;
}

MatD PairOrbitStructure::canonical_matrix(int r) const {
  MatD C = MatD::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (orbit_id(i, j) == r) C(i, j) = 1.0;
  return C;
}

MatI PairOrbitStructure::canonical_matrix_int(int r) const {
  MatI C = MatI::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (orbit_id(i, j) == r) C(i, j) = 1;
  return C;
}

long long StructureConstants::p_of(int r, int s, int t) const {
  for (const auto& [tt, v] : product(r, s))
    if (tt == t) return v;
  return 0;
}

PairOrbitStructure pair_orbits(const GroupAction& g) {
  const int n = g.n;
  for (const auto& gen : g.generators)
    if (gen.size() != n) throw Error("generator degree does not match n");

  PairOrbitStructure out;
  out.n = n;
  out.orbit_id = MatI::Constant(n, n, -1);

  std::vector<int> stack;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (out.orbit_id(i, j) >= 0) continue;
      const int id = out.M++;
      out.representative.emplace_back(i, j);
      out.second_representative.emplace_back(-1, -1);
      out.orbit_id(i, j) = id;
      long long size = 1;
      stack.assign(1, i * n + j);
      while (!stack.empty()) {
        const int code = stack.back();
        stack.pop_back();
        const int a = code / n, b = code % n;
        for (const auto& gen : g.generators) {
          const int ga = gen(a), gb = gen(b);
          if (out.orbit_id(ga, gb) < 0) {
            out.orbit_id(ga, gb) = id;
            if (out.second_representative[id].first < 0)
              out.second_representative[id] = {ga, gb};
            ++size;
            stack.push_back(ga * n + gb);
          }
        }
      }
      out.orbit_sizes.push_back(size);
    }
  }

  out.transpose_map.resize(out.M);
  for (int r = 0; r < out.M; ++r) {
    const auto [i, j] = out.representative[r];
    out.transpose_map[r] = out.orbit_id(j, i);
  }
  for (int r = 0; r < out.M; ++r)
    if (out.transpose_map[out.transpose_map[r]] != r)
      throw Error("transpose map is not an involution");
  return out;
}

namespace {

// One row of structure constants from a fixed representative of orbit t.
void accumulate_p(const PairOrbitStructure& o, int t, int i, int j,
                  std::vector<long long>& flat) {
  for (int k = 0; k < o.n; ++k) {
    const int r = o.orbit_id(i, k);
    const int s = o.orbit_id(k, j);
    flat[static_cast<std::size_t>(r) * o.M + s] += 1;
  }
}

}  // namespace

StructureConstants structure_constants(const PairOrbitStructure& o,
                                       bool audit_second_representative) {
  StructureConstants sc;
  sc.M = o.M;
  sc.norms_squared = o.orbit_sizes;
  sc.p.assign(static_cast<std::size_t>(o.M) * o.M, {});

  std::vector<long long> flat(static_cast<std::size_t>(o.M) * o.M);
  std::vector<long long> flat2(flat.size());
  for (int t = 0; t < o.M; ++t) {
    std::fill(flat.begin(), flat.end(), 0);
    const auto [i, j] = o.representative[t];
    accumulate_p(o, t, i, j, flat);
    if (audit_second_representative && o.second_representative[t].first >= 0) {
      std::fill(flat2.begin(), flat2.end(), 0);
      const auto [i2, j2] = o.second_representative[t];
      accumulate_p(o, t, i2, j2, flat2);
      if (flat != flat2)
        throw RepresentativeMismatch(
            "structure constants differ between representatives of orbit " +
            std::to_string(t));
    }
    for (int r = 0; r < o.M; ++r)
      for (int s = 0; s < o.M; ++s) {
        const long long v = flat[static_cast<std::size_t>(r) * o.M + s];
        if (v != 0) sc.p[static_cast<std::size_t>(r) * o.M + s].emplace_back(t, v);
      }
  }
  for (auto& row : sc.p) std::sort(row.begin(), row.end());
  return sc;
}

MatD group_average(const PairOrbitStructure& o, const MatD& X) {
  if (X.rows() != o.n || X.cols() != o.n)
    throw Error("group_average: matrix dimension does not match action degree");
  VecD sums = VecD::Zero(o.M);
  for (int i = 0; i < o.n; ++i)
    for (int j = 0; j < o.n; ++j) sums[o.orbit_id(i, j)] += X(i, j);
  MatD out(o.n, o.n);
  for (int i = 0; i < o.n; ++i)
    for (int j = 0; j < o.n; ++j) {
      const int r = o.orbit_id(i, j);
      out(i, j) = sums[r] / static_cast<double>(o.orbit_sizes[r]);
    }
  return out;
}

MatD group_average(const GroupAction& g, const MatD& X) {
  return group_average(pair_orbits(g), X);
}

MatD conjugate_by(const Permutation& sigma, const MatD& X) {
  const int n = sigma.size();
  MatD out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(sigma(i), sigma(j)) = X(i, j);
  return out;
}

}  // namespace symmetra
