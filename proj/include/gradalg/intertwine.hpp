#pragma once

#include "gradalg/action.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <random>

namespace gradalg {

// Degree-s map between the stored spaces of two actions: blocks
// U(n) -> W(n + s), indexed by the source degree n.
template <class S>
struct GradedHom {
  int shift = 0;
  std::vector<Mat<S>> blocks;

  bool is_zero() const {
    for (const auto& b : blocks)
      if (!all_zero(b)) return false;
    return true;
  }
  std::vector<S> flat() const { return flatten(blocks); }
};

template <class S>
GradedMap<S> as_map(const GradedHom<S>& h, const GradedSpace<S>& space) {
  GradedMap<S> f(space, h.shift);
  for (int n = 0; n <= space.top() && n < static_cast<int>(h.blocks.size()); ++n)
    if (h.blocks[n].rows() == space.dim(n + h.shift) && h.blocks[n].size() > 0) f.set_block(n, h.blocks[n]);
  return f;
}

template <class S>
GradedHom<S> as_hom(const GradedMap<S>& f) {
  GradedHom<S> h;
  h.shift = f.degree();
  for (int n = 0; n <= f.space().top(); ++n) h.blocks.push_back(f.block_ref(n));
  return h;
}

// Keeps blocks with source <= n_src and target <= n_dst; others zeroed.
template <class S>
GradedHom<S> restrict_hom(const GradedHom<S>& h, int n_src, int n_dst) {
  GradedHom<S> r = h;
  for (int n = 0; n < static_cast<int>(r.blocks.size()); ++n)
    if (n > n_src || n + h.shift > n_dst) r.blocks[n].setZero();
  return r;
}

namespace detail {

// Generator pairs matched by name; a name missing on one side acts as zero.
template <class S>
struct MatchedGenerator {
  int degree;
  std::optional<GradedMap<S>> src, dst;
};

template <class S>
std::vector<MatchedGenerator<S>> match_generators(const Action<S>& src, const Action<S>& dst) {
  std::vector<MatchedGenerator<S>> out;
  std::map<std::string, int> at;
  for (const auto& g : src.generators()) {
    at[g.name] = static_cast<int>(out.size());
    out.push_back({g.degree(), g.map, std::nullopt});
  }
  for (const auto& g : dst.generators()) {
    auto it = at.find(g.name);
    if (it == at.end()) {
      out.push_back({g.degree(), std::nullopt, g.map});
      continue;
    }
    if (out[it->second].degree != g.degree())
      throw ValidationError("generator '" + g.name + "' has different degrees in the two actions");
    out[it->second].dst = g.map;
  }
  return out;
}

template <class S>
Mat<S> gen_block(const std::optional<GradedMap<S>>& g, const GradedSpace<S>& sp, int degree, int source) {
  if (g) return g->block(source);
  return zeros<S>(sp.dim(source + degree), sp.dim(source));
}

}  // namespace detail

// All degree-s intertwiners U -> W, i.e. Phi g = g Phi for every generator,
// on the stored spaces. Equations that touch a degree above either stored
// top are dropped. Solved degree by degree: raising generators determine
// Phi_n from lower degrees up to new free parameters, then the remaining
// equations at n cut the parameter space down.
template <class S>
std::vector<GradedHom<S>> intertwiners(const Action<S>& src, const Action<S>& dst, int s) {
  const auto& U = src.space();
  const auto& W = dst.space();
  const Field<S>& f = src.field();
  const int T1 = U.top(), T2 = W.top();
  auto gens = detail::match_generators(src, dst);

  // comp[i][n]: block of parameter i at source n.
  std::vector<std::vector<Mat<S>>> comp;
  auto block_count = [&]() { return static_cast<int>(comp.size()); };
  auto phi_shape = [&](int n) { return std::pair<int, int>(W.dim(n + s), U.dim(n)); };
  auto stored_rows = [&](int m) { return m + s > T2 ? 0 : W.dim(m + s); };
  auto phi = [&](int i, int n) -> Mat<S> {
    auto [r, c] = phi_shape(n);
    if (n < 0 || n > T1 || n + s > T2) return zeros<S>(r, c);
    return comp[i][n];
  };

  for (int n = 0; n <= T1; ++n) {
    if (n + s > T2) {
      for (auto& c : comp) c.push_back(zeros<S>(0, U.dim(n)));
      continue;
    }
    auto [rows, cols] = phi_shape(n);
    // Raising equations Phi_n rho_U(g)_{n-e} = rho_W(g)_{n-e+s} Phi_{n-e}.
    std::vector<Mat<S>> m1_parts;
    std::vector<std::vector<Mat<S>>> r_parts(block_count());
    for (const auto& g : gens) {
      int e = g.degree;
      if (e <= 0 || n - e < 0) continue;
      Mat<S> a = detail::gen_block(g.src, U, e, n - e);
      if (a.cols() == 0) continue;
      m1_parts.push_back(a);
      Mat<S> b = detail::gen_block(g.dst, W, e, n - e + s);
      for (int i = 0; i < block_count(); ++i) {
        Mat<S> p = phi(i, n - e);
        r_parts[i].push_back(b.cols() == 0 ? zeros<S>(rows, a.cols()) : Mat<S>(b * p));
      }
    }
    int c = 0;
    for (const auto& p : m1_parts) c += static_cast<int>(p.cols());
    Mat<S> m1(cols, c);
    {
      int at = 0;
      for (const auto& p : m1_parts) {
        m1.middleCols(at, p.cols()) = p;
        at += static_cast<int>(p.cols());
      }
    }
    std::vector<Mat<S>> rmat(block_count());
    for (int i = 0; i < block_count(); ++i) {
      rmat[i] = Mat<S>(rows, c);
      int at = 0;
      for (const auto& p : r_parts[i]) {
        rmat[i].middleCols(at, p.cols()) = p;
        at += static_cast<int>(p.cols());
      }
    }
    // rref([m1^T | I]) gives E with E m1^T in echelon form.
    Mat<S> aug(c, cols + c);
    aug << m1.transpose(), identity(f, c);
    Rref<S> rr = rref<S>(aug);
    int rank = 0;
    while (rank < rr.rank() && rr.pivots[rank] < cols) ++rank;
    Mat<S> e_top = rr.reduced.topRows(rank).rightCols(c);
    Mat<S> e_bottom = rr.reduced.bottomRows(c - rank).rightCols(c);
    Mat<S> p = zeros<S>(c, cols);
    for (int j = 0; j < rank; ++j) p.col(rr.pivots[j]) = e_top.row(j).transpose();
    Mat<S> z = nullspace<S>(m1.transpose(), f);

    for (int i = 0; i < block_count(); ++i) comp[i].push_back(c == 0 ? zeros<S>(rows, cols) : Mat<S>(rmat[i] * p));
    const int old_params = block_count();
    for (int a = 0; a < rows; ++a)
      for (Eigen::Index b = 0; b < z.cols(); ++b) {
        std::vector<Mat<S>> blocks;
        for (int m = 0; m < n; ++m) blocks.push_back(zeros<S>(stored_rows(m), U.dim(m)));
        Mat<S> blk = zeros<S>(rows, cols);
        blk.row(a) = z.col(b).transpose();
        blocks.push_back(std::move(blk));
        comp.push_back(std::move(blocks));
      }

    // Constraints: consistency of the raising system and the equations with
    // source n for generators of degree <= 0, per parameter.
    std::vector<std::vector<S>> cons(block_count());
    for (int i = 0; i < block_count(); ++i) {
      if (i < old_params && c - rank > 0) append_flat<S>(cons[i], rmat[i] * e_bottom.transpose());
      else if (c - rank > 0) append_flat<S>(cons[i], zeros<S>(rows, c - rank));
      for (const auto& g : gens) {
        int e = g.degree;
        if (e > 0) continue;
        if (n + e > T1 || n + s + e > T2) continue;
        Mat<S> a = detail::gen_block(g.src, U, e, n);
        Mat<S> b = detail::gen_block(g.dst, W, e, n + s);
        Mat<S> lhs = n + e >= 0 ? Mat<S>(phi(i, n + e) * a) : zeros<S>(W.dim(n + s + e), U.dim(n));
        append_flat<S>(cons[i], Mat<S>(lhs - b * phi(i, n)));
      }
    }
    if (block_count() == 0) continue;
    const int len = static_cast<int>(cons[0].size());
    bool any = false;
    for (const auto& v : cons)
      for (const auto& x : v)
        if (!is_zero(x)) any = true;
    if (!any) continue;
    Mat<S> cm = columns(cons, len);
    Mat<S> ker = nullspace<S>(cm, f);
    std::vector<std::vector<Mat<S>>> next;
    for (Eigen::Index k = 0; k < ker.cols(); ++k) {
      std::vector<Mat<S>> blocks;
      for (int m = 0; m <= n; ++m) {
        Mat<S> acc = zeros<S>(comp[0][m].rows(), comp[0][m].cols());
        for (int i = 0; i < block_count(); ++i)
          if (!is_zero(ker(i, k))) acc += ker(i, k) * comp[i][m];
        blocks.push_back(std::move(acc));
      }
      next.push_back(std::move(blocks));
    }
    comp = std::move(next);
  }
  std::vector<GradedHom<S>> out;
  for (auto& blocks : comp) out.push_back({s, std::move(blocks)});
  return out;
}

// Restrictions to source <= n_src, target <= n_dst, reduced to a basis.
template <class S>
std::vector<GradedHom<S>> restrict_homs(const std::vector<GradedHom<S>>& hs, int n_src, int n_dst) {
  std::vector<GradedHom<S>> cut;
  std::vector<std::vector<S>> flat;
  for (const auto& h : hs) {
    cut.push_back(restrict_hom(h, n_src, n_dst));
    flat.push_back(cut.back().flat());
  }
  if (cut.empty()) return cut;
  std::vector<GradedHom<S>> out;
  for (int i : independent_subset(flat, static_cast<int>(flat[0].size()))) out.push_back(cut[i]);
  return out;
}

template <class S>
bool hom_invertible(const GradedHom<S>& h, const Field<S>& f, int upto) {
  for (int n = 0; n <= upto && n < static_cast<int>(h.blocks.size()); ++n) {
    const auto& b = h.blocks[n];
    if (b.rows() != b.cols()) return false;
    if (b.rows() > 0 && !inverse<S>(b, f)) return false;
  }
  return true;
}

// A degree-0 intertwiner between the two modules, invertible on every
// degree both trust, if any. Blocks above that degree are zeroed.
template <class S>
std::optional<GradedHom<S>> module_equivalence(const Action<S>& a, const Action<S>& b, std::uint64_t seed = 0) {
  const int n = std::min(a.trusted(), b.trusted());
  for (int m = 0; m <= n; ++m)
    if (a.space().dim(m) != b.space().dim(m)) return std::nullopt;
  auto basis = restrict_homs(intertwiners(a, b, 0), n, n);
  if (basis.empty()) return std::nullopt;
  std::mt19937_64 rng(seed);
  const int tries = basis.size() == 1 ? 1 : 12;
  for (int t = 0; t < tries; ++t) {
    GradedHom<S> h = basis[0];
    if (basis.size() > 1) {
      for (auto& blk : h.blocks) blk.setZero();
      for (const auto& v : basis) {
        S c = a.field().random(rng, 4);
        for (std::size_t m = 0; m < h.blocks.size(); ++m) h.blocks[m] += c * v.blocks[m];
      }
    }
    if (hom_invertible(h, a.field(), n)) return h;
  }
  return std::nullopt;
}

}  // namespace gradalg
