#pragma once

#include "gradalg/burnside.hpp"
#include "gradalg/intertwine.hpp"
#include "gradalg/split.hpp"

#include <algorithm>
#include <map>

namespace gradalg {

template <class S>
GradedMap<S> hom_to_map(const GradedHom<S>& h, const GradedSpace<S>& trusted) {
  GradedMap<S> f(trusted, h.shift);
  for (int n = 0; n <= trusted.top(); ++n) {
    int t = n + h.shift;
    if (t < 0 || t > trusted.top() || n >= static_cast<int>(h.blocks.size())) continue;
    f.set_block(n, h.blocks[n]);
  }
  return f;
}

// Basis of C(A)_delta on W^(N) for each delta in range. The equations are
// solved on the stored space and the solutions restricted.
template <class S>
std::map<int, std::vector<GradedMap<S>>> commutant(const Action<S>& a, int dmin, int dmax) {
  const int N = a.trusted();
  const GradedSpace<S> trusted = a.space().truncated(N);
  std::map<int, std::vector<GradedMap<S>>> out;
  for (int d = dmin; d <= dmax; ++d) {
    auto& list = out[d];
    if (std::abs(d) > N) continue;
    for (const auto& h : restrict_homs(intertwiners(a, a, d), N, N)) list.push_back(hom_to_map(h, trusted));
  }
  return out;
}

template <class S>
int span_dim(const std::vector<GradedMap<S>>& maps) {
  if (maps.empty()) return 0;
  std::vector<std::vector<S>> v;
  for (const auto& m : maps) v.push_back(m.flat());
  return span_rank(v, static_cast<int>(v[0].size()));
}

struct DegreeComparison {
  int degree = 0;
  int closure_dim = 0;
  int double_commutant_dim = 0;
  bool contained = false;  // closure inside C(C(A))
  bool ok() const { return contained && closure_dim == double_commutant_dim; }
};

struct DoubleCommutantReport {
  std::vector<DegreeComparison> degrees;
  bool ok() const {
    for (const auto& d : degrees)
      if (!d.ok()) return false;
    return true;
  }
};

// C(C(A)) computed on W^(N) from the trusted commutant, compared per degree
// with the closure.
template <class S>
DoubleCommutantReport check_double_commutant(const Action<S>& a) {
  const int N = a.trusted();
  const GradedSpace<S> trusted = a.space().truncated(N);
  auto c = commutant(a, -N, N);
  std::vector<Generator<S>> gens;
  for (const auto& [d, list] : c)
    for (std::size_t i = 0; i < list.size(); ++i)
      gens.push_back({"c" + std::to_string(d) + "_" + std::to_string(i), list[i]});
  Action<S> ca(trusted, N, std::move(gens), true, a.seed());
  auto cl = closure(a, -N, N);
  DoubleCommutantReport rep;
  for (int d = -N; d <= N; ++d) {
    std::vector<GradedMap<S>> cc;
    for (const auto& h : intertwiners(ca, ca, d)) cc.push_back(hom_to_map(h, trusted));
    DegreeComparison cmp;
    cmp.degree = d;
    const auto& basis = cl.at(d).maps;
    cmp.closure_dim = span_dim(basis);
    cmp.double_commutant_dim = span_dim(cc);
    std::vector<GradedMap<S>> both = cc;
    both.insert(both.end(), basis.begin(), basis.end());
    cmp.contained = span_dim(both) == cmp.double_commutant_dim;
    rep.degrees.push_back(cmp);
  }
  return rep;
}

// The submodule m (lowest degree n) as an action of its own, shifted down
// by n. Trusted up to N - n.
template <class S>
Action<S> sub_action(const Action<S>& a, const GradedSubspace<S>& m, int n) {
  const int T = a.top();
  std::vector<int> dims;
  for (int j = 0; j <= T - n; ++j) dims.push_back(m.dim(n + j));
  GradedSpace<S> sp(dims, a.field());
  std::vector<Generator<S>> gens;
  for (const auto& g : a.generators()) {
    const int e = g.degree();
    GradedMap<S> r(sp, e);
    for (int j = 0; j <= T - n; ++j) {
      int t = j + e;
      if (t < 0 || t > T - n || sp.dim(j) == 0 || sp.dim(t) == 0) continue;
      Mat<S> img = multiply<S>(g.map.block_ref(n + j), m.basis[n + j]);
      auto x = solve_many<S>(m.basis[n + t], img);
      if (!x) throw std::logic_error("sub_action: subspace is not invariant");
      r.set_block(j, *x);
    }
    gens.push_back({g.name, std::move(r)});
  }
  return Action<S>(sp, a.trusted() - n, std::move(gens), a.unital(), a.seed());
}

// Hom_A(U, W) of each degree s in 0..N on trusted blocks.
template <class S>
std::vector<std::vector<GradedHom<S>>> multiplicity_space(const Action<S>& w, const Action<S>& u) {
  std::vector<std::vector<GradedHom<S>>> out;
  for (int s = 0; s <= w.trusted(); ++s) out.push_back(restrict_homs(intertwiners(u, w, s), u.trusted(), w.trusted()));
  return out;
}

template <class S>
struct Component {
  Action<S> module;  // U_i, shifted to start in degree 0
  int lowest = 0;    // degree of the bottom of U_i inside W
  std::vector<std::vector<GradedHom<S>>> multiplicity;  // V_i(s) bases, s = 0..N
  std::vector<int> v_dims() const {
    std::vector<int> d;
    for (const auto& v : multiplicity) d.push_back(static_cast<int>(v.size()));
    return d;
  }
  int v_total() const {
    int t = 0;
    for (const auto& v : multiplicity) t += static_cast<int>(v.size());
    return t;
  }
};

template <class S>
struct Decomposition {
  std::vector<Component<S>> components;
  // Per degree n <= N, the columns phi(u) over all i, s, phi in V_i(s) and
  // basis vectors u of U_i(n - s).
  std::vector<Mat<S>> embedding;
  int summands() const {
    int t = 0;
    for (const auto& c : components) t += c.v_total();
    return t;
  }
};

namespace detail {

// {w in W(n) : closure_delta w = 0 for every delta < 0}.
template <class S>
Mat<S> bottom_vectors(const Action<S>& a, int n) {
  const int d = a.space().dim(n);
  ColumnSpin<S> spin = column_spin(a, {n});
  std::vector<Mat<S>> parts;
  int rows = 0;
  for (const auto& [deg, list] : spin.by_degree) {
    if (deg >= 0) continue;
    for (const auto& el : list) {
      parts.push_back(el.blocks[0]);
      rows += static_cast<int>(el.blocks[0].rows());
    }
  }
  Mat<S> stacked(rows, d);
  int at = 0;
  for (const auto& p : parts) {
    stacked.middleRows(at, p.rows()) = p;
    at += static_cast<int>(p.rows());
  }
  return nullspace<S>(stacked, a.field());
}

template <class S>
std::vector<Mat<S>> degree_zero_gens(const Action<S>& a, int n) {
  std::vector<Mat<S>> g;
  ColumnSpin<S> spin = column_spin(a, {n});
  for (const auto& el : spin.at(0)) g.push_back(el.blocks[0]);
  if (g.empty()) g.push_back(zeros<S>(a.space().dim(n), a.space().dim(n)));
  return g;
}

}  // namespace detail

template <class S>
Decomposition<S> isotypic_decompose(const Action<S>& a) {
  const int N = a.trusted();
  const auto& sp = a.space();
  const Field<S>& f = a.field();
  std::vector<Component<S>> comps;
  for (int n = 0; n <= N; ++n) {
    if (sp.dim(n) == 0) continue;
    Mat<S> l = detail::bottom_vectors(a, n);
    if (l.cols() == 0) continue;
    auto gens = restrict_gens(detail::degree_zero_gens(a, n), l);
    for (const auto& piece : decompose_semisimple(gens, static_cast<int>(l.cols()), f, a.seed(), n)) {
      GradedSubspace<S> seed = empty_subspace(sp);
      seed.basis[n] = l * piece;
      Action<S> u = sub_action(a, vector_spin(a, seed), n);
      bool known = false;
      for (const auto& c : comps)
        if (module_equivalence(c.module, u, a.seed())) known = true;
      if (!known) comps.push_back({std::move(u), n, {}});
    }
  }
  for (auto& c : comps) c.multiplicity = multiplicity_space(a, c.module);
  std::stable_sort(comps.begin(), comps.end(), [](const Component<S>& x, const Component<S>& y) {
    if (x.lowest != y.lowest) return x.lowest < y.lowest;
    return x.module.space().dims() < y.module.space().dims();
  });

  Decomposition<S> out;
  for (int n = 0; n <= N; ++n) {
    std::vector<Mat<S>> cols;
    int count = 0;
    for (const auto& c : comps)
      for (int s = 0; s <= n; ++s)
        for (const auto& phi : c.multiplicity[s]) {
          const auto& b = phi.blocks[n - s];
          if (b.cols() == 0) continue;
          cols.push_back(b);
          count += static_cast<int>(b.cols());
        }
    Mat<S> e(sp.dim(n), count);
    int at = 0;
    for (const auto& b : cols) {
      e.middleCols(at, b.cols()) = b;
      at += static_cast<int>(b.cols());
    }
    if (count != sp.dim(n) || rank<S>(e) != sp.dim(n)) {
      // A standard basis vector outside the sum of the irreducible
      // submodules found so far.
      std::vector<std::string> w;
      Echelon<S> ech(sp.dim(n));
      for (Eigen::Index j = 0; j < e.cols(); ++j) {
        Vec<S> v = e.col(j);
        ech.insert(std::vector<S>(v.data(), v.data() + v.size()));
      }
      for (int i = 0; i < sp.dim(n) && w.empty(); ++i) {
        std::vector<S> v(sp.dim(n), f.zero());
        v[i] = f.one();
        if (!ech.contains(v))
          for (const auto& x : v) w.push_back(f.format(x));
      }
      throw NotSemisimple(n, w);
    }
    out.embedding.push_back(std::move(e));
  }
  out.components = std::move(comps);
  return out;
}

// Matrices of c in C(A)_k on V_i, from V_i(s) to V_i(s + k). A hom is
// determined by its bottom block because U_i is generated by U_i(0).
template <class S>
std::optional<Mat<S>> act_on_multiplicity(const Component<S>& c, const GradedMap<S>& x, int s) {
  const int k = x.degree();
  const int N = x.space().top();
  if (s < 0 || s + k < 0 || s > N || s + k > N) return std::nullopt;
  const auto& from = c.multiplicity[s];
  const auto& to = c.multiplicity[s + k];
  Mat<S> out(static_cast<Eigen::Index>(to.size()), static_cast<Eigen::Index>(from.size()));
  if (from.empty()) return out;
  std::vector<std::vector<S>> basis;
  for (const auto& psi : to) {
    basis.emplace_back();
    append_flat<S>(basis.back(), psi.blocks[0]);
  }
  const int len = static_cast<int>(c.module.space().dim(0) * x.space().dim(s + k));
  Mat<S> bm = columns(basis, len);
  for (std::size_t j = 0; j < from.size(); ++j) {
    std::vector<S> v;
    append_flat<S>(v, multiply<S>(x.block_ref(s), from[j].blocks[0]));
    if (to.empty()) {
      if (detail::any_nonzero(v)) return std::nullopt;
      continue;
    }
    auto y = solve<S>(bm, to_vec(v));
    if (!y) return std::nullopt;
    out.col(static_cast<Eigen::Index>(j)) = *y;
  }
  return out;
}

struct MultiplicityCheck {
  int component = 0;
  std::vector<RankCheck> absolute;  // C(A)_0 on V_i(s) spans End V_i(s)
  std::vector<std::pair<int, int>> transitivity_failures;  // (s, t): C(A)_{t-s} V_i(s) != V_i(t)
  bool ok() const {
    for (const auto& r : absolute)
      if (!r.ok()) return false;
    return transitivity_failures.empty();
  }
};

template <class S>
struct Witness {
  int component = 0;
  GradedMap<S> idempotent;  // e_i: identity on W_i, zero on the other components
  bool in_commutant = false;
  bool separates = false;  // e_i = 1 on V_i and 0 on V_j for j != i
};

template <class S>
struct DualityReport {
  Decomposition<S> decomposition;
  std::vector<std::pair<int, std::pair<int, int>>> commutant_dims;  // (k, (measured, predicted))
  std::vector<MultiplicityCheck> multiplicity;
  std::vector<Witness<S>> witnesses;
  bool dimension_identity = true;

  bool condition1() const {
    for (const auto& [k, d] : commutant_dims)
      if (d.first != d.second) return false;
    return true;
  }
  bool condition2() const {
    for (const auto& m : multiplicity)
      if (!m.ok()) return false;
    return true;
  }
  bool condition3() const {
    for (const auto& w : witnesses)
      if (!w.in_commutant || !w.separates) return false;
    return true;
  }
  bool ok() const { return dimension_identity && condition1() && condition2() && condition3(); }
};

// d_n = sum_i sum_s dim U_i(n - s) dim V_i(s) for n <= N.
template <class S>
bool dimension_identity(const Action<S>& a, const Decomposition<S>& d) {
  for (int n = 0; n <= a.trusted(); ++n) {
    int t = 0;
    for (const auto& c : d.components)
      for (int s = 0; s <= n; ++s) t += c.module.space().dim(n - s) * static_cast<int>(c.multiplicity[s].size());
    if (t != a.space().dim(n)) return false;
  }
  return true;
}

template <class S>
DualityReport<S> verify_duality(const Action<S>& a) {
  const int N = a.trusted();
  const Field<S>& f = a.field();
  const GradedSpace<S> trusted = a.space().truncated(N);
  DualityReport<S> rep{isotypic_decompose(a), {}, {}, {}, true};
  const auto& comps = rep.decomposition.components;
  rep.dimension_identity = dimension_identity(a, rep.decomposition);
  auto c = commutant(a, -N, N);

  for (int k = -N; k <= N; ++k) {
    int predicted = 0;
    for (const auto& comp : comps)
      for (int s = 0; s <= N; ++s)
        if (s + k >= 0 && s + k <= N)
          predicted += static_cast<int>(comp.multiplicity[s].size() * comp.multiplicity[s + k].size());
    rep.commutant_dims.push_back({k, {span_dim(c[k]), predicted}});
  }

  for (std::size_t i = 0; i < comps.size(); ++i) {
    MultiplicityCheck m;
    m.component = static_cast<int>(i);
    const auto dims = comps[i].v_dims();
    for (int s = 0; s <= N; ++s) {
      const int r = dims[s];
      if (r == 0) continue;
      std::vector<std::vector<S>> mats;
      for (const auto& x : c[0]) {
        auto mx = act_on_multiplicity(comps[i], x, s);
        if (!mx) continue;
        mats.emplace_back();
        append_flat<S>(mats.back(), *mx);
      }
      m.absolute.push_back({s, span_rank(mats, r * r), r * r});
      for (int t = 0; t <= N; ++t) {
        if (t == s || dims[t] == 0) continue;
        std::vector<std::vector<S>> cols;
        for (const auto& x : c[t - s]) {
          auto mx = act_on_multiplicity(comps[i], x, s);
          if (!mx) continue;
          for (Eigen::Index j = 0; j < mx->cols(); ++j) {
            Vec<S> v = mx->col(j);
            cols.emplace_back(v.data(), v.data() + v.size());
          }
        }
        if (span_rank(cols, dims[t]) != dims[t]) m.transitivity_failures.emplace_back(s, t);
      }
    }
    rep.multiplicity.push_back(std::move(m));
  }

  // Idempotents from the embedding: project onto the columns of component i.
  for (std::size_t i = 0; i < comps.size() && comps.size() > 1; ++i) {
    GradedMap<S> e(trusted, 0);
    for (int n = 0; n <= N; ++n) {
      const Mat<S>& emb = rep.decomposition.embedding[n];
      if (emb.cols() == 0) continue;
      Mat<S> mask = zeros<S>(emb.cols(), emb.cols());
      int at = 0;
      for (std::size_t j = 0; j < comps.size(); ++j)
        for (int s = 0; s <= n; ++s)
          for (std::size_t p = 0; p < comps[j].multiplicity[s].size(); ++p) {
            const int w = comps[j].module.space().dim(n - s);
            for (int q = 0; q < w; ++q, ++at)
              if (j == i) mask(at, at) = f.one();
          }
      Mat<S> inv = *inverse<S>(emb, f);
      e.set_block(n, multiply<S>(multiply<S>(emb, mask), inv));
    }
    Witness<S> wit{static_cast<int>(i), e, false, true};
    std::vector<GradedMap<S>> both = c[0];
    both.push_back(e);
    wit.in_commutant = span_dim(both) == span_dim(c[0]);
    for (std::size_t j = 0; j < comps.size(); ++j)
      for (int s = 0; s <= N; ++s) {
        auto mx = act_on_multiplicity(comps[j], e, s);
        if (!mx) {
          wit.separates = false;
          continue;
        }
        const int r = static_cast<int>(mx->rows());
        Mat<S> expect = j == i ? identity(f, r) : zeros<S>(r, r);
        if (!equal<S>(*mx, expect)) wit.separates = false;
      }
    rep.witnesses.push_back(std::move(wit));
  }
  return rep;
}

}  // namespace gradalg
