#pragma once

#include "gradalg/action.hpp"

#include <deque>
#include <map>
#include <optional>

namespace gradalg {

// A word together with the blocks of its image at a fixed set of anchors.
template <class S>
struct SpinElement {
  Word word;
  std::vector<Mat<S>> blocks;
};

// {x|_V : x in A} for V = sum of W(s) over the anchor sources, spun by left
// multiplication. Each degree holds words whose restrictions are independent
// and span.
template <class S>
struct ColumnSpin {
  std::vector<int> sources;
  std::map<int, std::vector<SpinElement<S>>> by_degree;

  const std::vector<SpinElement<S>>& at(int degree) const {
    static const std::vector<SpinElement<S>> none;
    auto it = by_degree.find(degree);
    return it == by_degree.end() ? none : it->second;
  }
};

// {p_T x : x in A} for T = sum of W(t) over the anchor targets, spun by right
// multiplication. A degree-d element has blocks W(t-d) -> W(t).
template <class S>
struct RowSpin {
  std::vector<int> targets;
  std::map<int, std::vector<SpinElement<S>>> by_degree;

  const std::vector<SpinElement<S>>& at(int degree) const {
    static const std::vector<SpinElement<S>> none;
    auto it = by_degree.find(degree);
    return it == by_degree.end() ? none : it->second;
  }
};

namespace detail {

template <class S>
bool any_nonzero(const std::vector<S>& v) {
  for (const auto& x : v)
    if (!is_zero(x)) return true;
  return false;
}

template <class S, class Length, class Step, class Seeds>
std::map<int, std::vector<SpinElement<S>>> spin(const Action<S>& a, Length length, Step step, Seeds seeds) {
  std::map<int, std::vector<SpinElement<S>>> out;
  std::map<int, Echelon<S>> ech;
  std::deque<std::pair<int, std::size_t>> queue;
  auto add = [&](int deg, Word w, std::vector<Mat<S>> blocks) {
    int len = length(deg);
    if (len == 0) return;
    auto [it, fresh] = ech.try_emplace(deg, len);
    if (it->second.full()) return;
    std::vector<S> flat = flatten(blocks);
    if (!any_nonzero(flat) || !it->second.insert(std::move(flat))) return;
    auto& list = out[deg];
    list.push_back({std::move(w), std::move(blocks)});
    queue.emplace_back(deg, list.size() - 1);
  };
  seeds(add);
  while (!queue.empty()) {
    auto [deg, idx] = queue.front();
    queue.pop_front();
    SpinElement<S> x = out[deg][idx];
    for (int gi = 0; gi < a.size(); ++gi) {
      int nd = deg + a.generator(gi).degree();
      int len = length(nd);
      if (len == 0) continue;
      auto it = ech.find(nd);
      if (it != ech.end() && it->second.full()) continue;
      auto [w, blocks] = step(x, deg, gi);
      add(nd, std::move(w), std::move(blocks));
    }
  }
  return out;
}

}  // namespace detail

template <class S>
ColumnSpin<S> column_spin(const Action<S>& a, std::vector<int> sources) {
  const auto& sp = a.space();
  auto length = [&](int deg) {
    int n = 0;
    for (int s : sources) n += sp.dim(s) * sp.dim(s + deg);
    return n;
  };
  auto step = [&](const SpinElement<S>& x, int deg, int gi) {
    const GradedMap<S>& g = a.generator(gi).map;
    int nd = deg + g.degree();
    std::vector<Mat<S>> blocks;
    for (std::size_t j = 0; j < sources.size(); ++j) {
      int s = sources[j], mid = s + deg;
      if (mid < 0 || mid > sp.top() || sp.dim(s + nd) == 0)
        blocks.push_back(zeros<S>(sp.dim(s + nd), sp.dim(s)));
      else
        blocks.push_back(multiply<S>(g.block_ref(mid), x.blocks[j]));
    }
    Word w{gi};
    w.insert(w.end(), x.word.begin(), x.word.end());
    return std::pair{std::move(w), std::move(blocks)};
  };
  auto seeds = [&](auto add) {
    if (a.unital()) {
      std::vector<Mat<S>> blocks;
      for (int s : sources) blocks.push_back(identity(a.field(), sp.dim(s)));
      add(0, Word{}, std::move(blocks));
    } else {
      for (int gi = 0; gi < a.size(); ++gi) {
        std::vector<Mat<S>> blocks;
        for (int s : sources) blocks.push_back(a.generator(gi).map.block(s));
        add(a.generator(gi).degree(), Word{gi}, std::move(blocks));
      }
    }
  };
  ColumnSpin<S> r{sources, {}};
  r.by_degree = detail::spin<S>(a, length, step, seeds);
  return r;
}

template <class S>
RowSpin<S> row_spin(const Action<S>& a, std::vector<int> targets) {
  const auto& sp = a.space();
  auto length = [&](int deg) {
    int n = 0;
    for (int t : targets) n += sp.dim(t) * sp.dim(t - deg);
    return n;
  };
  auto step = [&](const SpinElement<S>& y, int deg, int gi) {
    const GradedMap<S>& g = a.generator(gi).map;
    int nd = deg + g.degree();
    std::vector<Mat<S>> blocks;
    for (std::size_t j = 0; j < targets.size(); ++j) {
      int t = targets[j], src = t - nd;
      if (src < 0 || src > sp.top() || t - deg < 0 || t - deg > sp.top())
        blocks.push_back(zeros<S>(sp.dim(t), sp.dim(src)));
      else
        blocks.push_back(multiply<S>(y.blocks[j], g.block_ref(src)));
    }
    Word w = y.word;
    w.push_back(gi);
    return std::pair{std::move(w), std::move(blocks)};
  };
  auto seeds = [&](auto add) {
    if (a.unital()) {
      std::vector<Mat<S>> blocks;
      for (int t : targets) blocks.push_back(identity(a.field(), sp.dim(t)));
      add(0, Word{}, std::move(blocks));
    } else {
      for (int gi = 0; gi < a.size(); ++gi) {
        const auto& g = a.generator(gi).map;
        std::vector<Mat<S>> blocks;
        for (int t : targets) blocks.push_back(g.block(t - g.degree()));
        add(g.degree(), Word{gi}, std::move(blocks));
      }
    }
  };
  RowSpin<S> r{targets, {}};
  r.by_degree = detail::spin<S>(a, length, step, seeds);
  return r;
}

// Graded subspace of the stored space: basis columns per degree.
template <class S>
struct GradedSubspace {
  std::vector<Mat<S>> basis;

  int dim(int n) const {
    return n < 0 || n >= static_cast<int>(basis.size()) ? 0 : static_cast<int>(basis[n].cols());
  }
  int total_dim() const {
    int t = 0;
    for (const auto& b : basis) t += static_cast<int>(b.cols());
    return t;
  }
  int lowest() const {
    for (std::size_t n = 0; n < basis.size(); ++n)
      if (basis[n].cols() > 0) return static_cast<int>(n);
    return -1;
  }
  std::vector<int> dims() const {
    std::vector<int> d;
    for (const auto& b : basis) d.push_back(static_cast<int>(b.cols()));
    return d;
  }
};

template <class S>
GradedSubspace<S> empty_subspace(const GradedSpace<S>& sp) {
  GradedSubspace<S> r;
  for (int n = 0; n <= sp.top(); ++n) r.basis.push_back(zeros<S>(sp.dim(n), 0));
  return r;
}

// Smallest generator-invariant subspace containing the seeds (not closed
// under the identity beyond containing the seeds themselves). With stop_at,
// the spin ends once degrees 0..stop_at are full; higher degrees are then
// only partial.
template <class S>
GradedSubspace<S> vector_spin(const Action<S>& a, const GradedSubspace<S>& seeds, std::optional<int> stop_at = std::nullopt) {
  const auto& sp = a.space();
  std::vector<Echelon<S>> ech;
  std::vector<std::vector<std::vector<S>>> kept(sp.top() + 1);
  for (int n = 0; n <= sp.top(); ++n) ech.emplace_back(sp.dim(n));
  std::deque<std::pair<int, std::size_t>> queue;
  auto add = [&](int n, std::vector<S> v) {
    if (ech[n].full() || !ech[n].insert(v)) return;
    kept[n].push_back(std::move(v));
    queue.emplace_back(n, kept[n].size() - 1);
  };
  for (int n = 0; n <= sp.top() && n < static_cast<int>(seeds.basis.size()); ++n)
    for (Eigen::Index j = 0; j < seeds.basis[n].cols(); ++j) {
      std::vector<S> v(seeds.basis[n].rows());
      for (Eigen::Index i = 0; i < seeds.basis[n].rows(); ++i) v[i] = seeds.basis[n](i, j);
      add(n, std::move(v));
    }
  auto done = [&] {
    if (!stop_at) return false;
    for (int n = 0; n <= std::min(*stop_at, sp.top()); ++n)
      if (!ech[n].full()) return false;
    return true;
  };
  while (!queue.empty() && !done()) {
    auto [n, idx] = queue.front();
    queue.pop_front();
    Vec<S> v = to_vec(kept[n][idx]);
    for (const auto& g : a.generators()) {
      int t = n + g.degree();
      if (t < 0 || t > sp.top() || ech[t].full()) continue;
      Vec<S> w = multiply<S>(g.map.block_ref(n), Mat<S>(v)).col(0);
      std::vector<S> wv(w.data(), w.data() + w.size());
      if (detail::any_nonzero(wv)) add(t, std::move(wv));
    }
  }
  GradedSubspace<S> r;
  for (int n = 0; n <= sp.top(); ++n) r.basis.push_back(columns(kept[n], sp.dim(n)));
  return r;
}

}  // namespace gradalg
