#pragma once

#include "gradalg/action.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <string>

namespace gradalg {

class ZeroBlock : public ValidationError {
 public:
  explicit ZeroBlock(int n) : ValidationError("full model needs d_n > 0, got d_" + std::to_string(n) + " = 0"), degree(n) {}
  int degree;
};

using Partition = std::vector<int>;

// Partitions of n with nonincreasing parts, sorted lexicographically.
inline std::vector<Partition> partitions(int n) {
  std::vector<Partition> out;
  Partition cur;
  auto rec = [&](auto& self, int rest, int maxpart) -> void {
    if (rest == 0) {
      out.push_back(cur);
      return;
    }
    for (int p = std::min(rest, maxpart); p >= 1; --p) {
      cur.push_back(p);
      self(self, rest - p, p);
      cur.pop_back();
    }
  };
  rec(rec, n, n);
  std::sort(out.begin(), out.end());
  return out;
}

template <class S>
Action<S> model_full(const Field<S>& f, const std::vector<int>& dims, int margin = 1) {
  for (std::size_t n = 0; n < dims.size(); ++n)
    if (dims[n] == 0) throw ZeroBlock(static_cast<int>(n));
  const int N = static_cast<int>(dims.size()) - 1;
  std::vector<int> stored = dims;
  stored.resize(dims.size() + margin, 0);
  GradedSpace<S> sp(stored, f);
  std::vector<Generator<S>> gens;
  for (int n = 0; n < N; ++n) {
    for (int i = 0; i < dims[n + 1]; ++i)
      for (int j = 0; j < dims[n]; ++j) {
        GradedMap<S> g(sp, 1);
        Mat<S> b = zeros<S>(dims[n + 1], dims[n]);
        b(i, j) = f.one();
        g.set_block(n, std::move(b));
        gens.push_back({"up" + std::to_string(n) + "_" + std::to_string(i) + "_" + std::to_string(j), std::move(g)});
      }
    for (int i = 0; i < dims[n]; ++i)
      for (int j = 0; j < dims[n + 1]; ++j) {
        GradedMap<S> g(sp, -1);
        Mat<S> b = zeros<S>(dims[n], dims[n + 1]);
        b(i, j) = f.one();
        g.set_block(n + 1, std::move(b));
        gens.push_back({"dn" + std::to_string(n) + "_" + std::to_string(i) + "_" + std::to_string(j), std::move(g)});
      }
  }
  return Action<S>(sp, N, std::move(gens), true);
}

namespace detail {

inline std::map<Partition, int> partition_index(const std::vector<Partition>& ps) {
  std::map<Partition, int> idx;
  for (std::size_t i = 0; i < ps.size(); ++i) idx[ps[i]] = static_cast<int>(i);
  return idx;
}

// a_k on the Fock space stored up to degree top: a_{-k} (k > 0 here means
// the raising operator of degree +k) adds a part k; a_k removes one with
// coefficient k times its multiplicity.
template <class S>
GradedMap<S> fock_operator(const GradedSpace<S>& sp, int mode) {
  const int k = std::abs(mode);
  GradedMap<S> g(sp, -mode);
  for (int n = 0; n <= sp.top(); ++n) {
    int t = n - mode;
    if (t < 0 || t > sp.top()) continue;
    auto src = partitions(n), dst = partitions(t);
    auto didx = partition_index(dst);
    Mat<S> b = zeros<S>(static_cast<Eigen::Index>(dst.size()), static_cast<Eigen::Index>(src.size()));
    for (std::size_t j = 0; j < src.size(); ++j) {
      Partition mu = src[j];
      if (mode < 0) {
        mu.push_back(k);
        std::sort(mu.rbegin(), mu.rend());
        b(didx.at(mu), static_cast<Eigen::Index>(j)) = sp.field().one();
      } else {
        long long mult = std::count(mu.begin(), mu.end(), k);
        if (mult == 0) continue;
        mu.erase(std::find(mu.begin(), mu.end(), k));
        b(didx.at(mu), static_cast<Eigen::Index>(j)) = sp.field().from_int(k * mult);
      }
    }
    g.set_block(n, std::move(b));
  }
  return g;
}

template <class S>
GradedSpace<S> fock_space(const Field<S>& f, int top) {
  std::vector<int> dims;
  for (int n = 0; n <= top; ++n) dims.push_back(static_cast<int>(partitions(n).size()));
  return GradedSpace<S>(dims, f);
}

}  // namespace detail

// Generators a_{-k} (degree +k) and a_k (degree -k) for 1 <= k <= N.
template <class S>
Action<S> model_heisenberg(const Field<S>& f, int N, std::optional<int> margin = std::nullopt) {
  const int m = margin.value_or(N);
  GradedSpace<S> sp = detail::fock_space(f, N + m);
  std::vector<Generator<S>> gens;
  for (int k = 1; k <= N; ++k) {
    gens.push_back({"a_-" + std::to_string(k), detail::fock_operator(sp, -k)});
    gens.push_back({"a_" + std::to_string(k), detail::fock_operator(sp, k)});
  }
  return Action<S>(sp, N, std::move(gens), true);
}

// L_m = 1/2 sum_j :a_j a_{m-j}: on the Fock module, for |m| <= N.
template <class S>
Action<S> model_virasoro_sugawara(const Field<S>& f, int N, std::optional<int> margin = std::nullopt) {
  if (f.characteristic() == 2) throw ValidationError("Sugawara construction needs 2 to be invertible");
  const int m = margin.value_or(N);
  const int T = N + m;
  GradedSpace<S> sp = detail::fock_space(f, T);
  std::map<int, GradedMap<S>> a;
  for (int k = 1; k <= T; ++k) {
    a.emplace(k, detail::fock_operator(sp, k));
    a.emplace(-k, detail::fock_operator(sp, -k));
  }
  const S half = f.one() / f.from_int(2);
  auto virasoro = [&](int mode) {
    GradedMap<S> L(sp, -mode);
    for (int j = -T - std::abs(mode); j <= T + std::abs(mode); ++j) {
      int x = j, y = mode - j;
      if (x == 0 || y == 0 || !a.count(x) || !a.count(y)) continue;
      if (x > 0 && y < 0) std::swap(x, y);
      L += half * compose(a.at(x), a.at(y));
    }
    return L;
  };
  std::vector<Generator<S>> gens;
  for (int n = N; n >= 1; --n) gens.push_back({"L_-" + std::to_string(n), virasoro(-n)});
  gens.push_back({"L_0", virasoro(0)});
  for (int n = 1; n <= N; ++n) gens.push_back({"L_" + std::to_string(n), virasoro(n)});
  return Action<S>(sp, N, std::move(gens), true);
}

// Copies of the components, block-diagonal, copy c of component i shifted up
// by shifts[i][c]. Generators are matched by name; a generator missing from
// a component acts there as zero. The trusted top is the smallest over the
// shifted copies. Each copy keeps its own stored depth, so equivalent copies
// see the same truncation and the stored top is the largest.
template <class S>
Action<S> model_direct_sum(const std::vector<Action<S>>& components, const std::vector<int>& multiplicities,
                           const std::vector<std::vector<int>>& shifts = {}) {
  if (components.empty() || components.size() != multiplicities.size())
    throw ValidationError("direct sum needs one multiplicity per component");
  struct CopyRef {
    const Action<S>* action;
    int shift;
  };
  std::vector<CopyRef> copies;
  for (std::size_t i = 0; i < components.size(); ++i)
    for (int c = 0; c < multiplicities[i]; ++c) {
      int s = i < shifts.size() && c < static_cast<int>(shifts[i].size()) ? shifts[i][c] : 0;
      if (s < 0) throw ValidationError("direct sum shifts must be nonnegative");
      copies.push_back({&components[i], s});
    }
  if (copies.empty()) throw ValidationError("direct sum needs at least one copy");
  const Field<S> field = components[0].field();
  int N = std::numeric_limits<int>::max(), T = 0;
  bool unital = true;
  for (const auto& c : copies) {
    if (!(c.action->field() == field)) throw ValidationError("direct sum components use different fields");
    N = std::min(N, c.action->trusted() + c.shift);
    T = std::max(T, c.action->top() + c.shift);
    unital = unital && c.action->unital();
  }
  std::vector<int> dims(T + 1, 0);
  std::vector<std::vector<int>> offset(copies.size(), std::vector<int>(T + 1, 0));
  for (int n = 0; n <= T; ++n)
    for (std::size_t c = 0; c < copies.size(); ++c) {
      offset[c][n] = dims[n];
      dims[n] += copies[c].action->space().dim(n - copies[c].shift);
    }
  GradedSpace<S> sp(dims, field);
  std::vector<std::string> names;
  std::map<std::string, int> degree_of;
  for (const auto& comp : components)
    for (const auto& g : comp.generators()) {
      auto [it, fresh] = degree_of.emplace(g.name, g.degree());
      if (fresh)
        names.push_back(g.name);
      else if (it->second != g.degree())
        throw ValidationError("generator '" + g.name + "' has different degrees in the components");
    }
  std::vector<Generator<S>> gens;
  for (const auto& name : names) {
    const int e = degree_of[name];
    GradedMap<S> g(sp, e);
    for (int n = 0; n <= T; ++n) {
      int t = n + e;
      if (t < 0 || t > T) continue;
      Mat<S> b = zeros<S>(sp.dim(t), sp.dim(n));
      for (std::size_t c = 0; c < copies.size(); ++c) {
        int gi = copies[c].action->find(name);
        int local = n - copies[c].shift;
        if (gi < 0 || local < 0) continue;
        Mat<S> lb = copies[c].action->generator(gi).map.block(local);
        if (lb.size() == 0) continue;
        b.block(offset[c][t], offset[c][n], lb.rows(), lb.cols()) = lb;
      }
      g.set_block(n, std::move(b));
    }
    gens.push_back({name, std::move(g)});
  }
  return Action<S>(sp, N, std::move(gens), unital);
}

}  // namespace gradalg
