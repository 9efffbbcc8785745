#pragma once

#include "gradalg/spin.hpp"

#include <map>
#include <optional>
#include <string>

namespace gradalg {

class PreconditionFailed : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class StageUnsolvable : public std::runtime_error {
 public:
  explicit StageUnsolvable(int stage)
      : std::runtime_error("stage " + std::to_string(stage) + " residual lies outside the product span"), stage_(stage) {}
  int stage() const { return stage_; }

 private:
  int stage_;
};

// Basis of closure_delta on trusted blocks; maps[i] is the image of words[i].
template <class S>
struct DegreeBasis {
  int degree = 0;
  std::vector<Word> words;
  std::vector<GradedMap<S>> maps;
  int dim() const { return static_cast<int>(words.size()); }
};

template <class S>
std::vector<int> trusted_sources(const Action<S>& a) {
  std::vector<int> s;
  for (int n = 0; n <= a.trusted(); ++n) s.push_back(n);
  return s;
}

// Closure at the stored truncation, restricted to W^(N). Degrees with no
// nonzero element are returned empty.
template <class S>
std::map<int, DegreeBasis<S>> closure(const Action<S>& a, int dmin, int dmax) {
  const int N = a.trusted();
  ColumnSpin<S> spin = column_spin(a, trusted_sources(a));
  GradedSpace<S> trusted = a.space().truncated(N);
  std::map<int, DegreeBasis<S>> out;
  for (int deg = dmin; deg <= dmax; ++deg) {
    DegreeBasis<S> basis;
    basis.degree = deg;
    int len = 0;
    for (int s = 0; s <= N; ++s) len += trusted.dim(s) * trusted.dim(s + deg);
    Echelon<S> ech(len);
    for (const auto& el : spin.at(deg)) {
      GradedMap<S> f(trusted, deg);
      for (int s = 0; s <= N; ++s)
        if (trusted.dim(s + deg) > 0 && s + deg <= N) f.set_block(s, el.blocks[s]);
      if (len == 0 || !ech.insert(f.flat())) continue;
      basis.words.push_back(el.word);
      basis.maps.push_back(std::move(f));
    }
    out.emplace(deg, std::move(basis));
  }
  return out;
}

// {w in W^(N) : A w = 0}; for a unital action this is zero.
template <class S>
GradedSubspace<S> annihilator_in_module(const Action<S>& a) {
  const auto& sp = a.space();
  GradedSubspace<S> r;
  for (int n = 0; n <= a.trusted(); ++n) {
    if (a.unital() || sp.dim(n) == 0) {
      r.basis.push_back(zeros<S>(sp.dim(n), 0));
      continue;
    }
    int rows = 0;
    for (const auto& g : a.generators()) rows += sp.dim(n + g.degree());
    Mat<S> stacked(rows, sp.dim(n));
    int at = 0;
    for (const auto& g : a.generators()) {
      Mat<S> b = g.map.block(n);
      stacked.middleRows(at, b.rows()) = b;
      at += static_cast<int>(b.rows());
    }
    r.basis.push_back(nullspace<S>(stacked, a.field()));
  }
  return r;
}

// Products b c restricted to W(r), b in closure_{n+r} on W(0) and c in
// closure_{-r} on W(r), as flattened d_{n+r} x d_r blocks.
template <class S>
std::vector<std::vector<S>> stage_products(const ColumnSpin<S>& from0, const RowSpin<S>& into0, int n, int r,
                                           std::vector<std::pair<Word, Word>>* words = nullptr) {
  std::vector<std::vector<S>> out;
  for (const auto& b : from0.at(n + r))
    for (const auto& c : into0.at(-r)) {
      std::vector<S> flat;
      append_flat<S>(flat, b.blocks[0] * c.blocks[0]);
      out.push_back(std::move(flat));
      if (words) words->emplace_back(b.word, c.word);
    }
  return out;
}

template <class S>
int span_rank(const std::vector<std::vector<S>>& vs, int length) {
  Echelon<S> e(length);
  for (const auto& v : vs)
    if (e.insert(v) && e.full()) break;
  return e.rank();
}

struct RankCheck {
  int degree = 0;
  int rank = 0;
  int expected = 0;
  bool ok() const { return rank == expected; }
};

struct PairCheck {
  int r = 0, s = 0;
  bool nonzero_on_r = false;
  bool zero_on_s = false;
  bool ok() const { return nonzero_on_r && zero_on_s; }
};

struct BlockCriteria {
  int k = 0;
  std::vector<RankCheck> absolute;      // closure_0 on W(n) spans End W(n)
  std::vector<PairCheck> inequivalence;  // W(r) against W(s), s < r
  RankCheck top;                         // closure_k closure_{-k} on W(k)
  bool ok() const {
    for (const auto& c : absolute)
      if (!c.ok()) return false;
    for (const auto& c : inequivalence)
      if (!c.ok()) return false;
    return top.ok();
  }
};

template <class S>
int degree_zero_rank(const Action<S>& a, const ColumnSpin<S>& from0, const RowSpin<S>& into0, int n) {
  const int d = a.space().dim(n);
  int rk = span_rank(stage_products(from0, into0, 0, n), d * d);
  if (rk == d * d) return rk;
  ColumnSpin<S> local = column_spin(a, {n});
  std::vector<std::vector<S>> vs;
  for (const auto& el : local.at(0)) vs.push_back(flatten(el.blocks));
  return span_rank(vs, d * d);
}

template <class S>
BlockCriteria check_block_criteria(const Action<S>& a, int k) {
  if (k < 0 || k > a.trusted()) throw PreconditionFailed("block criteria need 0 <= k <= N");
  const auto& sp = a.space();
  ColumnSpin<S> from0 = column_spin(a, {0});
  RowSpin<S> into0 = row_spin(a, {0});
  BlockCriteria out;
  out.k = k;
  for (int n = 0; n <= k; ++n) {
    if (sp.dim(n) == 0) continue;
    out.absolute.push_back({n, degree_zero_rank(a, from0, into0, n), sp.dim(n) * sp.dim(n)});
  }
  for (int r = 1; r <= k; ++r) {
    if (sp.dim(r) == 0) continue;
    bool nonzero = span_rank(stage_products(from0, into0, 0, r), sp.dim(r) * sp.dim(r)) > 0;
    for (int s = 0; s < r; ++s) {
      if (sp.dim(s) == 0) continue;
      // Elements of closure_{-r} map W(s) into the zero space W(s - r).
      bool zero = sp.dim(s - r) == 0;
      out.inequivalence.push_back({r, s, nonzero, zero});
    }
  }
  out.top = {k, span_rank(stage_products(from0, into0, 0, k), sp.dim(k) * sp.dim(k)), sp.dim(k) * sp.dim(k)};
  return out;
}

struct IrreducibilityReport {
  bool annihilator_zero = true;
  std::vector<RankCheck> absolute;
  // (n, t): closure_{t-n} W(n) fails to fill W(t).
  std::vector<std::pair<int, int>> transitivity_failures;
  bool irreducible() const {
    if (!annihilator_zero || !transitivity_failures.empty()) return false;
    for (const auto& c : absolute)
      if (!c.ok()) return false;
    return true;
  }
};

template <class S>
IrreducibilityReport irreducibility_report(const Action<S>& a) {
  const auto& sp = a.space();
  const int N = a.trusted();
  IrreducibilityReport out;
  out.annihilator_zero = annihilator_in_module(a).total_dim() == 0;
  ColumnSpin<S> from0 = column_spin(a, {0});
  RowSpin<S> into0 = row_spin(a, {0});
  for (int n = 0; n <= N; ++n) {
    if (sp.dim(n) == 0) continue;
    out.absolute.push_back({n, degree_zero_rank(a, from0, into0, n), sp.dim(n) * sp.dim(n)});
    GradedSubspace<S> seed = empty_subspace(sp);
    seed.basis[n] = identity(a.field(), sp.dim(n));
    GradedSubspace<S> reach = vector_spin(a, seed, N);
    for (int t = 0; t <= N; ++t)
      if (t != n && reach.dim(t) != sp.dim(t)) out.transitivity_failures.emplace_back(n, t);
  }
  return out;
}

template <class S>
bool check_irreducible(const Action<S>& a) {
  return irreducibility_report(a).irreducible();
}

// a = sum over stages r of a_r, with a_r = sum coeff * left * right,
// left of degree n + r and right of degree -r.
template <class S>
struct CertificateTerm {
  S coeff;
  Word left;
  Word right;
};

template <class S>
struct Certificate {
  int degree = 0;
  int level = 0;
  std::vector<std::vector<CertificateTerm<S>>> stages;
  bool verified = false;
};

struct VerifyResult {
  bool ok = true;
  int stage = -1;
  std::string reason;
};

// The word as a map on the stored space, computed only at sources <= k.
template <class S>
GradedMap<S> evaluate_below(const Action<S>& a, const Word& w, int k) {
  GradedMap<S> r(a.space(), 0);
  for (int m = 0; m <= std::min(k, a.top()); ++m) r.set_block(m, identity(a.field(), a.space().dim(m)));
  for (auto it = w.rbegin(); it != w.rend(); ++it) r = compose(a.generator(*it).map, r);
  return r;
}

template <class S>
GradedMap<S> stage_map(const Action<S>& a, const std::vector<CertificateTerm<S>>& terms, int degree, int k) {
  GradedMap<S> out(a.space(), degree);
  for (const auto& t : terms) {
    Word w = t.left;
    w.insert(w.end(), t.right.begin(), t.right.end());
    out += t.coeff * evaluate_below(a, w, k);
  }
  return out;
}

template <class S>
VerifyResult verify_certificate(const Action<S>& a, const GradedMap<S>& target, const Certificate<S>& cert) {
  const int n = cert.degree, K = cert.level;
  if (target.degree() != n) return {false, -1, "target degree differs from certificate degree"};
  if (static_cast<int>(cert.stages.size()) != K + 1) return {false, -1, "certificate needs K + 1 stages"};
  GradedMap<S> partial(a.space(), n);
  for (int r = 0; r <= K; ++r) {
    for (const auto& t : cert.stages[r]) {
      for (int g : t.left)
        if (g < 0 || g >= a.size()) return {false, r, "unknown generator index"};
      for (int g : t.right)
        if (g < 0 || g >= a.size()) return {false, r, "unknown generator index"};
      if (a.word_degree(t.left) != n + r || a.word_degree(t.right) != -r)
        return {false, r, "term degrees do not match the stage"};
    }
    GradedMap<S> ar = stage_map(a, cert.stages[r], n, K);
    if (!in_amk(ar, r - 1)) return {false, r, "stage does not vanish below its index"};
    partial += ar;
    if (!agree_below(partial, target, r)) return {false, r, "partial sum disagrees with the target"};
  }
  return {};
}

template <class S>
Certificate<S> burnside_solve(const Action<S>& a, const GradedMap<S>& target, int level) {
  const int n = target.degree();
  // Blocks landing above N must be zero-dimensional; with every d_j > 0
  // this is K + max(n, 0) <= N.
  if (level < 0 || level > a.trusted())
    throw PreconditionFailed("burnside_solve needs 0 <= K <= N");
  for (int r = 0; r <= level; ++r)
    if (r + n > a.trusted() && a.space().dim(r + n) > 0)
      throw PreconditionFailed("burnside_solve needs K + max(n, 0) <= N unless the blocks above N are empty");
  if (!(target.space() == a.space())) throw PreconditionFailed("target lives on another space");
  if (!check_irreducible(a)) throw PreconditionFailed("action is not irreducible");
  const auto& sp = a.space();
  ColumnSpin<S> from0 = column_spin(a, {0});
  RowSpin<S> into0 = row_spin(a, {0});
  Certificate<S> cert;
  cert.degree = n;
  cert.level = level;
  std::vector<Mat<S>> applied;
  for (int s = 0; s <= level; ++s) applied.push_back(zeros<S>(sp.dim(s + n), sp.dim(s)));
  for (int r = 0; r <= level; ++r) {
    std::vector<CertificateTerm<S>> terms;
    Mat<S> residual = target.block(r) - applied[r];
    if (residual.size() > 0 && !all_zero(residual)) {
      std::vector<std::pair<Word, Word>> words;
      auto prods = stage_products(from0, into0, n, r, &words);
      const int len = static_cast<int>(residual.size());
      std::vector<S> rhs;
      append_flat<S>(rhs, residual);
      auto x = prods.empty() ? std::nullopt : solve<S>(columns(prods, len), to_vec(rhs));
      if (!x) throw StageUnsolvable(r);
      for (std::size_t i = 0; i < words.size(); ++i)
        if (!is_zero((*x)(i))) terms.push_back({(*x)(i), words[i].first, words[i].second});
      for (int s = r; s <= level; ++s)
        for (const auto& t : terms) {
          Word w = t.left;
          w.insert(w.end(), t.right.begin(), t.right.end());
          applied[s] += t.coeff * evaluate_at(a, w, s);
        }
    }
    cert.stages.push_back(std::move(terms));
  }
  cert.verified = verify_certificate(a, target, cert).ok;
  return cert;
}

// Two-sided ideal generated by the seeds, closed under left and right
// multiplication by generators on the stored space. Bases per degree.
template <class S>
std::map<int, std::vector<GradedMap<S>>> ideal_closure(const Action<S>& a, const std::vector<GradedMap<S>>& seeds) {
  std::map<int, std::vector<GradedMap<S>>> out;
  std::map<int, Echelon<S>> ech;
  std::deque<std::pair<int, std::size_t>> queue;
  const auto& sp = a.space();
  auto length = [&](int deg) {
    int n = 0;
    for (int m = 0; m <= sp.top(); ++m) n += sp.dim(m) * sp.dim(m + deg);
    return n;
  };
  auto add = [&](GradedMap<S> f) {
    int deg = f.degree();
    int len = length(deg);
    if (len == 0 || f.is_zero()) return;
    auto [it, fresh] = ech.try_emplace(deg, len);
    if (!it->second.insert(f.flat())) return;
    out[deg].push_back(std::move(f));
    queue.emplace_back(deg, out[deg].size() - 1);
  };
  for (const auto& s : seeds) add(s);
  while (!queue.empty()) {
    auto [deg, idx] = queue.front();
    queue.pop_front();
    GradedMap<S> x = out[deg][idx];
    for (const auto& g : a.generators()) {
      add(compose(g.map, x));
      add(compose(x, g.map));
    }
  }
  return out;
}

}  // namespace gradalg
