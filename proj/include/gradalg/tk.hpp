#pragma once

#include "gradalg/burnside.hpp"
#include "gradalg/intertwine.hpp"
#include "gradalg/split.hpp"

#include <optional>
#include <string>

namespace gradalg {

class UnsupportedCharacteristic : public std::runtime_error {
 public:
  UnsupportedCharacteristic(std::uint32_t p, int dim)
      : std::runtime_error("trace-form radical needs characteristic 0 or p > " + std::to_string(dim) + ", got p = " +
                           std::to_string(p)) {}
};

class DOperatorMissing : public std::runtime_error {
 public:
  DOperatorMissing() : std::runtime_error("no element of closure_0 acts as the degree operator on W^(N)") {}
};

// Basis e_0..e_{n-1}; left[i] is the matrix of x -> e_i x in that basis, so
// e_i e_j = sum_k left[i](k, j) e_k.
template <class S>
struct FiniteAlgebra {
  Field<S> field;
  std::vector<Mat<S>> left;
  std::optional<Vec<S>> unit;
  int dim() const { return static_cast<int>(left.size()); }

  Vec<S> product(const Vec<S>& x, const Vec<S>& y) const {
    Mat<S> lx = zeros<S>(dim(), dim());
    for (int i = 0; i < dim(); ++i)
      if (!is_zero(x(i))) lx += x(i) * left[i];
    return lx * y;
  }
  Mat<S> left_of(const Vec<S>& x) const {
    Mat<S> lx = zeros<S>(dim(), dim());
    for (int i = 0; i < dim(); ++i)
      if (!is_zero(x(i))) lx += x(i) * left[i];
    return lx;
  }
};

// Algebra spanned by the columns of basis (flattened elements), with the
// product given on basis pairs. The span must be closed under the product.
template <class S, class Mul>
FiniteAlgebra<S> algebra_from_products(const Field<S>& f, const Mat<S>& basis, Mul mul,
                                       const std::optional<Vec<S>>& one = std::nullopt) {
  const int n = static_cast<int>(basis.cols());
  const auto len = basis.rows();
  Mat<S> rhs(len, static_cast<Eigen::Index>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) rhs.col(i * n + j) = mul(i, j);
  auto x = solve_many<S>(basis, rhs);
  if (!x) throw std::logic_error("algebra basis is not closed under the product");
  FiniteAlgebra<S> alg{f, {}, std::nullopt};
  for (int i = 0; i < n; ++i) alg.left.push_back(x->middleCols(static_cast<Eigen::Index>(i) * n, n));
  if (one) {
    auto u = solve<S>(basis, *one);
    if (u) alg.unit = *u;
  }
  return alg;
}

// Subalgebra of square matrices spanned by basis (closed under product).
template <class S>
FiniteAlgebra<S> matrix_algebra(const std::vector<Mat<S>>& basis, const Field<S>& f) {
  std::vector<std::vector<S>> flat;
  for (const auto& m : basis) {
    flat.emplace_back();
    append_flat<S>(flat.back(), m);
  }
  const int d = basis.empty() ? 0 : static_cast<int>(basis[0].rows());
  Mat<S> b = columns(flat, d * d);
  auto mul = [&](int i, int j) {
    std::vector<S> v;
    append_flat<S>(v, Mat<S>(basis[i] * basis[j]));
    return to_vec(v);
  };
  std::vector<S> one;
  append_flat<S>(one, identity(f, d));
  return algebra_from_products(f, b, mul, std::optional<Vec<S>>(to_vec(one)));
}

// Kernel of the trace form tr(L_x L_y) on the unitalization; basis columns.
template <class S>
Mat<S> radical(const FiniteAlgebra<S>& alg) {
  const int n = alg.dim();
  const auto p = alg.field.spec().p;
  if (alg.field.characteristic() != 0 && static_cast<int>(p) <= n) throw UnsupportedCharacteristic(p, n);
  std::vector<Mat<S>> lt;
  for (const auto& l : alg.left) lt.push_back(l.transpose());
  Mat<S> g(n + 1, n);
  for (int i = 0; i < n; ++i) {
    g(n, i) = alg.left[i].trace();
    for (int j = i; j < n; ++j) {
      S t = alg.field.zero();
      for (Eigen::Index x = 0; x < n * n; ++x) {
        const S& u = alg.left[j].data()[x];
        if (!is_zero(u)) t += u * lt[i].data()[x];
      }
      g(j, i) = t;
      g(i, j) = t;
    }
  }
  return nullspace<S>(g, alg.field);
}

// alg / ideal for an ideal given by basis columns.
template <class S>
FiniteAlgebra<S> quotient_algebra(const FiniteAlgebra<S>& alg, const Mat<S>& ideal) {
  const int n = alg.dim();
  Echelon<S> ech(n);
  for (Eigen::Index j = 0; j < ideal.cols(); ++j) {
    Vec<S> c = ideal.col(j);
    ech.insert(std::vector<S>(c.data(), c.data() + c.size()));
  }
  std::vector<int> keep;
  for (int i = 0; i < n; ++i) {
    std::vector<S> e(n, alg.field.zero());
    e[i] = alg.field.one();
    if (ech.insert(e)) keep.push_back(i);
  }
  const int t = static_cast<int>(keep.size());
  Mat<S> full(n, t + ideal.cols());
  for (int a = 0; a < t; ++a) {
    full.col(a).setConstant(alg.field.zero());
    full(keep[a], a) = alg.field.one();
  }
  full.rightCols(ideal.cols()) = ideal;
  FiniteAlgebra<S> q{alg.field, {}, std::nullopt};
  for (int a = 0; a < t; ++a) {
    Mat<S> rhs(n, t);
    for (int b = 0; b < t; ++b) rhs.col(b) = alg.left[keep[a]].col(keep[b]);
    auto x = solve_many<S>(full, rhs);
    if (!x) throw std::logic_error("quotient_algebra: basis does not span");
    q.left.push_back(x->topRows(t));
  }
  if (alg.unit) {
    auto u = solve<S>(full, *alg.unit);
    q.unit = Vec<S>(u->head(t));
  }
  return q;
}

// Degree-0 maps on W^(N) as flat vectors over the blocks at sources 0..N.
template <class S>
int degree_zero_length(const GradedSpace<S>& sp, int N) {
  int len = 0;
  for (int s = 0; s <= N; ++s) len += sp.dim(s) * sp.dim(s);
  return len;
}

// Span of b c, b in closure_n, c in closure_{-n}, k < n <= N, on W^(N).
template <class S>
std::vector<GradedMap<S>> compute_b0k(const Action<S>& a, int k, const std::map<int, DegreeBasis<S>>* cl = nullptr) {
  if (k < 0) throw PreconditionFailed("compute_b0k needs k >= 0");
  const int N = a.trusted();
  std::map<int, DegreeBasis<S>> own;
  if (!cl) {
    own = closure(a, -N, N);
    cl = &own;
  }
  const GradedSpace<S> trusted = a.space().truncated(N);
  int bound = 0;
  for (int s = k + 1; s <= N; ++s) bound += trusted.dim(s) * trusted.dim(s);
  Echelon<S> ech(degree_zero_length(trusted, N));
  std::vector<GradedMap<S>> out;
  for (int n = k + 1; n <= N && ech.rank() < bound; ++n) {
    auto up = cl->find(n), down = cl->find(-n);
    if (up == cl->end() || down == cl->end()) continue;
    for (const auto& b : up->second.maps)
      for (const auto& c : down->second.maps) {
        if (ech.rank() == bound) break;
        GradedMap<S> p = compose(b, c);
        if (ech.insert(p.flat())) out.push_back(std::move(p));
      }
  }
  return out;
}

template <class S>
struct TkAlgebra {
  int k = 0;
  FiniteAlgebra<S> algebra;
  std::vector<Word> words;               // provenance of the complement basis
  std::vector<GradedMap<S>> elements;    // complement basis on W^(N)
  int closure_dim = 0;
  std::vector<GradedMap<S>> b0k;
  std::vector<Mat<S>> pi_images;         // blocks at sources 0..k of each basis element, flattened per element
  int pi_rank = 0;                       // rank of pi_k on T_k
  int pi_target_dim = 0;                 // sum over n <= k of d_n^2
};

template <class S>
TkAlgebra<S> compute_tk(const Action<S>& a, int k, const std::map<int, DegreeBasis<S>>* cl = nullptr) {
  const int N = a.trusted();
  if (k < 0 || k > N) throw PreconditionFailed("compute_tk needs 0 <= k <= N");
  const Field<S>& f = a.field();
  std::map<int, DegreeBasis<S>> own;
  if (!cl) {
    own = closure(a, -N, N);
    cl = &own;
  }
  const DegreeBasis<S>& c0 = cl->at(0);
  auto b0k = compute_b0k(a, k, cl);
  const GradedSpace<S> trusted = a.space().truncated(N);
  const int len = degree_zero_length(trusted, N);

  TkAlgebra<S> out{k, FiniteAlgebra<S>{f, {}, std::nullopt}, {}, {}, c0.dim(), b0k, {}, 0, 0};
  Echelon<S> ech(len);
  for (const auto& b : b0k) ech.insert(b.flat());
  for (int i = 0; i < c0.dim(); ++i)
    if (ech.insert(c0.maps[i].flat())) {
      out.words.push_back(c0.words[i]);
      out.elements.push_back(c0.maps[i]);
    }
  const int t = static_cast<int>(out.elements.size());
  std::vector<std::vector<S>> cols;
  for (const auto& e : out.elements) cols.push_back(e.flat());
  for (const auto& b : b0k) cols.push_back(b.flat());
  Mat<S> basis = columns(cols, len);
  Mat<S> rhs(len, static_cast<Eigen::Index>(t) * t);
  for (int i = 0; i < t; ++i)
    for (int j = 0; j < t; ++j) rhs.col(i * t + j) = to_vec(compose(out.elements[i], out.elements[j]).flat());
  auto x = t == 0 ? std::optional<Mat<S>>(Mat<S>(0, 0)) : solve_many<S>(basis, rhs);
  if (!x) throw std::logic_error("compute_tk: closure_0 is not closed under products");
  for (int i = 0; i < t; ++i)
    out.algebra.left.push_back(x->block(0, static_cast<Eigen::Index>(i) * t, t, t));
  if (t > 0) {
    auto u = solve<S>(basis, to_vec(GradedMap<S>::identity(trusted).flat()));
    if (u) out.algebra.unit = Vec<S>(u->head(t));
  }

  for (int s = 0; s <= k; ++s) out.pi_target_dim += trusted.dim(s) * trusted.dim(s);
  std::vector<std::vector<S>> images;
  for (const auto& e : out.elements) {
    std::vector<S> v;
    for (int s = 0; s <= k; ++s) append_flat<S>(v, e.block_ref(s));
    images.push_back(v);
    out.pi_images.push_back(to_vec(v));
  }
  out.pi_rank = span_rank(images, out.pi_target_dim);
  return out;
}

// Coordinates of the element of closure_0 acting as d on W^(N), if any.
template <class S>
std::optional<GradedMap<S>> locate_degree_operator(const Action<S>& a, const DegreeBasis<S>& c0) {
  const GradedSpace<S> trusted = a.space().truncated(a.trusted());
  GradedMap<S> d = degree_operator(trusted);
  if (c0.dim() == 0) return d.is_zero() ? std::optional(d) : std::nullopt;
  std::vector<std::vector<S>> cols;
  for (const auto& m : c0.maps) cols.push_back(m.flat());
  auto v = d.flat();
  if (!solve<S>(columns(cols, static_cast<Eigen::Index>(v.size())), to_vec(v))) return std::nullopt;
  return d;
}

template <class S>
struct WeightClass {
  int module_dim = 0;
  int summands = 0;  // copies in the regular representation of T_0
  S lambda;
};

template <class S>
struct WeightDifference {
  int i = 0, j = 0;
  S difference;
  bool integer = false;
};

struct ReturnCheck {
  int n = 0;
  int raise_rank = 0;   // independent restrictions of closure_n to W(0)
  int return_rank = 0;  // rank of closure_{-n} closure_n on W(0)
  bool ok() const { return raise_rank == 0 || return_rank > 0; }
};

template <class S>
struct RationalityReport {
  int K = 0;
  std::vector<std::pair<int, int>> radical_dims;  // (k, dim rad T_k)
  std::vector<int> tk_dims;
  std::vector<WeightClass<S>> classes;
  std::vector<WeightDifference<S>> differences;
  std::vector<ReturnCheck> returns;

  bool condition1() const {
    for (const auto& [k, r] : radical_dims)
      if (r != 0) return false;
    return true;
  }
  bool condition2() const {
    for (const auto& d : differences)
      if (d.integer) return false;
    return true;
  }
  bool condition3() const {
    for (const auto& r : returns)
      if (!r.ok()) return false;
    return true;
  }
  bool ok() const { return condition1() && condition2() && condition3(); }
};

template <class S>
RationalityReport<S> check_rationality_conditions(const Action<S>& a, int K) {
  const int N = a.trusted();
  if (K < 0 || K > N) throw PreconditionFailed("rationality check needs 0 <= K <= N");
  const Field<S>& f = a.field();
  auto cl = closure(a, -N, N);
  auto d = locate_degree_operator(a, cl.at(0));
  if (!d) throw DOperatorMissing();

  RationalityReport<S> rep;
  rep.K = K;
  std::optional<TkAlgebra<S>> t0;
  for (int k = 0; k <= K; ++k) {
    TkAlgebra<S> tk = compute_tk(a, k, &cl);
    rep.tk_dims.push_back(tk.algebra.dim());
    rep.radical_dims.emplace_back(k, static_cast<int>(radical(tk.algebra).cols()));
    if (k == 0) t0 = std::move(tk);
  }

  // Condition (2): simple T_0-modules from the regular representation.
  const auto& alg = t0->algebra;
  if (alg.dim() > 0 && rep.radical_dims[0].second == 0) {
    std::vector<std::vector<S>> cols;
    for (const auto& e : t0->elements) cols.push_back(e.flat());
    for (const auto& b : t0->b0k) cols.push_back(b.flat());
    auto dv = d->flat();
    auto coords = solve<S>(columns(cols, static_cast<Eigen::Index>(dv.size())), to_vec(dv));
    Vec<S> dbar = coords->head(alg.dim());
    Mat<S> ld = alg.left_of(dbar);
    auto pieces = decompose_semisimple(alg.left, alg.dim(), f, a.seed(), 0);
    std::vector<std::vector<Mat<S>>> reps;
    for (const auto& p : pieces) {
      auto g = restrict_gens(alg.left, p);
      auto l = restrict_gens(std::vector<Mat<S>>{ld}, p)[0];
      S lambda = l(0, 0);
      if (!equal<S>(l, Mat<S>(lambda * identity(f, l.rows()))))
        throw std::logic_error("degree operator is not scalar on a simple T_0-module");
      int cls = -1;
      for (std::size_t c = 0; c < reps.size(); ++c)
        if (equivalent_matrix_modules(reps[c], g, f)) cls = static_cast<int>(c);
      if (cls < 0) {
        reps.push_back(g);
        rep.classes.push_back({static_cast<int>(p.cols()), 1, lambda});
      } else {
        ++rep.classes[cls].summands;
      }
    }
    for (std::size_t i = 0; i < rep.classes.size(); ++i)
      for (std::size_t j = i + 1; j < rep.classes.size(); ++j) {
        S diff = rep.classes[i].lambda - rep.classes[j].lambda;
        rep.differences.push_back({static_cast<int>(i), static_cast<int>(j), diff, f.is_integer(diff)});
      }
  }

  // Condition (3) through products W(0) -> W(n) -> W(0).
  ColumnSpin<S> from0 = column_spin(a, {0});
  RowSpin<S> into0 = row_spin(a, {0});
  const int d0 = a.space().dim(0);
  for (int n = 1; n <= K; ++n) {
    ReturnCheck c;
    c.n = n;
    c.raise_rank = static_cast<int>(from0.at(n).size());
    if (c.raise_rank > 0) {
      std::vector<std::vector<S>> prods;
      for (const auto& down : into0.at(-n))
        for (const auto& up : from0.at(n)) {
          std::vector<S> v;
          append_flat<S>(v, Mat<S>(down.blocks[0] * up.blocks[0]));
          prods.push_back(std::move(v));
        }
      c.return_rank = span_rank(prods, d0 * d0);
    }
    rep.returns.push_back(c);
  }
  return rep;
}

}  // namespace gradalg
