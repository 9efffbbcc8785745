#pragma once

#include "gradalg/poly.hpp"

#include <deque>
#include <random>
#include <string>

namespace gradalg {

class SplitUndecided : public std::runtime_error {
 public:
  explicit SplitUndecided(std::string factor)
      : std::runtime_error("split undecided; minimal splitting needs a root of " + factor), factor_(std::move(factor)) {}
  const std::string& factor() const { return factor_; }

 private:
  std::string factor_;
};

class NotSemisimple : public std::runtime_error {
 public:
  NotSemisimple(int degree, std::vector<std::string> witness)
      : std::runtime_error("module is not semisimple at degree " + std::to_string(degree)),
        degree_(degree),
        witness_(std::move(witness)) {}
  int degree() const { return degree_; }
  const std::vector<std::string>& witness() const { return witness_; }

 private:
  int degree_;
  std::vector<std::string> witness_;
};

// Smallest subspace containing the seed columns and stable under gens.
template <class S>
Mat<S> spin_vectors(const std::vector<Mat<S>>& gens, const Mat<S>& seeds) {
  const int d = static_cast<int>(seeds.rows());
  Echelon<S> ech(d);
  std::vector<std::vector<S>> kept;
  std::deque<std::size_t> queue;
  auto add = [&](std::vector<S> v) {
    if (ech.full() || !ech.insert(v)) return;
    kept.push_back(std::move(v));
    queue.push_back(kept.size() - 1);
  };
  for (Eigen::Index j = 0; j < seeds.cols(); ++j) {
    Vec<S> c = seeds.col(j);
    add(std::vector<S>(c.data(), c.data() + c.size()));
  }
  while (!queue.empty() && !ech.full()) {
    Vec<S> v = to_vec(kept[queue.front()]);
    queue.pop_front();
    for (const auto& g : gens) {
      Vec<S> w = g * v;
      add(std::vector<S>(w.data(), w.data() + w.size()));
    }
  }
  return columns(kept, d);
}

// Basis of the unital algebra generated by gens inside End(F^d).
template <class S>
std::vector<Mat<S>> enveloping_algebra(const std::vector<Mat<S>>& gens, int d, const Field<S>& f) {
  Echelon<S> ech(d * d);
  std::vector<Mat<S>> basis;
  std::deque<std::size_t> queue;
  auto add = [&](Mat<S> m) {
    std::vector<S> flat;
    append_flat<S>(flat, m);
    if (ech.full() || !ech.insert(std::move(flat))) return;
    basis.push_back(std::move(m));
    queue.push_back(basis.size() - 1);
  };
  add(identity(f, d));
  while (!queue.empty() && !ech.full()) {
    Mat<S> x = basis[queue.front()];
    queue.pop_front();
    for (const auto& g : gens) add(g * x);
  }
  return basis;
}

template <class S>
struct SplitResult {
  bool irreducible = false;
  Mat<S> subspace;  // proper invariant subspace, basis columns
  int algebra_rank = 0;
};

// Holt-Rees MeatAxe with a Las Vegas choice of algebra elements, seeded.
// Returns a proper invariant subspace, or a certificate (the enveloping
// algebra is all of End(F^d)). Throws SplitUndecided when the module is
// irreducible but not absolutely so, or no decision was reached.
template <class S>
SplitResult<S> split_block_module(const std::vector<Mat<S>>& gens, int d, const Field<S>& f, std::uint64_t seed) {
  if (d <= 0) throw std::invalid_argument("split_block_module needs a nonzero space");
  SplitResult<S> out;
  std::vector<Mat<S>> env = enveloping_algebra(gens, d, f);
  out.algebra_rank = static_cast<int>(env.size());
  if (out.algebra_rank == d * d) {
    out.irreducible = true;
    return out;
  }
  std::mt19937_64 rng(seed);
  std::vector<Mat<S>> gens_t;
  for (const auto& g : gens) gens_t.push_back(g.transpose());

  std::vector<Mat<S>> thetas = gens;
  thetas.insert(thetas.end(), env.begin() + 1, env.end());
  const int random_tries = 40;
  for (int i = 0; i < random_tries; ++i) {
    Mat<S> t = zeros<S>(d, d);
    for (const auto& e : env) t += f.random(rng, 2) * e;
    thetas.push_back(std::move(t));
  }

  std::string last_factor;
  for (const auto& theta : thetas) {
    auto factors = irreducible_factors(charpoly<S>(theta, f), f);
    for (const auto& fac : factors) {
      Mat<S> ft = poly_at(fac.poly, theta);
      Mat<S> n = nullspace<S>(ft, f);
      if (n.cols() == 0) continue;
      last_factor = format_poly(fac.poly, f);
      for (Eigen::Index j = 0; j < n.cols(); ++j) {
        Mat<S> s = spin_vectors(gens, Mat<S>(n.col(j)));
        if (s.cols() < d) {
          out.subspace = s;
          return out;
        }
      }
      Mat<S> nt = nullspace<S>(ft.transpose(), f);
      for (Eigen::Index j = 0; j < nt.cols(); ++j) {
        Mat<S> st = spin_vectors(gens_t, Mat<S>(nt.col(j)));
        if (st.cols() < d) {
          out.subspace = nullspace<S>(st.transpose(), f);
          return out;
        }
      }
      if (fac.irreducible && n.cols() == fac.poly.degree()) {
        // Norton's criterion: the module is irreducible, yet End is not
        // reached, so an extension field would be needed.
        throw SplitUndecided(last_factor);
      }
    }
  }
  throw SplitUndecided(last_factor.empty() ? "unknown" : last_factor);
}

// Matrices of the gens on the invariant subspace with basis b.
template <class S>
std::vector<Mat<S>> restrict_gens(const std::vector<Mat<S>>& gens, const Mat<S>& b) {
  std::vector<Mat<S>> out;
  for (const auto& g : gens) {
    auto x = solve_many<S>(b, g * b);
    if (!x) throw std::logic_error("restrict_gens: subspace is not invariant");
    out.push_back(*x);
  }
  return out;
}

// Invariant complement of the invariant subspace b, via a module projection
// onto it; nullopt when none exists.
template <class S>
std::optional<Mat<S>> invariant_complement(const std::vector<Mat<S>>& gens, const Mat<S>& b, const Field<S>& f) {
  const int d = static_cast<int>(b.rows()), k = static_cast<int>(b.cols());
  if (k == d) return zeros<S>(d, 0);
  auto gb = restrict_gens(gens, b);
  const int unknowns = k * d;
  const int rows = static_cast<int>(gens.size()) * k * d + k * k;
  Mat<S> m = zeros<S>(rows, unknowns);
  Vec<S> rhs = Vec<S>::Zero(rows);
  int r = 0;
  for (std::size_t gi = 0; gi < gens.size(); ++gi) {
    const Mat<S>& g = gens[gi];
    const Mat<S>& h = gb[gi];
    for (int a = 0; a < k; ++a)
      for (int c = 0; c < d; ++c, ++r) {
        for (int bb = 0; bb < d; ++bb)
          if (!is_zero(g(bb, c))) m(r, a * d + bb) += g(bb, c);
        for (int e = 0; e < k; ++e)
          if (!is_zero(h(a, e))) m(r, e * d + c) -= h(a, e);
      }
  }
  for (int a = 0; a < k; ++a)
    for (int j = 0; j < k; ++j, ++r) {
      for (int bb = 0; bb < d; ++bb) m(r, a * d + bb) = b(bb, j);
      rhs(r) = a == j ? f.one() : f.zero();
    }
  auto y = solve<S>(m, rhs);
  if (!y) return std::nullopt;
  Mat<S> ym(k, d);
  for (int a = 0; a < k; ++a)
    for (int bb = 0; bb < d; ++bb) ym(a, bb) = (*y)(a * d + bb);
  return nullspace<S>(ym, f);
}

// An absolutely irreducible invariant subspace (basis columns).
template <class S>
Mat<S> irreducible_submodule(const std::vector<Mat<S>>& gens, int d, const Field<S>& f, std::uint64_t seed) {
  Mat<S> basis = identity(f, d);
  std::vector<Mat<S>> g = gens;
  for (;;) {
    auto r = split_block_module(g, static_cast<int>(basis.cols()), f, seed);
    if (r.irreducible) return basis;
    basis = basis * r.subspace;
    g = restrict_gens(g, r.subspace);
  }
}

// Degree-0 module maps X with X a_i = b_i X, basis of d2 x d1 matrices.
template <class S>
std::vector<Mat<S>> module_maps(const std::vector<Mat<S>>& a, const std::vector<Mat<S>>& b, const Field<S>& f) {
  const int d1 = a.empty() ? 0 : static_cast<int>(a[0].rows());
  const int d2 = b.empty() ? 0 : static_cast<int>(b[0].rows());
  Mat<S> m = zeros<S>(static_cast<Eigen::Index>(a.size()) * d2 * d1, d2 * d1);
  int r = 0;
  // X(i, j) is unknown i * d1 + j.
  for (std::size_t g = 0; g < a.size(); ++g)
    for (int i = 0; i < d2; ++i)
      for (int j = 0; j < d1; ++j, ++r) {
        for (int l = 0; l < d1; ++l)
          if (!is_zero(a[g](l, j))) m(r, i * d1 + l) += a[g](l, j);
        for (int l = 0; l < d2; ++l)
          if (!is_zero(b[g](i, l))) m(r, l * d1 + j) -= b[g](i, l);
      }
  Mat<S> ker = nullspace<S>(m, f);
  std::vector<Mat<S>> out;
  for (Eigen::Index c = 0; c < ker.cols(); ++c) {
    Mat<S> x(d2, d1);
    for (int i = 0; i < d2; ++i)
      for (int j = 0; j < d1; ++j) x(i, j) = ker(i * d1 + j, c);
    out.push_back(std::move(x));
  }
  return out;
}

// Equivalence of two absolutely irreducible matrix modules, where module
// maps form a space of dimension at most one.
template <class S>
bool equivalent_matrix_modules(const std::vector<Mat<S>>& a, const std::vector<Mat<S>>& b, const Field<S>& f) {
  if (a.size() != b.size() || a.empty() || a[0].rows() != b[0].rows()) return false;
  for (const auto& x : module_maps(a, b, f))
    if (inverse<S>(x, f)) return true;
  return false;
}

// Direct sum decomposition into absolutely irreducible invariant subspaces.
template <class S>
std::vector<Mat<S>> decompose_semisimple(const std::vector<Mat<S>>& gens, int d, const Field<S>& f,
                                         std::uint64_t seed, int degree = 0) {
  std::vector<Mat<S>> pieces;
  Mat<S> rest = identity(f, d);
  std::vector<Mat<S>> g = gens;
  while (rest.cols() > 0) {
    const int m = static_cast<int>(rest.cols());
    Mat<S> p = irreducible_submodule(g, m, f, seed);
    auto comp = invariant_complement(g, p, f);
    if (!comp) {
      std::vector<std::string> w;
      Vec<S> v = rest * p.col(0);
      for (Eigen::Index i = 0; i < v.size(); ++i) w.push_back(f.format(v(i)));
      throw NotSemisimple(degree, w);
    }
    pieces.push_back(rest * p);
    if (comp->cols() == 0) break;
    g = restrict_gens(g, *comp);
    rest = rest * *comp;
  }
  return pieces;
}

}  // namespace gradalg
