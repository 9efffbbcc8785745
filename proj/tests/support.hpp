#pragma once

#include "gradalg/action.hpp"

#include <random>

namespace gradalg::testing {

template <class S>
Mat<S> random_matrix(const Field<S>& f, Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng, int bound = 3) {
  Mat<S> m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = f.random(rng, bound);
  return m;
}

// Product of random factors, so the rank is at most r.
template <class S>
Mat<S> random_rank(const Field<S>& f, Eigen::Index rows, Eigen::Index cols, Eigen::Index r, std::mt19937_64& rng) {
  return random_matrix(f, rows, r, rng) * random_matrix(f, r, cols, rng);
}

template <class S>
GradedMap<S> random_map(const GradedSpace<S>& sp, int degree, std::mt19937_64& rng) {
  GradedMap<S> g(sp, degree);
  for (int m = 0; m <= sp.top(); ++m)
    if (m + degree >= 0 && m + degree <= sp.top())
      g.set_block(m, random_matrix(sp.field(), sp.dim(m + degree), sp.dim(m), rng));
  return g;
}

// Random map vanishing on sources 0..k, i.e. an element of A_{degree,k}.
template <class S>
GradedMap<S> random_tail(const GradedSpace<S>& sp, int degree, int k, std::mt19937_64& rng) {
  GradedMap<S> g = random_map(sp, degree, rng);
  for (int m = 0; m <= std::min(k, sp.top()); ++m)
    if (m + degree >= 0 && m + degree <= sp.top()) g.set_block(m, zeros<S>(sp.dim(m + degree), sp.dim(m)));
  return g;
}

// Determinant by cofactor expansion; an oracle independent of elimination.
template <class S>
S cofactor_det(const Mat<S>& a, const Field<S>& f) {
  const Eigen::Index n = a.rows();
  if (n == 0) return f.one();
  if (n == 1) return a(0, 0);
  S d = f.zero();
  for (Eigen::Index j = 0; j < n; ++j) {
    if (is_zero(a(0, j))) continue;
    Mat<S> minor(n - 1, n - 1);
    for (Eigen::Index r = 1; r < n; ++r)
      for (Eigen::Index c = 0, k = 0; c < n; ++c)
        if (c != j) minor(r - 1, k++) = a(r, c);
    S t = a(0, j) * cofactor_det(minor, f);
    d = j % 2 == 0 ? d + t : d - t;
  }
  return d;
}

}  // namespace gradalg::testing
