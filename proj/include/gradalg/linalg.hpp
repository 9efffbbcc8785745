#pragma once

#include "gradalg/field.hpp"

#include <Eigen/Core>

#include <optional>
#include <utility>
#include <vector>

namespace gradalg {

template <class S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;

template <class S>
Mat<S> zeros(Eigen::Index rows, Eigen::Index cols) {
  return Mat<S>::Zero(rows, cols);
}

// a * b skipping zero entries of a; block matrices here are mostly sparse.
template <class S>
Mat<S> multiply(const Mat<S>& a, const Mat<S>& b) {
  Mat<S> c = Mat<S>::Zero(a.rows(), b.cols());
  for (Eigen::Index k = 0; k < a.cols(); ++k)
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      const S& x = a(i, k);
      if (is_zero(x)) continue;
      for (Eigen::Index j = 0; j < b.cols(); ++j)
        if (!is_zero(b(k, j))) add_mul(c(i, j), x, b(k, j));
    }
  return c;
}

// Identity with entries bound to the field (matters for F_p traces).
template <class S>
Mat<S> identity(const Field<S>& f, Eigen::Index n) {
  Mat<S> m = Mat<S>::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = f.one();
  return m;
}

template <class S>
bool all_zero(const Mat<S>& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!is_zero(m(i, j))) return false;
  return true;
}

template <class S>
bool equal(const Mat<S>& a, const Mat<S>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (a(i, j) != b(i, j)) return false;
  return true;
}

template <class S>
struct Rref {
  Mat<S> reduced;
  std::vector<int> pivots;
  int rank() const { return static_cast<int>(pivots.size()); }
};

// Gauss-Jordan elimination, pivoting on the first nonzero entry of each column.
template <class S>
Rref<S> rref(Mat<S> a) {
  const Eigen::Index rows = a.rows(), cols = a.cols();
  std::vector<int> pivots;
  std::vector<Eigen::Index> nz;
  Eigen::Index rank = 0;
  for (Eigen::Index c = 0; c < cols && rank < rows; ++c) {
    Eigen::Index p = rank;
    while (p < rows && is_zero(a(p, c))) ++p;
    if (p == rows) continue;
    if (p != rank) a.row(p).swap(a.row(rank));
    S inv = S(1) / a(rank, c);
    nz.clear();
    for (Eigen::Index k = c; k < cols; ++k)
      if (!is_zero(a(rank, k))) {
        a(rank, k) *= inv;
        nz.push_back(k);
      }
    for (Eigen::Index r = 0; r < rows; ++r) {
      if (r == rank || is_zero(a(r, c))) continue;
      S f = a(r, c);
      for (Eigen::Index k : nz) sub_mul(a(r, k), f, a(rank, k));
    }
    pivots.push_back(static_cast<int>(c));
    ++rank;
  }
  return {std::move(a), std::move(pivots)};
}

template <class S>
int rank(const Mat<S>& a) {
  return rref<S>(a).rank();
}

// Solves a x = b for every column of b; free coordinates are set to zero.
template <class S>
std::optional<Mat<S>> solve_many(const Mat<S>& a, const Mat<S>& b) {
  Mat<S> aug(a.rows(), a.cols() + b.cols());
  aug << a, b;
  Rref<S> r = rref<S>(std::move(aug));
  Mat<S> x = zeros<S>(a.cols(), b.cols());
  int k = 0;
  for (; k < r.rank(); ++k) {
    int c = r.pivots[k];
    if (c >= a.cols()) return std::nullopt;
    x.row(c) = r.reduced.row(k).tail(b.cols());
  }
  return x;
}

template <class S>
std::optional<Vec<S>> solve(const Mat<S>& a, const Vec<S>& b) {
  auto x = solve_many<S>(a, Mat<S>(b));
  if (!x) return std::nullopt;
  return Vec<S>(x->col(0));
}

// Basis of the right kernel, one vector per column, in free-variable order.
template <class S>
Mat<S> nullspace(const Mat<S>& a, const Field<S>& f) {
  Rref<S> r = rref<S>(a);
  std::vector<bool> is_pivot(a.cols(), false);
  for (int c : r.pivots) is_pivot[c] = true;
  Mat<S> n = zeros<S>(a.cols(), a.cols() - r.rank());
  Eigen::Index j = 0;
  for (Eigen::Index c = 0; c < a.cols(); ++c) {
    if (is_pivot[c]) continue;
    n(c, j) = f.one();
    for (int k = 0; k < r.rank(); ++k) n(r.pivots[k], j) = -r.reduced(k, c);
    ++j;
  }
  return n;
}

// Canonical basis (columns) of the span of the columns of v: the nonzero rows
// of rref(v^T). Independent of column order and multiplicity.
template <class S>
Mat<S> span_reduce(const Mat<S>& v) {
  Rref<S> r = rref<S>(v.transpose());
  return r.reduced.topRows(r.rank()).transpose();
}

template <class S>
std::optional<Vec<S>> in_span(const Vec<S>& v, const Mat<S>& basis) {
  return solve<S>(basis, v);
}

template <class S>
std::optional<Mat<S>> inverse(const Mat<S>& a, const Field<S>& f) {
  if (a.rows() != a.cols()) return std::nullopt;
  Rref<S> r = rref<S>(a);
  if (r.rank() != a.rows()) return std::nullopt;
  return solve_many<S>(a, identity(f, a.rows()));
}

// Semi-echelon basis grown one vector at a time. Rows are normalized at the
// pivot and are zero at the pivots of earlier rows.
template <class S>
class Echelon {
 public:
  explicit Echelon(int length = 0) : length_(length) {}

  int length() const { return length_; }
  int rank() const { return static_cast<int>(rows_.size()); }
  bool full() const { return rank() == length_; }

  // Reduces v against the basis; true if a nonzero residual remains.
  bool reduce(std::vector<S>& v) const {
    for (const Row& row : rows_) {
      if (is_zero(v[row.pivot])) continue;
      S c = v[row.pivot];
      for (std::size_t i = 0; i < row.index.size(); ++i) sub_mul(v[row.index[i]], c, row.value[i]);
    }
    for (const S& x : v)
      if (!is_zero(x)) return true;
    return false;
  }

  bool contains(std::vector<S> v) const { return !reduce(v); }

  // Adds v if it is independent of the basis; returns whether it was added.
  bool insert(std::vector<S> v) {
    if (full() || !reduce(v)) return false;
    Row row;
    row.pivot = 0;
    while (is_zero(v[row.pivot])) ++row.pivot;
    S inv = S(1) / v[row.pivot];
    for (int i = row.pivot; i < length_; ++i)
      if (!is_zero(v[i])) {
        row.index.push_back(i);
        row.value.push_back(v[i] * inv);
      }
    rows_.push_back(std::move(row));
    return true;
  }

 private:
  struct Row {
    int pivot;
    std::vector<int> index;
    std::vector<S> value;
  };
  int length_;
  std::vector<Row> rows_;
};

template <class S>
void append_flat(std::vector<S>& out, const Mat<S>& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back(m(i, j));
}

template <class S>
std::vector<S> flatten(const std::vector<Mat<S>>& blocks) {
  std::vector<S> out;
  for (const auto& b : blocks) append_flat(out, b);
  return out;
}

template <class S>
Vec<S> to_vec(const std::vector<S>& v) {
  Vec<S> out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i];
  return out;
}

// Columns as vectors; rows as coordinates.
template <class S>
Mat<S> columns(const std::vector<std::vector<S>>& vs, Eigen::Index length) {
  Mat<S> m(length, static_cast<Eigen::Index>(vs.size()));
  for (std::size_t j = 0; j < vs.size(); ++j)
    for (Eigen::Index i = 0; i < length; ++i) m(i, static_cast<Eigen::Index>(j)) = vs[j][i];
  return m;
}

// Indices of a maximal independent subset, chosen greedily in order.
template <class S>
std::vector<int> independent_subset(const std::vector<std::vector<S>>& vs, int length) {
  Echelon<S> e(length);
  std::vector<int> keep;
  for (std::size_t i = 0; i < vs.size(); ++i)
    if (e.insert(vs[i])) keep.push_back(static_cast<int>(i));
  return keep;
}

}  // namespace gradalg
