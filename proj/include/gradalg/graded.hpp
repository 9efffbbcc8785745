#pragma once

#include "gradalg/linalg.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

namespace gradalg {

// W^(T) = W(0) + ... + W(T). Degrees outside [0, T] have dimension 0.
template <class S>
class GradedSpace {
 public:
  GradedSpace(std::vector<int> dims, Field<S> field) : dims_(std::move(dims)), field_(std::move(field)) {
    if (dims_.empty()) throw std::invalid_argument("graded space needs at least degree 0");
    for (int d : dims_)
      if (d < 0) throw std::invalid_argument("negative graded dimension");
  }

  int top() const { return static_cast<int>(dims_.size()) - 1; }
  int dim(int n) const { return n < 0 || n > top() ? 0 : dims_[n]; }
  const std::vector<int>& dims() const { return dims_; }
  int total_dim() const { return std::accumulate(dims_.begin(), dims_.end(), 0); }
  int offset(int n) const { return std::accumulate(dims_.begin(), dims_.begin() + n, 0); }
  const Field<S>& field() const { return field_; }

  GradedSpace truncated(int t) const {
    return GradedSpace(std::vector<int>(dims_.begin(), dims_.begin() + std::min(t, top()) + 1), field_);
  }

  friend bool operator==(const GradedSpace& a, const GradedSpace& b) {
    return a.dims_ == b.dims_ && a.field_ == b.field_;
  }

 private:
  std::vector<int> dims_;
  Field<S> field_;
};

// Homogeneous map of degree k: one block W(m) -> W(m+k) per source m.
template <class S>
class GradedMap {
 public:
  GradedMap(GradedSpace<S> space, int degree) : space_(std::move(space)), degree_(degree) {
    blocks_.reserve(space_.top() + 1);
    for (int m = 0; m <= space_.top(); ++m)
      blocks_.push_back(zeros<S>(space_.dim(m + degree_), space_.dim(m)));
  }

  static GradedMap identity(const GradedSpace<S>& space) {
    GradedMap f(space, 0);
    for (int m = 0; m <= space.top(); ++m) f.blocks_[m] = gradalg::identity(space.field(), space.dim(m));
    return f;
  }

  const GradedSpace<S>& space() const { return space_; }
  int degree() const { return degree_; }
  int target(int source) const { return source + degree_; }

  // Sources outside [0, T] yield an empty block.
  Mat<S> block(int source) const {
    if (source < 0 || source > space_.top()) return zeros<S>(space_.dim(source + degree_), 0);
    return blocks_[source];
  }
  const Mat<S>& block_ref(int source) const { return blocks_.at(source); }
  void set_block(int source, Mat<S> b) {
    if (b.rows() != space_.dim(source + degree_) || b.cols() != space_.dim(source))
      throw std::invalid_argument("block shape does not match the graded space");
    blocks_.at(source) = std::move(b);
  }

  bool is_zero() const {
    return std::all_of(blocks_.begin(), blocks_.end(), [](const Mat<S>& b) { return all_zero(b); });
  }

  GradedMap& operator+=(const GradedMap& o) {
    check_same(o);
    for (std::size_t m = 0; m < blocks_.size(); ++m) blocks_[m] += o.blocks_[m];
    return *this;
  }
  GradedMap& operator-=(const GradedMap& o) {
    check_same(o);
    for (std::size_t m = 0; m < blocks_.size(); ++m) blocks_[m] -= o.blocks_[m];
    return *this;
  }
  GradedMap& operator*=(const S& c) {
    for (auto& b : blocks_) b *= c;
    return *this;
  }

  friend GradedMap operator+(GradedMap a, const GradedMap& b) { return a += b; }
  friend GradedMap operator-(GradedMap a, const GradedMap& b) { return a -= b; }
  friend GradedMap operator*(const S& c, GradedMap a) { return a *= c; }
  friend GradedMap operator-(GradedMap a) { return a *= S(-1); }

  friend bool operator==(const GradedMap& a, const GradedMap& b) {
    if (!(a.space_ == b.space_)) return false;
    if (a.degree_ != b.degree_) return a.is_zero() && b.is_zero();
    for (std::size_t m = 0; m < a.blocks_.size(); ++m)
      if (!equal(a.blocks_[m], b.blocks_[m])) return false;
    return true;
  }

  // Block entries, source-major, each block row-major.
  std::vector<S> flat() const {
    std::vector<S> out;
    for (const auto& b : blocks_) append_flat(out, b);
    return out;
  }

 private:
  void check_same(const GradedMap& o) const {
    if (!(space_ == o.space_) || degree_ != o.degree_)
      throw std::invalid_argument("graded maps differ in space or degree");
  }

  GradedSpace<S> space_;
  int degree_;
  std::vector<Mat<S>> blocks_;
};

// Composition f o g on the stored space; paths leaving [0, T] are dropped.
template <class S>
GradedMap<S> compose(const GradedMap<S>& f, const GradedMap<S>& g) {
  if (!(f.space() == g.space())) throw std::invalid_argument("compose: different spaces");
  GradedMap<S> h(f.space(), f.degree() + g.degree());
  const int top = f.space().top();
  for (int m = 0; m <= top; ++m) {
    int mid = m + g.degree();
    if (mid < 0 || mid > top || h.space().dim(m + h.degree()) == 0) continue;
    if (all_zero(g.block_ref(m)) || all_zero(f.block_ref(mid))) continue;
    h.set_block(m, multiply<S>(f.block_ref(mid), g.block_ref(m)));
  }
  return h;
}

template <class S>
GradedMap<S> operator*(const GradedMap<S>& f, const GradedMap<S>& g) {
  return compose(f, g);
}

template <class S>
GradedMap<S> linear_combine(const std::vector<S>& coeffs, const std::vector<GradedMap<S>>& maps) {
  if (maps.empty() || coeffs.size() != maps.size()) throw std::invalid_argument("linear_combine: size mismatch");
  GradedMap<S> out(maps[0].space(), maps[0].degree());
  for (std::size_t i = 0; i < maps.size(); ++i)
    if (!is_zero(coeffs[i])) out += coeffs[i] * maps[i];
  return out;
}

// p_n: identity on W(n), zero elsewhere.
template <class S>
GradedMap<S> projection(const GradedSpace<S>& space, int n) {
  GradedMap<S> p(space, 0);
  if (n >= 0 && n <= space.top()) p.set_block(n, identity(space.field(), space.dim(n)));
  return p;
}

// d = sum_n n p_n.
template <class S>
GradedMap<S> degree_operator(const GradedSpace<S>& space) {
  GradedMap<S> d(space, 0);
  for (int n = 0; n <= space.top(); ++n) {
    Mat<S> b = identity(space.field(), space.dim(n));
    b *= space.field().from_int(n);
    d.set_block(n, std::move(b));
  }
  return d;
}

// Restriction to W^(n): blocks with source and target at most n.
template <class S>
GradedMap<S> restrict_to(const GradedMap<S>& f, int n) {
  GradedSpace<S> sub = f.space().truncated(n);
  GradedMap<S> r(sub, f.degree());
  for (int m = 0; m <= sub.top(); ++m)
    if (m + f.degree() >= 0 && m + f.degree() <= sub.top()) r.set_block(m, f.block_ref(m));
  return r;
}

// a = a_0 + ... over degrees; components stored only when present.
template <class S>
using Endo = std::map<int, GradedMap<S>>;

template <class S>
int band_radius(const Endo<S>& a) {
  int r = 0;
  for (const auto& [k, f] : a)
    if (!f.is_zero()) r = std::max(r, std::abs(k));
  return r;
}

// True iff f kills W^(k), i.e. every block at a source <= k is zero.
template <class S>
bool in_amk(const GradedMap<S>& f, int k) {
  for (int m = 0; m <= std::min(k, f.space().top()); ++m)
    if (!all_zero(f.block_ref(m))) return false;
  return true;
}

// Blocks at sources <= k agree.
template <class S>
bool agree_below(const GradedMap<S>& f, const GradedMap<S>& g, int k) {
  if (f.degree() != g.degree()) return in_amk(f, k) && in_amk(g, k);
  for (int m = 0; m <= std::min(k, f.space().top()); ++m)
    if (!equal(f.block_ref(m), g.block_ref(m))) return false;
  return true;
}

// Element of A_m known modulo A_{m,k}; precision nullopt means exact.
template <class S>
struct ApproxElement {
  int degree;
  std::optional<int> precision;
  GradedMap<S> value;
};

inline std::optional<int> compose_precision(int deg_y, std::optional<int> px, std::optional<int> py) {
  std::optional<int> shifted = px ? std::optional<int>(*px - deg_y) : std::nullopt;
  if (!shifted) return py;
  if (!py) return shifted;
  return std::min(*shifted, *py);
}

template <class S>
ApproxElement<S> precision_compose(const ApproxElement<S>& x, const ApproxElement<S>& y) {
  return {x.degree + y.degree, compose_precision(y.degree, x.precision, y.precision), compose(x.value, y.value)};
}

// Two approximations are compatible when they agree on W^(min precision).
template <class S>
bool consistent(const ApproxElement<S>& x, const GradedMap<S>& exact) {
  if (!x.precision) return x.value == exact;
  return agree_below(x.value, exact, *x.precision);
}

}  // namespace gradalg
