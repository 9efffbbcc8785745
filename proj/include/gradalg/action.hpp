#pragma once

#include "gradalg/graded.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gradalg {

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class S>
struct Generator {
  std::string name;
  GradedMap<S> map;
  int degree() const { return map.degree(); }
};

// Generator indices in product order: {g, h} is g*h, so h acts first.
using Word = std::vector<int>;

// A graded module for the free algebra on the generators, stored on
// W^(N + margin). Blocks with source and target at most N are trusted.
template <class S>
class Action {
 public:
  Action(GradedSpace<S> space, int trusted, std::vector<Generator<S>> gens, bool unital, std::uint64_t seed = 0)
      : space_(std::move(space)), trusted_(trusted), gens_(std::move(gens)), unital_(unital), seed_(seed) {
    if (trusted_ < 0 || trusted_ > space_.top())
      throw ValidationError("trusted truncation must lie between 0 and the stored top degree");
    for (const auto& g : gens_)
      if (!(g.map.space() == space_)) throw ValidationError("generator '" + g.name + "' lives on another space");
  }

  const GradedSpace<S>& space() const { return space_; }
  const Field<S>& field() const { return space_.field(); }
  int trusted() const { return trusted_; }
  int margin() const { return space_.top() - trusted_; }
  int top() const { return space_.top(); }
  bool unital() const { return unital_; }
  std::uint64_t seed() const { return seed_; }
  void set_seed(std::uint64_t s) { seed_ = s; }

  int size() const { return static_cast<int>(gens_.size()); }
  const std::vector<Generator<S>>& generators() const { return gens_; }
  const Generator<S>& generator(int i) const { return gens_.at(i); }
  int find(const std::string& name) const {
    for (int i = 0; i < size(); ++i)
      if (gens_[i].name == name) return i;
    return -1;
  }

  int max_degree() const {
    int r = 0;
    for (const auto& g : gens_) r = std::max(r, std::abs(g.degree()));
    return r;
  }

  int word_degree(const Word& w) const {
    int d = 0;
    for (int i : w) d += gens_.at(i).degree();
    return d;
  }

  std::vector<std::string> word_names(const Word& w) const {
    std::vector<std::string> out;
    for (int i : w) out.push_back(gens_.at(i).name);
    return out;
  }

  Word parse_word(const std::vector<std::string>& names) const {
    Word w;
    for (const auto& n : names) {
      int i = find(n);
      if (i < 0) throw ValidationError("unknown generator '" + n + "' in word");
      w.push_back(i);
    }
    return w;
  }

 private:
  GradedSpace<S> space_;
  int trusted_;
  std::vector<Generator<S>> gens_;
  bool unital_;
  std::uint64_t seed_;
};

// Full composition of the word on the stored space. The empty word is the
// identity.
template <class S>
GradedMap<S> evaluate(const Action<S>& a, const Word& w) {
  GradedMap<S> r = GradedMap<S>::identity(a.space());
  for (auto it = w.rbegin(); it != w.rend(); ++it) r = compose(a.generator(*it).map, r);
  return r;
}

// The block of the word at one source, by following the single path.
template <class S>
Mat<S> evaluate_at(const Action<S>& a, const Word& w, int source) {
  const auto& sp = a.space();
  Mat<S> r = identity(a.field(), sp.dim(source));
  int deg = source;
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    const GradedMap<S>& g = a.generator(*it).map;
    int next = deg + g.degree();
    if (next < 0 || next > sp.top() || r.rows() == 0) return zeros<S>(sp.dim(source + a.word_degree(w)), sp.dim(source));
    r = multiply<S>(g.block_ref(deg), r);
    deg = next;
  }
  return r;
}

template <class S>
GradedMap<S> trusted_part(const Action<S>& a, const GradedMap<S>& f) {
  return restrict_to(f, a.trusted());
}

// Reduction of a rational action modulo p; denominators must be prime to p.
inline Action<ModP> reduce_mod(const Action<Rational>& a, const PField& f) {
  GradedSpace<ModP> sp(a.space().dims(), f);
  std::vector<Generator<ModP>> gens;
  for (const auto& g : a.generators()) {
    GradedMap<ModP> m(sp, g.degree());
    for (int n = 0; n <= sp.top(); ++n) {
      const Mat<Rational>& b = g.map.block_ref(n);
      Mat<ModP> r(b.rows(), b.cols());
      for (Eigen::Index i = 0; i < b.rows(); ++i)
        for (Eigen::Index j = 0; j < b.cols(); ++j) {
          if (denominator(b(i, j)) % f.characteristic() == 0)
            throw ValidationError("generator '" + g.name + "' has an entry with denominator divisible by " +
                                  std::to_string(f.characteristic()));
          r(i, j) = f.from_rational(b(i, j));
        }
      m.set_block(n, std::move(r));
    }
    gens.push_back({g.name, std::move(m)});
  }
  return Action<ModP>(sp, a.trusted(), std::move(gens), a.unital(), a.seed());
}

}  // namespace gradalg
