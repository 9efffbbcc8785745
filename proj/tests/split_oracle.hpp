#pragma once

#include "gradalg/split.hpp"

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

namespace gradalg::testing {

// Plain integer arithmetic mod p, sharing no code with the splitter.
struct IntModule {
  int p, d;
  std::vector<std::vector<int>> gens;  // row-major d x d

  std::vector<int> apply(const std::vector<int>& g, const std::vector<int>& v) const {
    std::vector<int> w(d, 0);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) w[i] = (w[i] + g[i * d + j] * v[j]) % p;
    return w;
  }

  int inv(int a) const {
    for (int x = 1; x < p; ++x)
      if (a * x % p == 1) return x;
    return 0;
  }

  // Rank of the span after inserting v into a reduced basis.
  bool insert(std::vector<std::vector<int>>& basis, std::vector<int> v) const {
    for (const auto& b : basis) {
      int piv = 0;
      while (b[piv] == 0) ++piv;
      if (v[piv] == 0) continue;
      int c = v[piv];
      for (int i = 0; i < d; ++i) v[i] = ((v[i] - c * b[i]) % p + p) % p;
    }
    int piv = 0;
    while (piv < d && v[piv] == 0) ++piv;
    if (piv == d) return false;
    int s = inv(v[piv]);
    for (auto& x : v) x = x * s % p;
    basis.push_back(v);
    return true;
  }

  int cyclic_dim(const std::vector<int>& v) const {
    std::vector<std::vector<int>> basis, queue{v};
    insert(basis, v);
    for (std::size_t k = 0; k < queue.size(); ++k)
      for (const auto& g : gens) {
        auto w = apply(g, queue[k]);
        if (insert(basis, w)) queue.push_back(w);
      }
    return static_cast<int>(basis.size());
  }

  bool reducible() const {
    std::vector<int> v(d, 0);
    for (long code = 1; code < std::lround(std::pow(p, d)); ++code) {
      long c = code;
      for (int i = 0; i < d; ++i, c /= p) v[i] = static_cast<int>(c % p);
      if (cyclic_dim(v) < d) return true;
    }
    return false;
  }

  // Number of d x d matrices commuting with every generator.
  long commutant_size() const {
    long count = 0;
    const long total = std::lround(std::pow(p, d * d));
    std::vector<int> x(d * d);
    for (long code = 0; code < total; ++code) {
      long c = code;
      for (int i = 0; i < d * d; ++i, c /= p) x[i] = static_cast<int>(c % p);
      bool ok = true;
      for (const auto& g : gens) {
        for (int i = 0; i < d && ok; ++i)
          for (int j = 0; j < d && ok; ++j) {
            int l = 0, r = 0;
            for (int k = 0; k < d; ++k) {
              l += x[i * d + k] * g[k * d + j];
              r += g[i * d + k] * x[k * d + j];
            }
            ok = (l - r) % p == 0;
          }
        if (!ok) break;
      }
      if (ok) ++count;
    }
    return count;
  }
};

inline std::vector<Mat<ModP>> to_mats(const IntModule& m, const PField& f) {
  std::vector<Mat<ModP>> out;
  for (const auto& g : m.gens) {
    Mat<ModP> a(m.d, m.d);
    for (int i = 0; i < m.d; ++i)
      for (int j = 0; j < m.d; ++j) a(i, j) = f.from_int(g[i * m.d + j]);
    out.push_back(a);
  }
  return out;
}

inline bool invariant(const std::vector<Mat<ModP>>& gens, const Mat<ModP>& s) {
  for (const auto& g : gens) {
    Mat<ModP> both(s.rows(), 2 * s.cols());
    both << s, g * s;
    if (rank<ModP>(both) != rank<ModP>(s)) return false;
  }
  return true;
}

struct SplitTally {
  int reducible = 0, absolute = 0, undecided = 0;
};

// Empty when split_block_module agrees with brute force, else a description.
inline std::string split_disagreement(const IntModule& m, SplitTally& tally, std::uint64_t seed) {
  PField f(m.p);
  auto gens = to_mats(m, f);
  std::ostringstream why;
  why << "p = " << m.p << ", d = " << m.d << ", gens = " << m.gens.size() << ": ";
  try {
    if (m.reducible()) {
      ++tally.reducible;
      auto r = split_block_module(gens, m.d, f, seed);
      if (r.irreducible) return why.str() + "reducible module reported irreducible";
      const auto c = r.subspace.cols();
      if (c == 0 || c >= m.d || rank<ModP>(r.subspace) != c || !invariant(gens, r.subspace))
        return why.str() + "returned subspace is not a proper invariant subspace";
    } else if (m.commutant_size() == m.p) {
      ++tally.absolute;
      auto r = split_block_module(gens, m.d, f, seed);
      if (!r.irreducible || r.algebra_rank != m.d * m.d) return why.str() + "absolutely irreducible module not certified";
    } else {
      ++tally.undecided;
      split_block_module(gens, m.d, f, seed);
      return why.str() + "irreducible but not absolutely irreducible, expected SplitUndecided";
    }
  } catch (const SplitUndecided&) {
    if (m.reducible() || m.commutant_size() == m.p) return why.str() + "unexpected SplitUndecided";
  }
  return {};
}

inline std::vector<IntModule> exhaustive_f2_modules() {
  std::vector<IntModule> out;
  // One generator in dimensions 1..3, two generators in dimensions 1..2.
  for (int d = 1; d <= 3; ++d) {
    const int n = d * d;
    for (int code = 0; code < (1 << n); ++code) {
      IntModule m{2, d, {std::vector<int>(n)}};
      for (int i = 0; i < n; ++i) m.gens[0][i] = (code >> i) & 1;
      out.push_back(m);
    }
  }
  for (int d = 1; d <= 2; ++d) {
    const int n = d * d;
    for (int code = 0; code < (1 << (2 * n)); ++code) {
      IntModule m{2, d, {std::vector<int>(n), std::vector<int>(n)}};
      for (int i = 0; i < 2 * n; ++i) m.gens[i / n][i % n] = (code >> i) & 1;
      out.push_back(m);
    }
  }
  return out;
}

inline std::vector<IntModule> random_f3_modules(int count, std::uint64_t seed) {
  std::vector<IntModule> out;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dim(1, 3), gens(1, 2), entry(0, 2), sparse(0, 3);
  for (int t = 0; t < count; ++t) {
    IntModule m{3, dim(rng), {}};
    const int c = gens(rng);
    const bool thin = sparse(rng) == 0;
    for (int g = 0; g < c; ++g) {
      std::vector<int> x(m.d * m.d);
      for (auto& e : x) e = thin && sparse(rng) != 0 ? 0 : entry(rng);
      m.gens.push_back(x);
    }
    out.push_back(m);
  }
  return out;
}

}  // namespace gradalg::testing
