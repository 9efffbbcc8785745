#pragma once

#include "gradalg/linalg.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace gradalg {

// Coefficients from the constant term upward, no trailing zeros.
template <class S>
struct Poly {
  std::vector<S> c;

  Poly() = default;
  explicit Poly(std::vector<S> coeffs) : c(std::move(coeffs)) { trim(); }

  int degree() const { return static_cast<int>(c.size()) - 1; }
  bool is_zero_poly() const { return c.empty(); }
  const S& lead() const { return c.back(); }
  void trim() {
    while (!c.empty() && is_zero(c.back())) c.pop_back();
  }

  friend bool operator==(const Poly& a, const Poly& b) {
    if (a.c.size() != b.c.size()) return false;
    for (std::size_t i = 0; i < a.c.size(); ++i)
      if (a.c[i] != b.c[i]) return false;
    return true;
  }
};

template <class S>
Poly<S> poly_x(const Field<S>& f) {
  return Poly<S>({f.zero(), f.one()});
}

template <class S>
Poly<S> poly_const(const S& a) {
  return Poly<S>({a});
}

template <class S>
Poly<S> operator+(const Poly<S>& a, const Poly<S>& b) {
  std::vector<S> r(std::max(a.c.size(), b.c.size()), S(0));
  for (std::size_t i = 0; i < a.c.size(); ++i) r[i] += a.c[i];
  for (std::size_t i = 0; i < b.c.size(); ++i) r[i] += b.c[i];
  return Poly<S>(std::move(r));
}

template <class S>
Poly<S> operator-(const Poly<S>& a, const Poly<S>& b) {
  std::vector<S> r(std::max(a.c.size(), b.c.size()), S(0));
  for (std::size_t i = 0; i < a.c.size(); ++i) r[i] += a.c[i];
  for (std::size_t i = 0; i < b.c.size(); ++i) r[i] -= b.c[i];
  return Poly<S>(std::move(r));
}

template <class S>
Poly<S> operator*(const Poly<S>& a, const Poly<S>& b) {
  if (a.c.empty() || b.c.empty()) return {};
  std::vector<S> r(a.c.size() + b.c.size() - 1, S(0));
  for (std::size_t i = 0; i < a.c.size(); ++i)
    for (std::size_t j = 0; j < b.c.size(); ++j) r[i + j] += a.c[i] * b.c[j];
  return Poly<S>(std::move(r));
}

template <class S>
Poly<S> scale(const Poly<S>& a, const S& s) {
  std::vector<S> r = a.c;
  for (auto& x : r) x *= s;
  return Poly<S>(std::move(r));
}

template <class S>
std::pair<Poly<S>, Poly<S>> divmod(Poly<S> a, const Poly<S>& b) {
  if (b.is_zero_poly()) throw std::domain_error("polynomial division by zero");
  if (a.degree() < b.degree()) return {Poly<S>{}, a};
  std::vector<S> q(a.c.size() - b.c.size() + 1, S(0));
  S inv = S(1) / b.lead();
  for (int i = a.degree(); i >= b.degree(); --i) {
    if (is_zero(a.c[i])) continue;
    S f = a.c[i] * inv;
    q[i - b.degree()] = f;
    for (int j = 0; j <= b.degree(); ++j) sub_mul(a.c[i - b.degree() + j], f, b.c[j]);
  }
  a.trim();
  return {Poly<S>(std::move(q)), a};
}

template <class S>
Poly<S> operator%(const Poly<S>& a, const Poly<S>& b) {
  return divmod(a, b).second;
}

template <class S>
Poly<S> monic(const Poly<S>& a) {
  if (a.is_zero_poly()) return a;
  return scale(a, S(1) / a.lead());
}

template <class S>
Poly<S> gcd(Poly<S> a, Poly<S> b) {
  while (!b.is_zero_poly()) {
    Poly<S> r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a);
}

template <class S>
Poly<S> derivative(const Poly<S>& a, const Field<S>& f) {
  if (a.c.size() <= 1) return {};
  std::vector<S> r;
  for (std::size_t i = 1; i < a.c.size(); ++i) r.push_back(a.c[i] * f.from_int(static_cast<long long>(i)));
  return Poly<S>(std::move(r));
}

template <class S>
Poly<S> mulmod(const Poly<S>& a, const Poly<S>& b, const Poly<S>& m) {
  return (a * b) % m;
}

template <class S>
Poly<S> powmod(Poly<S> base, Integer e, const Poly<S>& m, const Field<S>& f) {
  Poly<S> r = poly_const(f.one()) % m;
  base = base % m;
  while (e > 0) {
    if (bit_test(e, 0)) r = mulmod(r, base, m);
    e >>= 1;
    if (e > 0) base = mulmod(base, base, m);
  }
  return r;
}

template <class S>
Mat<S> poly_at(const Poly<S>& p, const Mat<S>& a) {
  Mat<S> r = zeros<S>(a.rows(), a.cols());
  for (int i = p.degree(); i >= 0; --i) {
    r = r * a;
    for (Eigen::Index j = 0; j < a.rows(); ++j) r(j, j) += p.c[i];
  }
  return r;
}

template <class S>
std::string format_poly(const Poly<S>& p, const Field<S>& f, const std::string& var = "t") {
  if (p.is_zero_poly()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = p.degree(); i >= 0; --i) {
    if (is_zero(p.c[i])) continue;
    std::string coeff = f.format(p.c[i]);
    bool neg = !coeff.empty() && coeff[0] == '-';
    if (neg) coeff = coeff.substr(1);
    if (!first) os << (neg ? " - " : " + ");
    else if (neg) os << "-";
    bool unit = coeff == "1";
    if (i == 0 || !unit) os << coeff;
    if (i > 0) os << var;
    if (i > 1) os << "^" << i;
    first = false;
  }
  return os.str();
}

// Characteristic polynomial det(tI - a) via reduction to Hessenberg form.
template <class S>
Poly<S> charpoly(Mat<S> h, const Field<S>& f) {
  const Eigen::Index n = h.rows();
  for (Eigen::Index c = 0; c + 2 < n; ++c) {
    Eigen::Index i = c + 1;
    while (i < n && is_zero(h(i, c))) ++i;
    if (i == n) continue;
    if (i != c + 1) {
      h.row(i).swap(h.row(c + 1));
      h.col(i).swap(h.col(c + 1));
    }
    S inv = S(1) / h(c + 1, c);
    for (Eigen::Index r = c + 2; r < n; ++r) {
      if (is_zero(h(r, c))) continue;
      S u = h(r, c) * inv;
      for (Eigen::Index k = 0; k < n; ++k) sub_mul(h(r, k), u, h(c + 1, k));
      for (Eigen::Index k = 0; k < n; ++k) h(k, c + 1) += u * h(k, r);
    }
  }
  std::vector<Poly<S>> p{poly_const(f.one())};
  Poly<S> x = poly_x(f);
  for (Eigen::Index m = 1; m <= n; ++m) {
    Poly<S> next = (x - poly_const(h(m - 1, m - 1))) * p[m - 1];
    S t = f.one();
    for (Eigen::Index i = m - 1; i >= 1; --i) {
      t *= h(i, i - 1);
      if (is_zero(t)) break;
      next = next - scale(p[i - 1], t * h(i - 1, m - 1));
    }
    p.push_back(std::move(next));
  }
  return p.back();
}

template <class S>
struct Factor {
  Poly<S> poly;
  bool irreducible;
};

namespace detail {

inline std::vector<Integer> divisors(Integer n) {
  if (n < 0) n = -n;
  std::vector<std::pair<Integer, int>> primes;
  Integer m = n;
  for (Integer d = 2; d * d <= m && d < 1000000; ++d) {
    int e = 0;
    while (m % d == 0) {
      m /= d;
      ++e;
    }
    if (e) primes.emplace_back(d, e);
  }
  if (m > 1) primes.emplace_back(m, 1);
  std::vector<Integer> out{1};
  for (const auto& [p, e] : primes) {
    std::size_t sz = out.size();
    Integer pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < sz; ++i) out.push_back(out[i] * pk);
    }
    if (out.size() > 20000) break;
  }
  return out;
}

inline Poly<ModP> pth_root(const Poly<ModP>& a, std::uint32_t p) {
  std::vector<ModP> r;
  for (std::size_t i = 0; i < a.c.size(); i += p) r.push_back(a.c[i]);
  return Poly<ModP>(std::move(r));
}

// Squarefree pieces whose irreducible factors are exactly those of a.
inline void collect_squarefree(const Poly<ModP>& a, const Field<ModP>& f, std::vector<Poly<ModP>>& out) {
  if (a.degree() <= 0) return;
  Poly<ModP> da = derivative(a, f);
  if (da.is_zero_poly()) {
    collect_squarefree(pth_root(a, f.characteristic()), f, out);
    return;
  }
  Poly<ModP> g = gcd(a, da);
  out.push_back(monic(divmod(a, g).first));
  collect_squarefree(g, f, out);
}

inline std::vector<Poly<ModP>> equal_degree(const Poly<ModP>& g, int d, const Field<ModP>& f, std::mt19937_64& rng) {
  if (g.degree() == d) return {monic(g)};
  const std::uint32_t p = f.characteristic();
  Integer pd = 1;
  for (int i = 0; i < d; ++i) pd *= p;
  for (;;) {
    std::vector<ModP> rc;
    for (int i = 0; i < g.degree(); ++i) rc.push_back(f.random(rng));
    Poly<ModP> a(std::move(rc));
    if (a.degree() <= 0) continue;
    Poly<ModP> b;
    if (p == 2) {
      Poly<ModP> t = a, sq = a;
      for (int i = 1; i < d; ++i) {
        sq = mulmod(sq, sq, g);
        t = t + sq;
      }
      b = t;
    } else {
      b = powmod(a, (pd - 1) / 2, g, f) - poly_const(f.one());
    }
    Poly<ModP> h = gcd(g, b);
    if (h.degree() > 0 && h.degree() < g.degree()) {
      auto left = equal_degree(h, d, f, rng);
      auto right = equal_degree(divmod(g, h).first, d, f, rng);
      left.insert(left.end(), right.begin(), right.end());
      return left;
    }
  }
}

}  // namespace detail

inline bool poly_less(const Poly<ModP>& a, const Poly<ModP>& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  for (int i = a.degree(); i >= 0; --i)
    if (a.c[i].value() != b.c[i].value()) return a.c[i].value() < b.c[i].value();
  return false;
}

// Distinct irreducible factors, by degree then coefficients.
inline std::vector<Factor<ModP>> irreducible_factors(const Poly<ModP>& a, const Field<ModP>& f) {
  std::vector<Poly<ModP>> parts;
  detail::collect_squarefree(monic(a), f, parts);
  std::mt19937_64 rng(0x5eed);
  std::vector<Poly<ModP>> out;
  Integer p = f.characteristic();
  for (Poly<ModP> g : parts) {
    Poly<ModP> x = poly_x(f), h = x;
    for (int d = 1; g.degree() > 0; ++d) {
      if (2 * d > g.degree()) {
        out.push_back(monic(g));
        break;
      }
      h = powmod(h, p, g, f);
      Poly<ModP> q = gcd(g, h - x);
      if (q.degree() > 0) {
        auto split = detail::equal_degree(q, d, f, rng);
        out.insert(out.end(), split.begin(), split.end());
        g = divmod(g, q).first;
        h = h % g;
      }
    }
  }
  std::sort(out.begin(), out.end(), poly_less);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  std::vector<Factor<ModP>> r;
  for (auto& g : out) r.push_back({std::move(g), true});
  return r;
}

// Over Q: linear factors from rational roots, then the remaining squarefree
// cofactor, which is known irreducible only when its degree is at most 3.
inline std::vector<Factor<Rational>> irreducible_factors(const Poly<Rational>& a, const Field<Rational>& f) {
  Poly<Rational> g = monic(a);
  Poly<Rational> dg = derivative(g, f);
  if (!dg.is_zero_poly()) g = monic(divmod(g, gcd(g, dg)).first);
  std::vector<Factor<Rational>> out;
  Poly<Rational> x = poly_x(f);
  if (g.degree() >= 1 && is_zero(g.c[0])) {
    out.push_back({x, true});
    g = divmod(g, x).first;
  }
  if (g.degree() >= 1) {
    Integer l = 1;
    for (const auto& c : g.c) l = lcm(l, denominator(c));
    std::vector<Integer> ic;
    for (const auto& c : g.c) ic.push_back(numerator(c * Rational(l)));
    std::vector<Rational> roots;
    for (const auto& pn : detail::divisors(ic.front()))
      for (const auto& qd : detail::divisors(ic.back()))
        for (int sgn : {1, -1}) {
          Rational r(Integer(sgn) * pn, qd);
          Rational v = 0;
          for (int i = g.degree(); i >= 0; --i) v = v * r + g.c[i];
          if (v == 0 && std::find(roots.begin(), roots.end(), r) == roots.end()) roots.push_back(r);
        }
    std::sort(roots.begin(), roots.end());
    for (const auto& r : roots) {
      Poly<Rational> lin({-r, Rational(1)});
      out.push_back({lin, true});
      g = divmod(g, lin).first;
    }
  }
  if (g.degree() >= 1) out.push_back({g, g.degree() <= 3});
  std::stable_sort(out.begin(), out.end(), [](const auto& u, const auto& v) { return u.poly.degree() < v.poly.degree(); });
  return out;
}

}  // namespace gradalg
