#include <doctest.h>

#include "gradalg/poly.hpp"
#include "support.hpp"

#include <functional>

using namespace gradalg;
using gradalg::testing::cofactor_det;
using gradalg::testing::random_matrix;
using gradalg::testing::random_rank;

namespace {

// Largest k with a nonzero k x k minor.
template <class S>
int minor_rank(const Mat<S>& a, const Field<S>& f) {
  const int r = static_cast<int>(a.rows()), c = static_cast<int>(a.cols());
  for (int k = std::min(r, c); k > 0; --k) {
    std::vector<int> rows(k), cols(k);
    std::function<bool(int, int, int, int)> pick = [&](int ri, int rs, int ci, int cs) -> bool {
      if (ri < k) {
        for (int i = rs; i < r; ++i) {
          rows[ri] = i;
          if (pick(ri + 1, i + 1, ci, cs)) return true;
        }
        return false;
      }
      if (ci < k) {
        for (int j = cs; j < c; ++j) {
          cols[ci] = j;
          if (pick(ri, rs, ci + 1, j + 1)) return true;
        }
        return false;
      }
      Mat<S> m(k, k);
      for (int x = 0; x < k; ++x)
        for (int y = 0; y < k; ++y) m(x, y) = a(rows[x], cols[y]);
      return !is_zero(cofactor_det(m, f));
    };
    if (pick(0, 0, 0, 0)) return k;
  }
  return 0;
}

template <class S>
S horner(const Poly<S>& p, const S& x, const Field<S>& f) {
  S v = f.zero();
  for (int i = p.degree(); i >= 0; --i) v = v * x + p.c[i];
  return v;
}

template <class S>
void elimination_properties(const Field<S>& f, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (int t = 0; t < 60; ++t) {
    std::uniform_int_distribution<int> dim(0, 4);
    const int r = dim(rng), c = dim(rng), k = dim(rng);
    Mat<S> a = random_rank(f, r, c, std::min({r, c, k}), rng);
    const int rk = rank<S>(a);
    CHECK(rk == minor_rank(a, f));
    Mat<S> n = nullspace<S>(a, f);
    CHECK(n.cols() == c - rk);
    CHECK(all_zero<S>(multiply<S>(a, n)));
    CHECK(rank<S>(n) == n.cols());
    Mat<S> b = random_matrix(f, c, 2, rng);
    CHECK(equal<S>(multiply<S>(a, b), Mat<S>(a * b)));
    Vec<S> rhs = a * Vec<S>(random_matrix(f, c, 1, rng));
    auto x = solve<S>(a, rhs);
    REQUIRE(x);
    CHECK(equal<S>(Mat<S>(a * *x), Mat<S>(rhs)));
    Echelon<S> e(r);
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      Vec<S> col = a.col(j);
      e.insert(std::vector<S>(col.data(), col.data() + col.size()));
    }
    CHECK(e.rank() == rk);
    if (c > 1) {
      Mat<S> swapped = a;
      swapped.col(0).swap(swapped.col(c - 1));
      CHECK(equal<S>(span_reduce<S>(a), span_reduce<S>(swapped)));
    }
  }
  for (int t = 0; t < 40; ++t) {
    std::uniform_int_distribution<int> dim(1, 4);
    const int n = dim(rng);
    Mat<S> a = random_matrix(f, n, n, rng, 2);
    auto inv = inverse<S>(a, f);
    CHECK(inv.has_value() == !is_zero(cofactor_det(a, f)));
    if (inv) CHECK(equal<S>(Mat<S>(a * *inv), identity(f, n)));
  }
}

}  // namespace

TEST_CASE("rational scalars parse canonically and round-trip") {
  QField q;
  CHECK(q.parse("-3") == Rational(-3));
  CHECK(q.parse("7/4") == Rational(7) / 4);
  CHECK(q.format(q.parse("-12/5")) == "-12/5");
  for (const char* bad : {"", "2/4", "1/0", "1/-2", "x", "1.5", "3/", "/3"}) CHECK_THROWS_AS(q.parse(bad), ParseError);
  CHECK(q.is_integer(Rational(6) / 3));
  CHECK_FALSE(q.is_integer(Rational(1) / 3));
}

TEST_CASE("prime field arithmetic") {
  PField f(7);
  ModP a = f.from_int(3), b = f.from_int(5);
  CHECK((a + b) == f.from_int(1));
  CHECK((a * b) == f.from_int(1));
  CHECK((a / b) * b == a);
  CHECK(f.from_int(-1) == f.from_int(6));
  CHECK(f.from_rational(Rational(1) / 2) == f.from_int(4));
  CHECK(f.parse("6") == f.from_int(6));
  CHECK_THROWS_AS(f.parse("7"), ParseError);
  CHECK_THROWS_AS(f.parse("-1"), ParseError);
  CHECK_THROWS_AS(f.from_int(0).inverse(), std::domain_error);
  CHECK_THROWS_AS(ModP(1, 5) + ModP(1, 7), FieldMismatch);
  CHECK(f.format(f.from_int(10)) == "3");
  CHECK(is_prime(2));
  CHECK(is_prime(101));
  CHECK_FALSE(is_prime(1));
  CHECK_FALSE(is_prime(91));
}

TEST_CASE("elimination agrees with minor and cofactor oracles over Q") { elimination_properties(QField{}, 11); }

TEST_CASE("elimination agrees with minor and cofactor oracles over F_5") { elimination_properties(PField(5), 12); }

TEST_CASE("elimination over F_2") { elimination_properties(PField(2), 13); }

TEST_CASE("products of elementary blocks fill Hom(U1, U3)") {
  QField q;
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> dim(1, 4);
  for (int t = 0; t < 20; ++t) {
    const int d1 = dim(rng), d2 = dim(rng), d3 = dim(rng);
    Echelon<Rational> e(d1 * d3);
    for (int i = 0; i < d3; ++i)
      for (int j = 0; j < d2; ++j)
        for (int k = 0; k < d2; ++k)
          for (int l = 0; l < d1; ++l) {
            Mat<Rational> x = zeros<Rational>(d3, d2), y = zeros<Rational>(d2, d1);
            x(i, j) = 1;
            y(k, l) = 1;
            std::vector<Rational> v;
            append_flat<Rational>(v, Mat<Rational>(x * y));
            e.insert(v);
          }
    CHECK(e.rank() == d1 * d3);
  }
}

TEST_CASE("characteristic polynomial matches det(cI - A)") {
  std::mt19937_64 rng(3);
  QField q;
  PField f(11);
  for (int t = 0; t < 25; ++t) {
    const int n = 1 + t % 4;
    Mat<Rational> a = random_matrix(q, n, n, rng);
    auto cp = charpoly<Rational>(a, q);
    CHECK(cp.degree() == n);
    CHECK(all_zero<Rational>(poly_at(cp, a)));
    for (int c = -2; c <= 2; ++c)
      CHECK(horner(cp, Rational(c), q) == cofactor_det(Mat<Rational>(Rational(c) * identity(q, n) - a), q));
    Mat<ModP> b = random_matrix(f, n, n, rng);
    auto cb = charpoly<ModP>(b, f);
    CHECK(all_zero<ModP>(poly_at(cb, b)));
    CHECK(horner(cb, f.from_int(3), f) == cofactor_det(Mat<ModP>(f.from_int(3) * identity(f, n) - b), f));
  }
}

TEST_CASE("factors over F_p divide and are irreducible") {
  std::mt19937_64 rng(21);
  for (std::uint32_t p : {2u, 3u, 5u}) {
    PField f(p);
    for (int t = 0; t < 40; ++t) {
      const int n = 1 + t % 6;
      std::vector<ModP> c;
      for (int i = 0; i < n; ++i) c.push_back(f.random(rng));
      c.push_back(f.one());
      Poly<ModP> g(c);
      auto factors = irreducible_factors(g, f);
      Poly<ModP> prod({f.one()});
      for (const auto& fac : factors) {
        CHECK(fac.irreducible);
        CHECK((g % fac.poly).is_zero_poly());
        // Exhaustive: no monic divisor of degree 1 .. deg/2.
        const int d = fac.poly.degree();
        for (int e = 1; 2 * e <= d; ++e) {
          std::vector<ModP> q(e + 1, f.zero());
          q[e] = f.one();
          std::function<void(int)> run = [&](int i) {
            if (i == e) {
              CHECK_FALSE((fac.poly % Poly<ModP>(q)).is_zero_poly());
              return;
            }
            for (std::uint32_t v = 0; v < p; ++v) {
              q[i] = f.from_int(v);
              run(i + 1);
            }
          };
          run(0);
        }
        prod = prod * fac.poly;
      }
      // Every root of g is a root of some factor.
      for (std::uint32_t x = 0; x < p; ++x)
        if (is_zero(horner(g, f.from_int(x), f))) CHECK(is_zero(horner(prod, f.from_int(x), f)));
    }
  }
}

TEST_CASE("rational factoring finds rational roots and flags the rest") {
  QField q;
  Poly<Rational> x = poly_x(q);
  Poly<Rational> g = (x - poly_const(Rational(1, 2))) * (x + poly_const(Rational(3))) *
                     (x * x + poly_const(Rational(1)));
  auto fs = irreducible_factors(g, q);
  REQUIRE(fs.size() == 3);
  CHECK(fs[0].poly.degree() == 1);
  CHECK(fs[1].poly.degree() == 1);
  CHECK(fs[2].poly.degree() == 2);
  CHECK(fs[2].irreducible);
  CHECK(format_poly(fs[2].poly, q) == "t^2 + 1");
}
