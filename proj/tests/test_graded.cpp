#include <doctest.h>

#include "support.hpp"

using namespace gradalg;
using gradalg::testing::random_map;
using gradalg::testing::random_tail;

namespace {

template <class S>
Mat<S> to_dense(const GradedMap<S>& f) {
  const auto& sp = f.space();
  Mat<S> d = zeros<S>(sp.total_dim(), sp.total_dim());
  for (int m = 0; m <= sp.top(); ++m) {
    int t = m + f.degree();
    if (t < 0 || t > sp.top()) continue;
    const auto& b = f.block_ref(m);
    d.block(sp.offset(t), sp.offset(m), b.rows(), b.cols()) = b;
  }
  return d;
}

}  // namespace

TEST_CASE("graded space bookkeeping") {
  QField q;
  GradedSpace<Rational> sp({1, 2, 0, 3}, q);
  CHECK(sp.top() == 3);
  CHECK(sp.total_dim() == 6);
  CHECK(sp.offset(3) == 3);
  CHECK(sp.dim(-1) == 0);
  CHECK(sp.dim(7) == 0);
  CHECK(sp.truncated(1).dims() == std::vector<int>{1, 2});
  GradedMap<Rational> g(sp, 1);
  CHECK_THROWS_AS(g.set_block(0, zeros<Rational>(1, 1)), std::invalid_argument);
  CHECK(g.block(3).rows() == 0);
}

TEST_CASE("composition is the dense product on the stored space") {
  QField q;
  std::mt19937_64 rng(4);
  GradedSpace<Rational> sp({1, 2, 2, 3, 1}, q);
  for (int t = 0; t < 50; ++t) {
    std::uniform_int_distribution<int> deg(-3, 3);
    auto f = random_map(sp, deg(rng), rng);
    auto g = random_map(sp, deg(rng), rng);
    auto h = random_map(sp, deg(rng), rng);
    CHECK(equal<Rational>(to_dense(compose(f, g)), Mat<Rational>(to_dense(f) * to_dense(g))));
    CHECK(compose(compose(f, g), h) == compose(f, compose(g, h)));
  }
}

TEST_CASE("degree operator grades homogeneous maps") {
  QField q;
  std::mt19937_64 rng(8);
  GradedSpace<Rational> sp({2, 1, 3, 2}, q);
  auto d = degree_operator(sp);
  for (int k = -3; k <= 3; ++k) {
    auto f = random_map(sp, k, rng);
    CHECK(compose(d, f) - compose(f, d) == Rational(k) * f);
  }
  GradedMap<Rational> sum(sp, 0);
  for (int n = 0; n <= sp.top(); ++n) sum += projection(sp, n);
  CHECK(sum == GradedMap<Rational>::identity(sp));
}

TEST_CASE("band radius, tails and agreement") {
  QField q;
  std::mt19937_64 rng(9);
  GradedSpace<Rational> sp({1, 1, 2, 2, 3}, q);
  Endo<Rational> a;
  a.emplace(-2, random_map(sp, -2, rng));
  a.emplace(1, random_map(sp, 1, rng));
  a.emplace(3, GradedMap<Rational>(sp, 3));
  CHECK(band_radius(a) == 2);
  auto t = random_tail(sp, 1, 2, rng);
  CHECK(in_amk(t, 2));
  auto f = random_map(sp, 1, rng);
  CHECK(agree_below(f, f + t, 2));
  CHECK(restrict_to(f, 2).space().top() == 2);
}

TEST_CASE("product precision is min(k - n, l) under perturbation") {
  PField f(7);
  std::mt19937_64 rng(17);
  int sharp = 0;
  for (int t = 0; t < 200; ++t) {
    std::uniform_int_distribution<int> deg(-2, 2), prec(0, 4), dim(1, 2);
    std::vector<int> dims;
    for (int i = 0; i < 8; ++i) dims.push_back(dim(rng));
    GradedSpace<ModP> sp(dims, f);
    const int m = deg(rng), n = deg(rng), k = prec(rng), l = prec(rng);
    auto x = random_map(sp, m, rng);
    auto y = random_map(sp, n, rng);
    ApproxElement<ModP> ax{m, k, x + random_tail(sp, m, k, rng)};
    ApproxElement<ModP> ay{n, l, y + random_tail(sp, n, l, rng)};
    auto p = precision_compose(ax, ay);
    REQUIRE(p.precision);
    CHECK(*p.precision == std::min(k - n, l));
    CHECK(consistent(p, compose(x, y)));
    if (!agree_below(p.value, compose(x, y), *p.precision + 1)) ++sharp;
  }
  // The rule is attained, not just safe.
  CHECK(sharp > 100);
}
