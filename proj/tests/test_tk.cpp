#include <doctest.h>

#include "gradalg/models.hpp"
#include "gradalg/tk.hpp"
#include "support.hpp"

using namespace gradalg;

namespace {

template <class S>
std::vector<Mat<S>> upper_triangular_basis(const Field<S>& f, int n) {
  std::vector<Mat<S>> out;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Mat<S> e = zeros<S>(n, n);
      e(i, j) = f.one();
      out.push_back(e);
    }
  return out;
}

template <class S>
Mat<S> element(const std::vector<Mat<S>>& basis, const Vec<S>& coords) {
  Mat<S> m = zeros<S>(basis[0].rows(), basis[0].cols());
  for (std::size_t i = 0; i < basis.size(); ++i) m += coords(static_cast<Eigen::Index>(i)) * basis[i];
  return m;
}

}  // namespace

TEST_CASE("T_k of the full model is the sum of End W(n)") {
  QField q;
  const std::vector<int> dims{1, 1, 2, 3, 5};
  auto a = model_full(q, dims);
  auto cl = closure(a, -4, 4);
  int expect = 0;
  for (int k = 0; k <= 4; ++k) {
    expect += dims[k] * dims[k];
    auto tk = compute_tk(a, k, &cl);
    CHECK(tk.algebra.dim() == expect);
    CHECK(tk.pi_rank == expect);
    CHECK(tk.pi_target_dim == expect);
    CHECK(radical(tk.algebra).cols() == 0);
    REQUIRE(tk.algebra.unit);
    // The unit really is one in T_k.
    for (int i = 0; i < tk.algebra.dim(); ++i) {
      Vec<Rational> e = Vec<Rational>::Zero(tk.algebra.dim());
      e(i) = q.one();
      CHECK(equal<Rational>(Mat<Rational>(tk.algebra.product(*tk.algebra.unit, e)), Mat<Rational>(e)));
    }
  }
}

TEST_CASE("radical of upper triangular matrices is the strictly upper part") {
  auto run = [](const auto& f) {
    using S = std::decay_t<decltype(f.zero())>;
    for (int n = 1; n <= 3; ++n) {
      auto basis = upper_triangular_basis(f, n);
      auto alg = matrix_algebra(basis, f);
      Mat<S> rad = radical(alg);
      CHECK(rad.cols() == n * (n - 1) / 2);
      for (Eigen::Index c = 0; c < rad.cols(); ++c) {
        Mat<S> x = element(basis, Vec<S>(rad.col(c)));
        Mat<S> power = identity(f, n);
        for (int i = 0; i < n; ++i) power = power * x;
        CHECK(all_zero(power));
        for (int i = 0; i < n; ++i) CHECK(is_zero(x(i, i)));
      }
      auto quot = quotient_algebra(alg, rad);
      CHECK(quot.dim() == n);
      CHECK(radical(quot).cols() == 0);
    }
  };
  run(QField{});
  run(PField(7));
}

TEST_CASE("trace form needs a large enough characteristic") {
  PField f2(2);
  auto alg = matrix_algebra(upper_triangular_basis(f2, 2), f2);
  CHECK_THROWS_AS(radical(alg), UnsupportedCharacteristic);
  PField f5(5);
  CHECK_NOTHROW(radical(matrix_algebra(upper_triangular_basis(f5, 2), f5)));
}

TEST_CASE("T_k of a reducible action can carry a radical") {
  // W(0) -> W(1) only: closure_0 is spanned by the identity and nothing
  // returns to W(0), so T_1 holds the two block idempotents.
  QField q;
  GradedSpace<Rational> sp({1, 1, 0}, q);
  GradedMap<Rational> up(sp, 1);
  up.set_block(0, Mat<Rational>::Constant(1, 1, q.one()));
  Action<Rational> a(sp, 1, {{"e", up}}, true);
  auto t1 = compute_tk(a, 1);
  CHECK(t1.algebra.dim() == 1);
  CHECK(radical(t1.algebra).cols() == 0);
  CHECK(t1.pi_rank == 1);
  CHECK(t1.pi_target_dim == 2);
  CHECK_THROWS_AS(check_rationality_conditions(a, 1), DOperatorMissing);
}

TEST_CASE("rationality conditions") {
  QField q;
  auto h = model_heisenberg(q, 4);
  auto rep = check_rationality_conditions(h, 2);
  CHECK(rep.ok());
  CHECK(rep.tk_dims == std::vector<int>{1, 2, 6});
  REQUIRE(rep.classes.size() == 1);
  CHECK(rep.classes[0].module_dim == 1);
  CHECK(rep.classes[0].lambda == q.zero());
  for (const auto& r : rep.returns) CHECK(r.return_rank > 0);

  auto full = model_full(q, {1, 2, 2});
  auto rf = check_rationality_conditions(full, 2);
  CHECK(rf.condition1());
  CHECK(rf.condition3());
  CHECK(rf.tk_dims == std::vector<int>{1, 5, 9});

  CHECK_THROWS_AS(check_rationality_conditions(h, 5), PreconditionFailed);
  CHECK_THROWS_AS(compute_tk(h, -1), PreconditionFailed);
}

TEST_CASE("two equal lowest weights violate condition 2") {
  // Two inequivalent modules both starting in degree 0 with d = 0 there.
  QField q;
  auto h = model_heisenberg(q, 2, 2);
  auto full = model_full(q, {1, 1, 1}, 2);
  auto sum = model_direct_sum(std::vector<Action<Rational>>{h, full}, {1, 1});
  auto rep = check_rationality_conditions(sum, 1);
  REQUIRE(rep.classes.size() == 2);
  CHECK_FALSE(rep.condition2());
  CHECK(rep.differences[0].integer);
}
