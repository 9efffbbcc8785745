#include <doctest.h>

#include "gradalg/burnside.hpp"
#include "gradalg/models.hpp"
#include "support.hpp"

using namespace gradalg;
using gradalg::testing::random_map;
using gradalg::testing::random_matrix;

namespace {

// Span of all words of length <= len, restricted to W^(N), per degree.
template <class S>
std::map<int, Echelon<S>> word_span(const Action<S>& a, int len, int dmin, int dmax) {
  const int N = a.trusted();
  GradedSpace<S> trusted = a.space().truncated(N);
  std::map<int, Echelon<S>> out;
  for (int d = dmin; d <= dmax; ++d) {
    int l = 0;
    for (int s = 0; s <= N; ++s) l += trusted.dim(s) * trusted.dim(s + d);
    out.emplace(d, Echelon<S>(l));
  }
  std::vector<Word> layer{{}};
  for (int step = 0; step <= len; ++step) {
    std::vector<Word> next;
    for (const auto& w : layer) {
      const int d = a.word_degree(w);
      if (d >= dmin && d <= dmax && out.at(d).length() > 0)
        out.at(d).insert(restrict_to(evaluate(a, w), N).flat());
      if (step == len) continue;
      for (int g = 0; g < a.size(); ++g) {
        Word v = w;
        v.push_back(g);
        next.push_back(std::move(v));
      }
    }
    layer = std::move(next);
  }
  return out;
}

template <class S>
GradedMap<S> random_trusted_target(const Action<S>& a, int n, std::mt19937_64& rng) {
  GradedMap<S> t = random_map(a.space(), n, rng);
  for (int m = 0; m <= a.top(); ++m)
    if (m > a.trusted() || m + n > a.trusted())
      if (m + n >= 0 && m + n <= a.top()) t.set_block(m, zeros<S>(a.space().dim(m + n), a.space().dim(m)));
  return t;
}

}  // namespace

TEST_CASE("closure matches brute-force word enumeration") {
  QField q;
  const std::vector<std::pair<Action<Rational>, int>> cases{{model_full(q, {1, 2, 2}), 4},
                                                            {model_heisenberg(q, 2), 6}};
  for (const auto& [a, len] : cases) {
    const int N = a.trusted();
    auto cl = closure(a, -N, N);
    auto oracle = word_span(a, len, -N, N);
    for (int d = -N; d <= N; ++d) {
      CHECK(cl.at(d).dim() == oracle.at(d).rank());
      for (const auto& m : cl.at(d).maps) CHECK(oracle.at(d).contains(m.flat()));
    }
  }
}

TEST_CASE("closure of the full model is everything at truncation") {
  QField q;
  const std::vector<int> dims{1, 2, 2, 3};
  auto a = model_full(q, dims);
  auto cl = closure(a, -3, 3);
  for (int d = -3; d <= 3; ++d) {
    int expect = 0;
    for (int s = 0; s < 4; ++s)
      if (s + d >= 0 && s + d < 4) expect += dims[s] * dims[s + d];
    CHECK(cl.at(d).dim() == expect);
  }
}

TEST_CASE("irreducibility of the reference models") {
  QField q;
  CHECK(check_irreducible(model_full(q, {1, 2, 2, 3})));
  CHECK(check_irreducible(model_heisenberg(q, 4)));
  auto two = model_direct_sum(std::vector<Action<Rational>>{model_heisenberg(q, 3)}, {2});
  auto rep = irreducibility_report(two);
  CHECK_FALSE(rep.irreducible());
  CHECK(rep.annihilator_zero);
  // The Fock module of the Sugawara Virasoro action has singular vectors.
  CHECK_FALSE(check_irreducible(model_virasoro_sugawara(q, 4)));
}

TEST_CASE("annihilator of a non-unital action") {
  QField q;
  GradedSpace<Rational> sp({2, 1}, q);
  GradedMap<Rational> g(sp, 1);
  Mat<Rational> b(1, 2);
  b << 1, 0;
  g.set_block(0, b);
  Action<Rational> a(sp, 1, {{"g", g}}, false);
  auto ann = annihilator_in_module(a);
  CHECK(ann.dims() == std::vector<int>{1, 1});
  CHECK_FALSE(check_irreducible(a));
}

TEST_CASE("block criteria hold on irreducible models") {
  QField q;
  for (const auto& a : {model_full(q, {1, 2, 2, 3}), model_heisenberg(q, 4)})
    for (int k = 0; k <= a.trusted(); ++k) {
      auto c = check_block_criteria(a, k);
      CHECK(c.ok());
      CHECK(c.top.rank == a.space().dim(k) * a.space().dim(k));
    }
  CHECK_THROWS_AS(check_block_criteria(model_heisenberg(q, 2), 3), PreconditionFailed);
}

TEST_CASE("burnside certificates are complete and verify") {
  QField q;
  std::mt19937_64 rng(31);
  auto a = model_heisenberg(q, 4, 4);
  for (int n = -2; n <= 2; ++n)
    for (int t = 0; t < 3; ++t) {
      const int K = 4 - std::max(n, 0);
      auto target = random_trusted_target(a, n, rng);
      auto cert = burnside_solve(a, target, K);
      CHECK(cert.verified);
      CHECK(cert.stages.size() == static_cast<std::size_t>(K + 1));
      CHECK(verify_certificate(a, target, cert).ok);
      // The partial sums reproduce the target on W^(K).
      GradedMap<Rational> sum(a.space(), n);
      for (int r = 0; r <= K; ++r) sum += stage_map(a, cert.stages[r], n, K);
      CHECK(agree_below(sum, target, K));
    }
}

TEST_CASE("tampered certificates are rejected") {
  QField q;
  std::mt19937_64 rng(32);
  auto a = model_full(q, {1, 2, 2, 3}, 2);
  auto target = random_trusted_target(a, -1, rng);
  auto cert = burnside_solve(a, target, 3);
  REQUIRE(verify_certificate(a, target, cert).ok);

  auto changed = cert;
  for (auto& stage : changed.stages)
    if (!stage.empty()) {
      stage[0].coeff += 1;
      break;
    }
  CHECK_FALSE(verify_certificate(a, target, changed).ok);

  auto short_cert = cert;
  short_cert.stages.pop_back();
  CHECK_FALSE(verify_certificate(a, target, short_cert).ok);

  auto wrong_degree = cert;
  wrong_degree.stages[0].push_back({Rational(1), {a.find("up0_0_0")}, {}});
  auto v = verify_certificate(a, target, wrong_degree);
  CHECK_FALSE(v.ok);
  CHECK(v.stage == 0);
}

TEST_CASE("burnside preconditions") {
  QField q;
  auto two = model_direct_sum(std::vector<Action<Rational>>{model_heisenberg(q, 2)}, {2});
  CHECK_THROWS_AS(burnside_solve(two, GradedMap<Rational>(two.space(), 0), 1), PreconditionFailed);
  auto h = model_heisenberg(q, 3);
  CHECK_THROWS_AS(burnside_solve(h, GradedMap<Rational>(h.space(), 1), 3), PreconditionFailed);
  CHECK_THROWS_AS(burnside_solve(h, GradedMap<Rational>(h.space(), 0), 4), PreconditionFailed);

  // Above N the full model is zero, so every level up to N is allowed.
  auto full = model_full(q, {1, 2, 2}, 2);
  std::mt19937_64 rng(8);
  for (int n = 1; n <= 2; ++n) {
    GradedMap<Rational> target(full.space(), n);
    for (int s = 0; s + n <= 2; ++s) target.set_block(s, random_matrix(q, full.space().dim(s + n), full.space().dim(s), rng));
    auto cert = burnside_solve(full, target, 2);
    CHECK(cert.verified);
    CHECK(verify_certificate(full, target, cert).ok);
  }
}

TEST_CASE("ideal generated by p_0 in the full model") {
  QField q;
  const std::vector<int> dims{1, 2, 2};
  auto a = model_full(q, dims);
  auto ideal = ideal_closure(a, {projection(a.space(), 0)});
  CHECK(ideal.at(0).size() == 9u);
  CHECK(ideal.at(1).size() == 6u);
  CHECK(ideal.at(-2).size() == 2u);
}
