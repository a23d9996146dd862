#include "doctest.h"
#include "wildcover/poly.hpp"

#include <random>

using namespace wildcover;

TEST_CASE("binomials mod p by digits") {
  CHECK(binom_mod_p(6, 5, 5) == 1);
  CHECK(binom_mod_p(6, 3, 5) == 0);   // C(6,3) = 20
  CHECK(binom_mod_p(6, 1, 5) == 1);   // 6 mod 5
  CHECK(binom_mod_p(7, 2, 7) == 0);   // 21
  CHECK(binom_mod_p(2401, 2400, 7) == 0);  // C(p^4, p^4-1) = p^4
  // cross-check against Pascal for everything small
  for (int p : {2, 3, 5}) {
    std::vector<std::vector<long long>> pas(40, std::vector<long long>(40, 0));
    for (int a = 0; a < 40; ++a) {
      pas[a][0] = 1;
      for (int k = 1; k <= a; ++k)
        pas[a][k] = (pas[a - 1][k - 1] + (k <= a - 1 ? pas[a - 1][k] : 0)) % p;
    }
    for (int a = 0; a < 40; ++a)
      for (int k = 0; k <= a; ++k) CHECK(binom_mod_p(a, k, p) == pas[a][k]);
  }
}

TEST_CASE("delta example over F_5") {
  auto f5 = FieldCtx::get(5, 1);
  Poly x6 = Poly::monomial(f5->one(), 6);
  Poly d = x6.delta(f5->one());
  // (X+1)^6 - X^6 = X^5 + X + 1 mod 5
  CHECK(d == Poly::from_ints(f5, {1, 1, 0, 0, 0, 1}));
  CHECK(d.str() == "X^5 + X + 1");
}

TEST_CASE("delta is linear, additive in y up to the mixed term, and matches translate") {
  auto ctx = FieldCtx::get(5, 2);
  std::mt19937 rng(3);
  auto rnd_poly = [&](int deg) {
    std::vector<FieldElement> c;
    for (int i = 0; i <= deg; ++i) c.push_back(ctx->element_by_index(rng() % 25));
    return Poly(ctx, std::move(c));
  };
  for (int it = 0; it < 25; ++it) {
    Poly f = rnd_poly(10), g = rnd_poly(8);
    auto y = ctx->element_by_index(rng() % 25);
    auto z = ctx->element_by_index(rng() % 25);
    CHECK((f + g).delta(y) == f.delta(y) + g.delta(y));
    // composition law: Delta_{y+z} = Delta_y + Delta_z + Delta_y o Delta_z
    CHECK(f.delta(y + z) == f.delta(y) + f.delta(z) + f.delta(z).delta(y));
    // translate consistency and evaluation
    CHECK(f.translate(y) == f + f.delta(y));
    auto x = ctx->element_by_index(rng() % 25);
    CHECK(f.translate(y).evaluate(x) == f.evaluate(x + y));
  }
}

TEST_CASE("compose and frobenius_map") {
  auto f5 = FieldCtx::get(5, 1);
  Poly x6 = Poly::monomial(f5->one(), 6);
  Poly wp = Poly::from_ints(f5, {0, -1, 0, 0, 0, 1});  // X^5 - X
  CHECK(x6.compose(wp).degree() == 30);
  std::mt19937 rng(5);
  auto ctx = FieldCtx::get(5, 2);
  for (int it = 0; it < 20; ++it) {
    std::vector<FieldElement> c;
    for (int i = 0; i <= 6; ++i) c.push_back(ctx->element_by_index(rng() % 25));
    Poly f(ctx, c);
    auto x = ctx->element_by_index(rng() % 25);
    Poly g = Poly::from_ints(ctx, {1, 2, 0, 1});
    CHECK(f.compose(g).evaluate(x) == f.evaluate(g.evaluate(x)));
    CHECK(f.frobenius_map().evaluate(x) == f.evaluate(x).pow(5));
  }
}

TEST_CASE("rendering") {
  auto f25 = FieldCtx::get(5, 2);
  auto t = f25->gen();
  Poly f = Poly::monomial(f25->one(), 11) + Poly::monomial(f25->from_int(4) * t, 7) + Poly::monomial(f25->from_int(3), 0);
  CHECK(f.str() == "X^11 + 4*t*X^7 + 3");
  Poly g = Poly::monomial(t + f25->one(), 6);
  CHECK(g.str() == "(t + 1)*X^6");
  CHECK(Poly::zero(f25).str() == "0");
}
