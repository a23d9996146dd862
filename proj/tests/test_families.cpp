#include "wildcover/families.hpp"

#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "wildcover/grp.hpp"

using namespace wildcover;

namespace {

template <typename F>
Errc thrown_code(F&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return Errc::Mismatch;
}

// Flattens each class to a residue row (exponent-major, field coordinates
// within) so that F_p-span questions become rank computations.
FpMat class_matrix(const std::vector<const ASClass*>& rows, const CtxPtr& ctx, int maxdeg) {
  const int m = ctx->m;
  FpMat out(ctx->p, int(rows.size()), (maxdeg + 1) * m);
  for (int r = 0; r < int(rows.size()); ++r)
    for (int e = 0; e <= maxdeg; ++e) {
      const FieldElement c = rows[size_t(r)]->reduced.coeff(e);
      const auto& cc = c.coeffs();
      for (int k = 0; k < int(cc.size()); ++k) out.at(r, e * m + k) = cc[size_t(k)];
    }
  return out;
}

bool spans_equal(const std::vector<ASClass>& a, const std::vector<ASClass>& b,
                 const CtxPtr& ctx) {
  if (a.size() != b.size()) return false;
  int maxdeg = 0;
  std::vector<const ASClass*> ra, rb, ru;
  for (const ASClass& c : a) {
    maxdeg = std::max(maxdeg, c.reduced.degree());
    ra.push_back(&c);
    ru.push_back(&c);
  }
  for (const ASClass& c : b) {
    maxdeg = std::max(maxdeg, c.reduced.degree());
    rb.push_back(&c);
    ru.push_back(&c);
  }
  const int n = int(a.size());
  return fp_rank(class_matrix(ra, ctx, maxdeg)) == n &&
         fp_rank(class_matrix(rb, ctx, maxdeg)) == n &&
         fp_rank(class_matrix(ru, ctx, maxdeg)) == n;
}

std::vector<long long> convolve(const std::vector<long long>& a, const std::vector<long long>& b) {
  std::vector<long long> out(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

}  // namespace

TEST_CASE("Witt lift of the last tower function") {
  auto c3 = FieldCtx::get(3, 1);
  auto c5 = FieldCtx::get(5, 1);
  CHECK(witt_g_last(3) == Poly::from_ints(c3, {0, 0, 0, 0, 0, 2, 0, 1}));
  CHECK(witt_g_last(5) == Poly::from_ints(c5, {0, 0, 0, 0, 0, 0, 0, 0, 0, 4, 0, 0, 0, 2, 0, 0,
                                               0, 3, 0, 0, 0, 1}));
  CHECK(witt_g_last(7).degree() == 1 + 6 * 7);
  CHECK(witt_g_last(11).degree() == 1 + 10 * 11);
  CHECK(witt_g_last(13).degree() == 1 + 12 * 13);
  CHECK(sigma_level(witt_g_last(3)) == 3);
  CHECK(sigma_level(witt_g_last(5)) == 5);
  CHECK(sigma_level(witt_g_last(7)) == 7);
  // already reduced: support coprime to p, no constant term
  CHECK(reduce(witt_g_last(5)).reduced == witt_g_last(5));
  CHECK(witt_g_last(3).leading().is_one());
  CHECK(witt_g_last(13).leading().is_one());

  SUBCASE("independent integer recomputation at p = 5") {
    std::vector<long long> base(6, 0);
    base[5] = 1;
    base[1] = -1;
    std::vector<long long> acc{1};
    for (int k = 0; k < 5; ++k) acc = convolve(acc, base);
    acc[25] -= 1;
    acc[5] += 1;
    std::vector<long long> red(acc.size(), 0);
    for (size_t e = 0; e < acc.size(); ++e) {
      if (acc[e] == 0) continue;
      REQUIRE(acc[e] % 5 == 0);        // divisible by p ...
      REQUIRE((acc[e] / 5) % 5 != 0);  // ... exactly once
      red[e] = ((acc[e] / 5) % 5 * 4 % 5 + 5) % 5;  // 1/4! = 4 mod 5
    }
    CHECK(Poly::from_ints(c5, red) == witt_g_last(5));
  }

  SUBCASE("rejects non-primes and p < 3") {
    CHECK(thrown_code([] { (void)witt_g_last(1); }) == Errc::OutOfRange);
    CHECK(thrown_code([] { (void)witt_g_last(2); }) == Errc::OutOfRange);
    CHECK(thrown_code([] { (void)witt_g_last(4); }) == Errc::OutOfRange);
    CHECK(thrown_code([] { (void)witt_g_last(9); }) == Errc::OutOfRange);
    CHECK(thrown_code([] { (void)witt_g_last(15); }) == Errc::OutOfRange);
  }
}

TEST_CASE("difference polynomial T and its telescoping sum") {
  auto c3 = FieldCtx::get(3, 1);
  auto c25 = FieldCtx::get(5, 2);
  CHECK(t_polynomial(c3->one()) == Poly::from_ints(c3, {0, 1, 1}));
  CHECK(t_polynomial(FieldCtx::get(5, 1)->one()) ==
        Poly::from_ints(FieldCtx::get(5, 1), {0, 1, 2, 2, 1}));
  CHECK(t_polynomial(c25->zero()).is_zero());

  // top coefficient is y itself (odd p): 1/(p-1) * (-1)^p = -(-1) = 1
  FieldElement u = c25->gen() + c25->from_int(2);
  CHECK(t_polynomial(u).degree() == 4);
  CHECK(t_polynomial(u).coeff(4) == u);

  SUBCASE("sum over a translation orbit collapses to -y^p") {
    for (long long i = 0; i < 25; ++i) {
      const FieldElement y = c25->element_by_index(i);
      const Poly ty = t_polynomial(y);
      Poly sum = Poly::zero(c25);
      for (int k = 0; k < 5; ++k) sum = sum + ty.translate(c25->from_int(k) * y);
      CHECK(sum == Poly::monomial(-y.pow(5), 0));
    }
    auto c49 = FieldCtx::get(7, 2);
    const FieldElement y = c49->gen();
    Poly sum = Poly::zero(c49);
    for (int k = 0; k < 7; ++k) sum = sum + t_polynomial(y).translate(c49->from_int(k) * y);
    CHECK(sum == Poly::monomial(-y.pow(7), 0));
  }

  CHECK(thrown_code([] { (void)t_polynomial(FieldCtx::get(2, 3)->one()); }) == Errc::OutOfRange);
}

TEST_CASE("special towers: exact functions, ramification, and matrices") {
  CoverSpec s52 = special_family(5, 2);
  const CtxPtr& ext = s52.ambient;
  REQUIRE(ext->p == 5);
  REQUIRE(ext->m == 5);
  REQUIRE(s52.v() == 2);
  CHECK(s52.functions[0].reduced == Poly::from_ints(ext, {0, 0, 4, 0, 0, 0, 1}));
  CHECK(s52.functions[1].reduced ==
        Poly::from_ints(ext, {0, 0, 0, 0, 0, 0, 0, 2, 0, 0, 0, 3}));

  VerifyResult vr52 = verify_cover(s52);
  CHECK(vr52.s1 == 1);
  CHECK(vr52.basis.degrees == std::vector<int>{6, 11});
  CHECK(vr52.ram.genus == 110);
  CHECK(vr52.ram.order == 625);
  CHECK(vr52.ram.ratio_num == 125);
  CHECK(vr52.ram.ratio_den == 22);
  CHECK(vr52.ram.is_big_action);
  CHECK(theorem58_check(s52).all());

  SUBCASE("representation matrices are the truncated exponentials of S(y)") {
    const Residue inv_fact[4] = {0, 1, 3, 1};  // 1/k! mod 5 for k = 1..3
    for (int n : {3, 4}) {
      CoverSpec sp = special_family(5, n);
      VerifyResult vr = verify_cover(sp);
      for (const RepMatrix& rm : vr.matrices) {
        const FieldElement sy_f = sp.ambient->frobenius(rm.y, 1) - rm.y;
        REQUIRE(sy_f.in_prime_field());
        const Residue sy = sy_f.is_zero() ? 0 : sy_f.as_prime();
        for (int j = 0; j < n; ++j)
          for (int i = 0; i < n; ++i) {
            Residue want = 0;
            if (i == j) {
              want = 1;
            } else if (i > j) {
              long long pw = 1;
              for (int k = 0; k < i - j; ++k) pw = pw * sy % 5;
              want = Residue(pw * inv_fact[i - j] % 5);
            }
            CHECK(rm.entries.at(j, i) == want);
          }
      }
    }
  }

  SUBCASE("length four ends in the Witt lift") {
    CoverSpec s54 = special_family(5, 4);
    REQUIRE(s54.n() == 4);
    CHECK(s54.functions[2].reduced ==
          Poly::from_ints(s54.ambient, {0, 0, 0, 0, 2, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1}));
    // last function = the Witt lift times the common unit 1/lead(red(S^2/2)) = 4
    CHECK(s54.functions[3].reduced ==
          witt_g_last(5).embedded(s54.ambient).scaled(s54.ambient->from_int(4)));
    VerifyResult vr = verify_cover(s54);
    CHECK(vr.basis.degrees == std::vector<int>{6, 11, 16, 21});
    CHECK(vr.ram.genus == 5860);
    CHECK(vr.ram.order == 15625);
    CHECK(vr.ram.ratio_num == 3125);
    CHECK(vr.ram.ratio_den == 1172);
    CHECK(theorem58_check(s54).all());
  }

  SUBCASE("p = 3 and p = 7") {
    CoverSpec s32 = special_family(3, 2);
    CHECK(s32.ambient->m == 3);
    CHECK(s32.functions[0].reduced == Poly::from_ints(s32.ambient, {0, 0, 2, 0, 1}));
    CHECK(s32.functions[1].reduced ==
          witt_g_last(3).embedded(s32.ambient).scaled(s32.ambient->from_int(2)));
    VerifyResult vr32 = verify_cover(s32);
    CHECK(vr32.basis.degrees == std::vector<int>{4, 7});
    CHECK(vr32.ram.genus == 21);
    CHECK(vr32.ram.order == 81);
    CHECK(vr32.ram.ratio_num == 27);
    CHECK(vr32.ram.ratio_den == 7);
    CHECK(theorem58_check(s32).all());

    CoverSpec s72 = special_family(7, 2);
    CHECK(s72.ambient->m == 7);
    CHECK(s72.functions[0].reduced == Poly::from_ints(s72.ambient, {0, 0, 6, 0, 0, 0, 0, 0, 1}));
    VerifyResult vr72 = verify_cover(s72);
    CHECK(vr72.basis.degrees == std::vector<int>{8, 15});
    CHECK(vr72.ram.genus == 315);
    CHECK(vr72.ram.order == 2401);
    CHECK(theorem58_check(s72).all());
  }

  SUBCASE("automorphism group of the length-two tower") {
    GroupReport gr = group_report(s52);
    CHECK(gr.order == 625);
    CHECK(gr.exponent == 5);
    CHECK(gr.center_order == 5);
    CHECK(gr.derived_order == 25);
    CHECK(gr.lambda_dims == std::vector<int>{1, 2});
    CHECK(gr.max_jump);
    CHECK(gr.center_shape_ok);
  }

  SUBCASE("range validation") {
    CHECK(thrown_code([] { (void)special_family(5, 0); }) == Errc::OutOfRange);
    CHECK(thrown_code([] { (void)special_family(5, 5); }) == Errc::OutOfRange);
    CHECK(thrown_code([] { (void)special_family(4, 2); }) == Errc::OutOfRange);
    CHECK(thrown_code([] { (void)special_family(2, 1); }) == Errc::OutOfRange);
    CHECK(thrown_code([] { (void)special_family(9, 2); }) == Errc::OutOfRange);
  }
}

TEST_CASE("base change by a separable additive polynomial") {
  CoverSpec s52 = special_family(5, 2);
  const CtxPtr& ext = s52.ambient;
  const TwistedPoly wp = TwistedPoly::wp(ext);

  CoverSpec bc = base_change(s52, wp);
  CHECK(bc.ambient->m == 5);
  CHECK(bc.v() == 3);
  VerifyResult vr = verify_cover(bc);
  CHECK(vr.s1 == 2);
  CHECK(vr.basis.degrees == std::vector<int>{26, 51});
  CHECK(vr.ram.genus == 550);
  CHECK(vr.ram.order == 3125);  // one extra p from the enlarged translation group
  CHECK(vr.ram.ratio_num == 125);
  CHECK(vr.ram.ratio_den == 22);  // |G|/g is invariant under this base change
  CHECK(theorem58_check(bc).all());

  // digit-sum levels are preserved
  for (int i = 0; i < 2; ++i)
    CHECK(dp_order(bc.functions[size_t(i)].reduced) ==
          dp_order(s52.functions[size_t(i)].reduced));

  SUBCASE("identity base change returns the spec unchanged") {
    CoverSpec same = base_change(s52, TwistedPoly::identity(ext));
    CHECK(same.functions == s52.functions);
    CHECK(same.v_basis == s52.v_basis);
    CHECK(same.ambient->same_field(*ext));
  }

  SUBCASE("degree-one scaling keeps the shape and rescales V") {
    TwistedPoly ax(ext, {ext->gen()});
    CoverSpec sc = base_change(s52, ax);
    CHECK(sc.v() == 2);
    VerifyResult svr = verify_cover(sc);
    CHECK(svr.s1 == 1);
    CHECK(svr.basis.degrees == std::vector<int>{6, 11});
    const TwistedPoly u_old = subspace_poly(s52.v_basis);
    for (const FieldElement& y : sc.v_basis)
      CHECK(u_old.evaluate(ext->gen() * y).is_zero());  // t*y lands back in V
  }

  SUBCASE("commutes with truncation") {
    CoverSpec left = truncate_cover(bc, 1);
    CoverSpec right = base_change(truncate_cover(s52, 1), wp);
    CHECK(left.functions == right.functions);
    CHECK(left.v_basis == right.v_basis);
    CHECK(left.ambient->same_field(*right.ambient));
  }

  SUBCASE("input validation") {
    CHECK(thrown_code([&] { (void)base_change(s52, TwistedPoly::f_monomial(ext->one(), 1)); }) ==
          Errc::NotSeparable);
    CHECK(thrown_code([&] { (void)base_change(s52, TwistedPoly::zero(ext)); }) ==
          Errc::NotSeparable);
    CHECK(thrown_code([&] {
            (void)base_change(s52, TwistedPoly::wp(FieldCtx::get(5, 1)));
          }) == Errc::FieldMismatch);
  }
}

TEST_CASE("towers with proportional additive parts and trivial representation") {
  auto c25 = FieldCtx::get(5, 2);
  const FieldElement one = c25->one();
  const FieldElement t = c25->gen();
  const TwistedPoly f2 = TwistedPoly::f_monomial(one, 2);

  CoverSpec p43 = prop43_family(2, 2, {one, t}, f2);
  CHECK(p43.ambient->m == 8);
  CHECK(p43.v() == 4);
  CHECK(p43.functions[0].reduced == Poly::monomial(p43.ambient->one(), 26));
  CHECK(p43.functions[1].reduced == Poly::monomial(embed(t, p43.ambient), 26));
  VerifyResult vr = verify_cover(p43);
  CHECK(vr.s1 == 2);
  CHECK(vr.basis.degrees == std::vector<int>{26, 26});
  CHECK(vr.ram.genus == 300);
  CHECK(vr.ram.order == 15625);
  CHECK(vr.ram.ratio_num == 625);
  CHECK(vr.ram.ratio_den == 12);
  CHECK(vr.ram.is_big_action);
  CHECK(rho_trivial(p43, vr.matrices));
  CHECK(theorem58_check(p43).all());
  // |G| / g^2 = 4 p^n / (p^n - 1)^2 = 25/144
  CHECK(vr.ram.order * 144 == 25 * vr.ram.genus * vr.ram.genus);

  SUBCASE("the quotient |G|/g^2 does not depend on s") {
    CoverSpec big = prop43_family(4, 2, {one, t}, TwistedPoly::f_monomial(one, 4));
    CHECK(big.ambient->m == 16);
    CHECK(big.v() == 8);
    VerifyResult bvr = verify_cover(big);
    CHECK(bvr.s1 == 4);
    CHECK(bvr.basis.degrees == std::vector<int>{626, 626});
    CHECK(bvr.ram.genus == 7500);
    CHECK(bvr.ram.order == 9765625);
    CHECK(bvr.ram.ratio_num == 15625);
    CHECK(bvr.ram.ratio_den == 12);
    CHECK(rho_trivial(big, bvr.matrices));
    CHECK(bvr.ram.order * 144 == 25 * bvr.ram.genus * bvr.ram.genus);
  }

  SUBCASE("constants only shift the classes by multiples of X") {
    CoverSpec withc = prop43_family(2, 2, {one, t}, f2, {c25->zero(), one});
    CHECK(withc.functions[1].reduced ==
          Poly::monomial(embed(t, withc.ambient), 26) +
              Poly::monomial(withc.ambient->one(), 1));
    VerifyResult cvr = verify_cover(withc);
    CHECK(cvr.ram.genus == 300);
    CHECK(rho_trivial(withc, cvr.matrices));
  }

  SUBCASE("single function reduces to the base case") {
    auto c5 = FieldCtx::get(5, 1);
    CoverSpec lm = prop43_family(1, 1, {c5->one()}, TwistedPoly::f_monomial(c5->one(), 1));
    CHECK(lm.ambient->m == 4);
    CHECK(lm.v() == 2);
    CHECK(lm.functions[0].reduced == Poly::monomial(lm.ambient->one(), 6));
    VerifyResult lvr = verify_cover(lm);
    CHECK(lvr.ram.genus == 10);
    CHECK(lvr.ram.order == 125);
    CHECK(lvr.ram.ratio_num == 25);
    CHECK(lvr.ram.ratio_den == 2);
    CHECK(rho_trivial(lm, lvr.matrices));
  }

  SUBCASE("constraint violations are rejected by name") {
    CHECK(thrown_code([&] { (void)prop43_family(2, 2, {one, c25->from_int(2)}, f2); }) ==
          Errc::DependentGammas);
    CHECK(thrown_code([&] {
            (void)prop43_family(3, 2, {one, t}, TwistedPoly::f_monomial(one, 3));
          }) == Errc::DivisibilityViolation);
    CHECK(thrown_code([&] { (void)prop43_family(2, 2, {one, t, t + one}, f2); }) ==
          Errc::OutOfRange);
    CHECK(thrown_code([&] {
            (void)prop43_family(2, 2, {one, t}, TwistedPoly(c25, {c25->zero(), one, one}));
          }) == Errc::SupportViolation);
    CHECK(thrown_code([&] {
            (void)prop43_family(2, 2, {one, t}, TwistedPoly::f_monomial(one, 1));
          }) == Errc::WrongShape);
    CHECK(thrown_code([&] { (void)prop43_family(2, 2, {t, one}, f2); }) == Errc::Mismatch);
    CHECK(thrown_code([&] { (void)prop43_family(2, 2, {one, t}, f2, {one}); }) ==
          Errc::Mismatch);
    CHECK(thrown_code([&] { (void)prop43_family(2, 2, {one, t}, TwistedPoly::zero(c25)); }) ==
          Errc::WrongShape);
    auto c625 = FieldCtx::get(5, 4);
    CHECK(thrown_code([&] {
            (void)prop43_family(4, 2, {c625->one(), c625->gen()},
                                TwistedPoly::f_monomial(c625->one(), 4));
          }) == Errc::Mismatch);  // gen of F_{5^4} is outside F_{5^2}
  }
}

TEST_CASE("universal towers at p = 5") {
  auto c5 = FieldCtx::get(5, 1);
  auto c25 = FieldCtx::get(5, 2);
  CoverSpec s52 = special_family(5, 2);

  SUBCASE("b0 in F_5, b5 = 0 recovers the special tower's class space") {
    for (long long b = 1; b <= 4; ++b) {
      UniversalParams prm;
      prm.b0 = c5->from_int(b);
      prm.b5 = c5->zero();
      CoverSpec u = universal_p5(2, prm);
      REQUIRE(u.ambient->same_field(*s52.ambient));
      CHECK(u.functions[0] == s52.functions[0]);
      CHECK(spans_equal(u.functions, s52.functions, u.ambient));
      CHECK(theorem58_check(u).all());
    }
  }

  SUBCASE("generic parameters verify with the pinned invariants") {
    UniversalParams prm;
    prm.b0 = c25->gen();
    prm.b5 = c25->zero();
    CoverSpec u = universal_p5(2, prm);
    CHECK(u.v() == 2);
    VerifyResult vr = verify_cover(u);
    CHECK(vr.s1 == 1);
    CHECK(vr.basis.degrees == std::vector<int>{6, 11});
    CHECK(vr.ram.genus == 110);
    CHECK(vr.ram.order == 625);
    CHECK(vr.ram.ratio_num == 125);
    CHECK(vr.ram.ratio_den == 22);
    CHECK(theorem58_check(u).all());

    prm.b5 = c25->gen();  // nonzero linear term
    CHECK(theorem58_check(universal_p5(2, prm)).all());

    // a b0 outside the 24th roots of unity: f1 degenerates to X^6
    auto c625 = FieldCtx::get(5, 4);
    UniversalParams wide;
    wide.b0 = c625->gen();
    wide.b5 = c625->zero();
    REQUIRE(wide.b0.pow(24) == -c625->one());
    CoverSpec uw = universal_p5(2, wide);
    CHECK(uw.ambient->m == 4);
    CHECK(uw.functions[0].reduced == Poly::monomial(uw.ambient->one(), 6));
    CHECK(theorem58_check(uw).all());
  }

  SUBCASE("length three") {
    UniversalParams prm;
    prm.b0 = c25->gen();
    prm.c7 = c25->gen() + c25->one();
    prm.c9 = c25->gen().pow(2);
    CoverSpec u = universal_p5(3, prm);
    CHECK(u.v() == 2);
    VerifyResult vr = verify_cover(u);
    CHECK(vr.basis.degrees == std::vector<int>{6, 11, 16});
    CHECK(vr.ram.genus == 860);
    CHECK(vr.ram.order == 3125);
    CHECK(vr.ram.ratio_num == 625);
    CHECK(vr.ram.ratio_den == 172);
    CHECK(theorem58_check(u).all());

    UniversalParams sub;
    sub.b0 = c5->from_int(2);
    sub.c7 = c5->zero();
    sub.c9 = c5->zero();
    CoverSpec us = universal_p5(3, sub);
    CoverSpec s53 = special_family(5, 3);
    REQUIRE(us.ambient->same_field(*s53.ambient));
    CHECK(spans_equal(us.functions, s53.functions, us.ambient));
  }

  SUBCASE("length four") {
    auto c625 = FieldCtx::get(5, 4);
    const FieldElement minus_one = -c625->one();
    FieldElement b0;
    for (long long i = 2; i < 625; ++i) {
      const FieldElement e = c625->element_by_index(i);
      if (e.pow(24) == minus_one) {
        b0 = e;
        break;
      }
    }
    REQUIRE(b0.pow(96).is_one());
    UniversalParams prm;
    prm.b0 = b0;
    prm.c7 = c625->gen();
    prm.d8 = prm.c7 + c625->one();  // t = 1 solves 2t + 3 t^25 = 0 when b0^24 = -1
    prm.d11 = c625->gen().pow(3);
    prm.d13 = c625->from_int(2);
    CoverSpec u = universal_p5(4, prm);
    CHECK(u.ambient->m == 4);
    CHECK(u.v() == 2);
    VerifyResult vr = verify_cover(u);
    CHECK(vr.s1 == 1);
    CHECK(vr.basis.degrees == std::vector<int>{6, 11, 16, 21});
    CHECK(vr.ram.genus == 5860);
    CHECK(vr.ram.order == 15625);
    CHECK(vr.ram.ratio_num == 3125);
    CHECK(vr.ram.ratio_den == 1172);
    CHECK(theorem58_check(u).all());

    // the other constraint branch: b0^24 = 1 forces 2t + t^5 + 2t^25 = 0; t = 0
    FieldElement b1;
    for (long long i = 2; i < 625; ++i) {
      const FieldElement e = c625->element_by_index(i);
      if (e.pow(24).is_one() && !e.pow(4).is_one()) {
        b1 = e;
        break;
      }
    }
    UniversalParams other;
    other.b0 = b1;
    other.c7 = c625->gen();
    other.d8 = other.c7;
    other.d11 = c625->gen().pow(7);
    other.d13 = c625->from_int(3);
    CoverSpec u2 = universal_p5(4, other);
    CHECK(u2.ambient->m == 20);
    VerifyResult vr2 = verify_cover(u2);
    CHECK(vr2.ram.genus == 5860);
    CHECK(theorem58_check(u2).all());

    // all parameters zeroed over F_5 lands exactly on the special tower
    UniversalParams sub;
    sub.b0 = c5->from_int(3);
    sub.c7 = c5->zero();
    sub.d8 = c5->zero();
    sub.d11 = c5->zero();
    sub.d13 = c5->zero();
    CoverSpec us = universal_p5(4, sub);
    CoverSpec s54 = special_family(5, 4);
    REQUIRE(us.ambient->same_field(*s54.ambient));
    CHECK(us.functions == s54.functions);
    CHECK(spans_equal(us.functions, s54.functions, us.ambient));
  }

  SUBCASE("sampled admissible parameters all verify") {
    auto c625 = FieldCtx::get(5, 4);
    std::mt19937_64 rng(0x87ab1eu);
    auto rand_elem = [&] { return c625->element_by_index(static_cast<long long>(rng() % 625)); };
    for (int trial = 0; trial < 5; ++trial) {
      UniversalParams p2;
      do p2.b0 = rand_elem(); while (p2.b0.is_zero());
      p2.b5 = rand_elem();
      CHECK(theorem58_check(universal_p5(2, p2)).all());
      UniversalParams p3;
      do p3.b0 = rand_elem(); while (p3.b0.is_zero());
      p3.c7 = rand_elem();
      p3.c9 = rand_elem();
      CHECK(theorem58_check(universal_p5(3, p3)).all());
    }
  }

  SUBCASE("constraint violations") {
    UniversalParams prm;
    prm.b0 = c25->gen();
    prm.b5 = c25->zero();
    CHECK(thrown_code([&] { (void)universal_p5(1, prm); }) == Errc::OutOfRange);
    CHECK(thrown_code([&] { (void)universal_p5(5, prm); }) == Errc::OutOfRange);

    UniversalParams zero;
    zero.b0 = c25->zero();
    zero.b5 = c25->zero();
    CHECK(thrown_code([&] { (void)universal_p5(2, zero); }) == Errc::ParameterConstraintViolated);

    UniversalParams mixed;
    mixed.b0 = c25->one();
    mixed.b5 = c5->zero();  // different field than b0
    CHECK(thrown_code([&] { (void)universal_p5(2, mixed); }) == Errc::FieldMismatch);

    UniversalParams wrongp;
    wrongp.b0 = FieldCtx::get(3, 1)->one();
    wrongp.b5 = FieldCtx::get(3, 1)->zero();
    CHECK(thrown_code([&] { (void)universal_p5(2, wrongp); }) ==
          Errc::ParameterConstraintViolated);

    // n = 4: b0^96 != 1
    auto c625 = FieldCtx::get(5, 4);
    FieldElement bad;
    for (long long i = 2; i < 625; ++i) {
      const FieldElement e = c625->element_by_index(i);
      if (!e.is_zero() && !e.pow(96).is_one()) {
        bad = e;
        break;
      }
    }
    UniversalParams p4;
    p4.b0 = bad;
    p4.c7 = c625->zero();
    p4.d8 = c625->zero();
    p4.d11 = c625->zero();
    p4.d13 = c625->zero();
    CHECK(thrown_code([&] { (void)universal_p5(4, p4); }) == Errc::ParameterConstraintViolated);

    // n = 4: admissible b0 but t = d8 - c7 violating the additive constraint
    FieldElement b0;
    for (long long i = 2; i < 625; ++i) {
      const FieldElement e = c625->element_by_index(i);
      if (e.pow(24) == -c625->one()) {
        b0 = e;
        break;
      }
    }
    UniversalParams p4t;
    p4t.b0 = b0;
    p4t.c7 = c625->zero();
    p4t.d8 = c625->gen().pow(5);  // t with 2t + 2 b0^24 t^25 != 0
    p4t.d11 = c625->zero();
    p4t.d13 = c625->zero();
    const FieldElement t = p4t.d8 - p4t.c7;
    REQUIRE(!(c625->from_int(2) * t + (c625->from_int(3) * b0.pow(24) + c625->from_int(3)) * t.pow(5) +
              c625->from_int(2) * b0.pow(24) * t.pow(25))
                 .is_zero());
    CHECK(thrown_code([&] { (void)universal_p5(4, p4t); }) == Errc::ParameterConstraintViolated);
  }
}

TEST_CASE("isomorphism criterion for the two-parameter tower") {
  auto c5 = FieldCtx::get(5, 1);
  auto c25 = FieldCtx::get(5, 2);
  auto c625 = FieldCtx::get(5, 4);
  auto prm = [](const FieldElement& b0, const FieldElement& b5) {
    UniversalParams p;
    p.b0 = b0;
    p.b5 = b5;
    return p;
  };

  CHECK(iso_criterion_n2(prm(c25->gen(), c25->one()), prm(c25->gen(), c25->one())));
  // scaling b0 by any 24th root of unity with b5 = 0
  CHECK(iso_criterion_n2(prm(c25->gen(), c25->zero()), prm(c25->gen() * c25->from_int(2), c25->zero())));
  // mismatched b5 signs and scales
  CHECK_FALSE(iso_criterion_n2(prm(c5->one(), c5->one()), prm(c5->one(), c5->from_int(2))));
  CHECK(iso_criterion_n2(prm(c5->one(), c5->one()), prm(c5->one(), c5->from_int(4))));
  CHECK(iso_criterion_n2(prm(c25->one(), c25->gen()),
                         prm(c25->from_int(2), c25->from_int(2) * c25->gen())));
  CHECK(iso_criterion_n2(prm(c25->one(), c25->gen()),
                         prm(c25->from_int(2), c25->from_int(3) * c25->gen())));
  CHECK_FALSE(iso_criterion_n2(prm(c25->one(), c25->gen()), prm(c25->from_int(2), c25->gen())));
  // ratio outside the 24th roots of unity
  CHECK_FALSE(iso_criterion_n2(prm(c625->one(), c625->zero()), prm(c625->gen(), c625->zero())));

  CHECK(thrown_code([&] {
          (void)iso_criterion_n2(prm(c25->zero(), c25->zero()), prm(c25->one(), c25->zero()));
        }) == Errc::ParameterConstraintViolated);
}
