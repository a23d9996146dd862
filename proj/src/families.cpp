#include "wildcover/families.hpp"

#include <string>
#include <utility>
#include <vector>

namespace wildcover {

namespace {

bool is_odd_prime(int p) {
  if (p < 3 || p % 2 == 0) return false;
  for (int d = 3; d * d <= p; d += 2)
    if (p % d == 0) return false;
  return true;
}

long long inv_mod(long long a, int p) {
  a %= p;
  if (a < 0) a += p;
  long long r = 1, b = a, e = p - 2;
  while (e > 0) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

// Coefficient-wise embedding of a list of reduced functions into ext.
std::vector<Poly> embed_all(const std::vector<Poly>& fs, const CtxPtr& ext) {
  std::vector<Poly> out;
  out.reserve(fs.size());
  for (const Poly& f : fs) out.push_back(f.embedded(ext));
  return out;
}

}  // namespace

Poly witt_g_last(int p) {
  if (!is_odd_prime(p)) fail(Errc::OutOfRange, "witt_g_last: p must be an odd prime");
  // Integer workspace for (X^p - X)^p - X^{p^2} + X^p.  Coefficients are
  // signed binomials C(p, i), so int64 holds them exactly for any p this
  // library accepts.
  std::vector<long long> c(size_t(p) * p + 1, 0);
  long long binom = 1;  // C(p, i), advanced by the exact multiplicative rule
  for (int i = 0; i <= p; ++i) {
    long long sign = ((p - i) % 2 == 0) ? 1 : -1;
    c[size_t(i) * p + (p - i)] += sign * binom;
    binom = binom * (p - i) / (i + 1);
  }
  c[size_t(p) * p] -= 1;
  c[p] += 1;
  // Certified division: every surviving coefficient must be divisible by p
  // exactly once (the quotient stays a unit mod p).
  long long fact = 1;
  for (int i = 2; i <= p - 1; ++i) fact = fact * i % p;
  const long long inv_tail = inv_mod(fact, p);
  std::vector<long long> red(c.size(), 0);
  for (size_t e = 0; e < c.size(); ++e) {
    if (c[e] == 0) continue;
    if (c[e] % p != 0)
      fail(Errc::DivisibilityViolation, "witt_g_last: coefficient not divisible by p");
    const long long q = c[e] / p;
    if (q % p == 0)
      fail(Errc::DivisibilityViolation, "witt_g_last: coefficient divisible by p twice");
    red[e] = (q % p * inv_tail % p + p) % p;
  }
  Poly g = Poly::from_ints(FieldCtx::get(p, 1), red);
  if (g.degree() != 1 + (p - 1) * p || reduce(g).reduced != g)
    fail(Errc::DivisibilityViolation, "witt_g_last: result is not the reduced degree-(1+(p-1)p) form");
  return g;
}

Poly t_polynomial(const FieldElement& y) {
  const CtxPtr& ctx = y.ctx();
  if (!ctx) fail(Errc::FieldMismatch, "t_polynomial: element without a field");
  const int p = ctx->p;
  if (p < 3) fail(Errc::OutOfRange, "t_polynomial: the characteristic must be odd");
  if (y.is_zero()) return Poly::zero(ctx);
  std::vector<FieldElement> coeffs(size_t(p), ctx->zero());
  for (int i = 1; i <= p - 1; ++i) {
    const long long unit = (i % 2 == 1) ? inv_mod(i, p) : (p - inv_mod(i, p)) % p;
    coeffs[size_t(i)] = ctx->from_int(unit) * y.pow(p - i);
  }
  return Poly(ctx, std::move(coeffs));
}

CoverSpec special_family(int p, int n) {
  if (!is_odd_prime(p)) fail(Errc::OutOfRange, "special_family: p must be an odd prime");
  if (n < 1 || n > p - 1) fail(Errc::OutOfRange, "special_family: need 1 <= n <= p-1");
  const TwistedPoly wp_base = TwistedPoly::wp(FieldCtx::get(p, 1));
  auto [ext, v_basis] = zero_set(wp_base * wp_base);
  const Poly s = TwistedPoly::wp(ext).to_poly();
  std::vector<Poly> fs;
  fs.reserve(size_t(n));
  Poly s_power = s;   // S^{i} entering iteration i
  long long fact = 1; // i! mod p
  for (int i = 1; i <= n; ++i) {
    if (i == p - 1) {
      fs.push_back(witt_g_last(p).embedded(ext));
      break;
    }
    s_power = s_power * s;
    fact = fact * (i + 1) % p;
    fs.push_back(reduce(s_power.scaled(ext->from_int(inv_mod(fact, p)))).reduced);
  }
  // One common F_p scale making f_1 monic; a uniform scale leaves every
  // translation's representation matrix unchanged.
  const FieldElement lead = fs[0].leading();
  const FieldElement unit = lead.inv();
  for (Poly& f : fs) f = f.scaled(unit);
  return make_cover_spec(ext, fs, v_basis);
}

CoverSpec base_change(const CoverSpec& spec, const TwistedPoly& S0) {
  if (S0.is_zero() || !S0.separable())
    fail(Errc::NotSeparable, "base_change: S0 must be a separable additive polynomial");
  if (!S0.ctx()->same_field(*spec.ambient))
    fail(Errc::FieldMismatch, "base_change: S0 must live in the spec's ambient field");
  if (S0 == TwistedPoly::identity(spec.ambient)) return spec;
  // The new translation group is the preimage of V under S0: the kernel of
  // subspace_poly(V) o S0, regenerated over its splitting field.
  auto [ext, v_basis] = zero_set(subspace_poly(spec.v_basis) * S0);
  const Poly s0 = S0.to_poly().embedded(ext);
  std::vector<Poly> fs;
  fs.reserve(spec.functions.size());
  for (const ASClass& f : spec.functions)
    fs.push_back(reduce(f.reduced.embedded(ext).compose(s0)).reduced);
  return make_cover_spec(ext, fs, v_basis);
}

CoverSpec prop43_family(int s, int d, const std::vector<FieldElement>& gammas,
                        const TwistedPoly& S1, const std::vector<FieldElement>& constants) {
  const CtxPtr& ctx = S1.ctx();
  if (!ctx || S1.is_zero())
    fail(Errc::WrongShape, "prop43_family: S1 must be a nonzero additive polynomial");
  const int p = ctx->p;
  const int n = int(gammas.size());
  if (s < 1 || d < 1) fail(Errc::OutOfRange, "prop43_family: need s >= 1 and d >= 1");
  if (n < 1) fail(Errc::OutOfRange, "prop43_family: need at least one gamma");
  if (s % d != 0) fail(Errc::DivisibilityViolation, "prop43_family: d must divide s");
  if (n > d) fail(Errc::OutOfRange, "prop43_family: need n <= d");
  if (S1.deg_f() != s) fail(Errc::WrongShape, "prop43_family: S1 must have F-degree s");
  for (int k = 0; k < s; ++k) {
    const FieldElement a = S1.coeff(k);
    if (!a.is_zero() && k % d != 0)
      fail(Errc::SupportViolation,
           "prop43_family: S1 must be supported on F-degrees that are multiples of d");
  }
  for (const FieldElement& g : gammas)
    if (!g.ctx() || !g.ctx()->same_field(*ctx))
      fail(Errc::FieldMismatch, "prop43_family: gammas must live in S1's field");
  if (!gammas[0].is_one()) fail(Errc::Mismatch, "prop43_family: gamma_1 must be 1");
  for (const FieldElement& g : gammas)
    if (ctx->frobenius(g, d) != g)
      fail(Errc::Mismatch, "prop43_family: every gamma must lie in the degree-d subfield");
  FpMat span(p, ctx->m, n);
  for (int j = 0; j < n; ++j)
    for (int r = 0; r < int(gammas[size_t(j)].coeffs().size()); ++r)
      span.at(r, j) = gammas[size_t(j)].coeffs()[size_t(r)];
  if (fp_rank(span) != n)
    fail(Errc::DependentGammas, "prop43_family: gammas must be F_p-independent");
  if (!constants.empty() && int(constants.size()) != n)
    fail(Errc::Mismatch, "prop43_family: need one constant per gamma");
  for (const FieldElement& c : constants)
    if (!c.ctx() || !c.ctx()->same_field(*ctx))
      fail(Errc::FieldMismatch, "prop43_family: constants must live in S1's field");

  const Poly x = Poly::monomial(ctx->one(), 1);
  std::vector<Poly> fs;
  fs.reserve(size_t(n));
  for (int i = 0; i < n; ++i) {
    Poly f = x * S1.scaled(gammas[size_t(i)]).to_poly();
    if (!constants.empty()) f = f + Poly::monomial(constants[size_t(i)], 1);
    fs.push_back(f);
  }
  auto [ext, v_basis] = zero_set(palindromic(fs[0]));
  return make_cover_spec(ext, embed_all(fs, ext), v_basis);
}

namespace {

// Validated read of one universal-tower parameter.
const FieldElement& universal_param(const UniversalParams& prm, const FieldElement& e,
                                    const char* name) {
  if (!e.ctx() || !e.ctx()->same_field(*prm.b0.ctx()))
    fail(Errc::FieldMismatch, std::string("universal_p5: ") + name + " must live in b0's field");
  return e;
}

}  // namespace

CoverSpec universal_p5(int n, const UniversalParams& params) {
  if (n < 2 || n > 4) fail(Errc::OutOfRange, "universal_p5: n must be 2, 3, or 4");
  const CtxPtr& ctx = params.b0.ctx();
  if (!ctx) fail(Errc::ParameterConstraintViolated, "universal_p5: b0 is unset");
  if (ctx->p != 5)
    fail(Errc::ParameterConstraintViolated, "universal_p5: parameters must live in characteristic 5");
  if (params.b0.is_zero()) fail(Errc::ParameterConstraintViolated, "universal_p5: b0 must be nonzero");
  const FieldElement b0 = params.b0;
  const FieldElement one = ctx->one();
  auto unit = [&](long long v) { return ctx->from_int(v); };
  auto mono = [](const FieldElement& c, int e) { return Poly::monomial(c, e); };

  std::vector<Poly> fs;
  fs.push_back(mono(one, 6) + mono(unit(2) * (b0.pow(24) + one) / b0.pow(4), 2));

  const FieldElement f2_high = b0.pow(5);
  const FieldElement f2_mid = unit(4) * b0.pow(25);
  const FieldElement f2_low = unit(3) * (unit(4) * b0.pow(48) + one) / b0.pow(3);
  if (n == 2) {
    const FieldElement& b5 = universal_param(params, params.b5, "b5");
    fs.push_back(mono(f2_high, 11) + mono(f2_mid, 7) + mono(f2_low, 3) + mono(b5, 1));
  } else {
    const FieldElement& c7 = universal_param(params, params.c7, "c7");
    fs.push_back(mono(f2_high, 11) + mono(f2_mid, 7) + mono(f2_low, 3) +
                 mono(unit(2) * (c7 - c7.pow(5)) / b0.pow(5), 1));
    const FieldElement f3_linear =
        (n == 3) ? universal_param(params, params.c9, "c9")
                 : unit(2) * (universal_param(params, params.d11, "d11") -
                              params.d11.pow(5)) / b0.pow(5);
    fs.push_back(mono(unit(4) * b0.pow(10), 16) + mono(unit(4) * b0.pow(30), 12) +
                 mono(unit(4) * b0.pow(50), 8) + mono(c7.pow(5), 6) +
                 mono(unit(4) * (b0.pow(72) + one) / b0.pow(2), 4) +
                 mono(unit(2) * c7 * (c7.pow(4) * b0.pow(24) + one) / b0.pow(4), 2) +
                 mono(f3_linear, 1));
    if (n == 4) {
      const FieldElement& d8 = universal_param(params, params.d8, "d8");
      const FieldElement& d11 = universal_param(params, params.d11, "d11");
      const FieldElement& d13 = universal_param(params, params.d13, "d13");
      if (b0.pow(96) != one)
        fail(Errc::ParameterConstraintViolated, "universal_p5: n = 4 requires b0^96 = 1");
      const FieldElement t = d8 - c7;
      const FieldElement t_constraint = unit(2) * t +
                                        (unit(3) * b0.pow(24) + unit(3)) * t.pow(5) +
                                        unit(2) * b0.pow(24) * t.pow(25);
      if (!t_constraint.is_zero())
        fail(Errc::ParameterConstraintViolated,
             "universal_p5: n = 4 requires 2t + (3 b0^24 + 3) t^5 + 2 b0^24 t^25 = 0 "
             "where t = d8 - c7");
      const FieldElement b24 = b0.pow(24);
      const FieldElement b48 = b0.pow(48);
      const FieldElement inv_b3 = b0.pow(3).inv();
      const FieldElement cubic = (b24 + b48) * inv_b3 * c7.pow(25) +
                                 (unit(2) + unit(4) * b24 + unit(4) * b48) * inv_b3 * c7.pow(5) +
                                 unit(3) * c7 * inv_b3 +
                                 (unit(4) * b48 + unit(4) * b24) * inv_b3 * d8.pow(25) +
                                 (b24 + unit(3) + unit(3) * b48) * inv_b3 * d8.pow(5);
      fs.push_back(mono(unit(2) * b0.pow(15), 21) + mono(b0.pow(35), 17) +
                   mono(unit(4) * b0.pow(55), 13) + mono(d8.pow(5) * b0.pow(5), 11) +
                   mono(unit(3) * b0.pow(75), 9) +
                   mono(unit(4) * d8.pow(25) * b0.pow(25) + unit(4) * b0.pow(25) * c7.pow(5) +
                            b0.pow(25) * c7.pow(25),
                        7) +
                   mono(d11.pow(5), 6) + mono(cubic, 3) +
                   mono(unit(2) * d11 * (d11.pow(4) * b0.pow(24) + one) / b0.pow(4), 2) +
                   mono(d13, 1));
    }
  }

  std::vector<ASClass> classes;
  classes.reserve(fs.size());
  for (const Poly& f : fs) classes.push_back(reduce(f));
  auto [ext, v_basis] = find_stable_translations(classes);
  return make_cover_spec(ext, embed_all(fs, ext), v_basis);
}

bool iso_criterion_n2(const UniversalParams& a, const UniversalParams& b) {
  if (!a.b0.ctx() || !b.b0.ctx() || a.b0.is_zero() || b.b0.is_zero())
    fail(Errc::ParameterConstraintViolated, "iso_criterion_n2: both b0 must be set and nonzero");
  if (!a.b0.ctx()->same_field(*b.b0.ctx()))
    fail(Errc::FieldMismatch, "iso_criterion_n2: parameters must live in one field");
  universal_param(a, a.b5, "b5");
  universal_param(b, b.b5, "b5");
  const FieldElement r = b.b0 / a.b0;
  if (!r.pow(24).is_one()) return false;
  const FieldElement scaled = r * a.b5;
  return b.b5 == scaled || b.b5 == -scaled;
}

}  // namespace wildcover
