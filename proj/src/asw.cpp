#include "wildcover/asw.hpp"

namespace wildcover {

int digit_sum(long long a, int p) {
  if (a < 0) fail(Errc::OutOfRange, "digit sum of negative exponent");
  int s = 0;
  while (a > 0) {
    s += int(a % p);
    a /= p;
  }
  return s;
}

WpSplit wp_split(const Poly& f) {
  const CtxPtr& ctx = f.ctx();
  int p = ctx->p;
  std::vector<FieldElement> work(f.coeffs());
  std::vector<FieldElement> pre(work.size(), ctx->zero());
  // descending scan: the rewrite target a/p is revisited later in the same pass
  for (int a = int(work.size()) - 1; a >= 1; --a) {
    if (work[a].is_zero() || a % p != 0) continue;
    FieldElement root = ctx->frobenius(work[a], -1);  // c^{1/p}
    pre[a / p] = pre[a / p] + root;
    work[a / p] = work[a / p] + root;
    work[a] = ctx->zero();
  }
  WpSplit out;
  out.constant = work.empty() ? ctx->zero() : work[0];
  if (!work.empty()) work[0] = ctx->zero();
  out.reduced = Poly(ctx, std::move(work));
  out.preimage = Poly(ctx, std::move(pre));
  return out;
}

ASClass reduce(const Poly& f) {
  WpSplit s = wp_split(f);
  ASClass out;
  out.reduced = std::move(s.reduced);
  out.const_class = f.ctx()->trace_to_prime(s.constant);
  return out;
}

int dp_order(const Poly& f) {
  if (f.is_zero()) return kDpNegInf;
  int best = 0;
  for (int i = 0; i <= f.degree(); ++i)
    if (!f.coeff(i).is_zero()) best = std::max(best, digit_sum(i, f.ctx()->p));
  return best;
}

int sigma_level(const Poly& f) {
  if (f.is_zero()) fail(Errc::ZeroPolynomial, "sigma level of the zero polynomial");
  return dp_order(f);
}

Poly monomial_orbit_project(const Poly& f, long long a0) {
  const CtxPtr& ctx = f.ctx();
  if (a0 < 1 || a0 % ctx->p == 0) fail(Errc::OutOfRange, "orbit base must be >= 1 and coprime to p");
  Poly out(ctx);
  long long e = a0;
  while (e <= f.degree()) {
    if (!f.coeff(int(e)).is_zero()) out = out + Poly::monomial(f.coeff(int(e)), int(e));
    if (e > f.degree() / ctx->p) break;
    e *= ctx->p;
  }
  return out;
}

}  // namespace wildcover
