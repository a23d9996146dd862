#include "wildcover/additive.hpp"

#include <sstream>

namespace wildcover {

TwistedPoly::TwistedPoly(CtxPtr ctx, std::vector<FieldElement> fcoeffs)
    : ctx_(std::move(ctx)), a_(std::move(fcoeffs)) {
  for (const auto& c : a_)
    if (!c.ctx()->same_field(*ctx_)) fail(Errc::FieldMismatch, "twisted coefficient field");
  trim();
}

void TwistedPoly::trim() {
  while (!a_.empty() && a_.back().is_zero()) a_.pop_back();
}

TwistedPoly TwistedPoly::identity(const CtxPtr& ctx) { return TwistedPoly(ctx, {ctx->one()}); }

TwistedPoly TwistedPoly::f_monomial(const FieldElement& c, int k) {
  if (k < 0) fail(Errc::OutOfRange, "negative F-degree");
  std::vector<FieldElement> a(k + 1, c.ctx()->zero());
  a[k] = c;
  return TwistedPoly(c.ctx(), std::move(a));
}

TwistedPoly TwistedPoly::wp(const CtxPtr& ctx) { return TwistedPoly(ctx, {ctx->from_int(-1), ctx->one()}); }

FieldElement TwistedPoly::coeff(int i) const {
  if (i < 0) fail(Errc::BadIndex, "negative F-degree");
  if (i >= (int)a_.size()) return ctx_->zero();
  return a_[i];
}

TwistedPoly TwistedPoly::operator+(const TwistedPoly& o) const {
  if (!ctx_->same_field(*o.ctx_)) fail(Errc::FieldMismatch, "twisted addition");
  TwistedPoly r(ctx_);
  r.a_.resize(std::max(a_.size(), o.a_.size()), ctx_->zero());
  for (size_t i = 0; i < r.a_.size(); ++i) {
    if (i < a_.size()) r.a_[i] = r.a_[i] + a_[i];
    if (i < o.a_.size()) r.a_[i] = r.a_[i] + o.a_[i];
  }
  r.trim();
  return r;
}

TwistedPoly TwistedPoly::operator-(const TwistedPoly& o) const { return *this + (-o); }

TwistedPoly TwistedPoly::operator-() const {
  TwistedPoly r = *this;
  for (auto& c : r.a_) c = -c;
  return r;
}

TwistedPoly TwistedPoly::operator*(const TwistedPoly& o) const {
  if (!ctx_->same_field(*o.ctx_)) fail(Errc::FieldMismatch, "twisted product");
  if (is_zero() || o.is_zero()) return TwistedPoly(ctx_);
  TwistedPoly r(ctx_);
  r.a_.assign(a_.size() + o.a_.size() - 1, ctx_->zero());
  for (size_t i = 0; i < a_.size(); ++i) {
    if (a_[i].is_zero()) continue;
    for (size_t j = 0; j < o.a_.size(); ++j) {
      if (o.a_[j].is_zero()) continue;
      // a F^i * b F^j = a * b^{p^i} F^{i+j}
      r.a_[i + j] = r.a_[i + j] + a_[i] * ctx_->frobenius(o.a_[j], (long long)i);
    }
  }
  r.trim();
  return r;
}

TwistedPoly TwistedPoly::scaled(const FieldElement& s) const {
  TwistedPoly r(ctx_);
  if (s.is_zero()) return r;
  r.a_ = a_;
  for (auto& c : r.a_) c = s * c;
  return r;
}

TwistedPoly TwistedPoly::monic() const {
  if (is_zero()) fail(Errc::ZeroPolynomial, "monic normalization of zero");
  return scaled(a_.back().inv());
}

bool TwistedPoly::operator==(const TwistedPoly& o) const {
  if (!ctx_->same_field(*o.ctx_)) return false;
  if (a_.size() != o.a_.size()) return false;
  for (size_t i = 0; i < a_.size(); ++i)
    if (!(a_[i] == o.a_[i])) return false;
  return true;
}

FieldElement TwistedPoly::evaluate(const FieldElement& x) const {
  FieldElement acc = ctx_->zero();
  FieldElement cur = x;
  for (size_t i = 0; i < a_.size(); ++i) {
    if (!a_[i].is_zero()) acc = acc + a_[i] * cur;
    if (i + 1 < a_.size()) cur = ctx_->frobenius(cur, 1);
  }
  return acc;
}

Poly TwistedPoly::to_poly() const {
  Poly r(ctx_);
  long long e = 1;
  for (size_t i = 0; i < a_.size(); ++i) {
    if (!a_[i].is_zero()) {
      if (e > (1 << 26)) fail(Errc::OutOfRange, "expanded additive polynomial too large");
      r = r + Poly::monomial(a_[i], int(e));
    }
    e *= ctx_->p;
  }
  return r;
}

TwistedPoly TwistedPoly::embedded(const CtxPtr& target) const {
  TwistedPoly r(target);
  r.a_.reserve(a_.size());
  for (const auto& c : a_) r.a_.push_back(embed(c, target));
  r.trim();
  return r;
}

std::string TwistedPoly::str() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = deg_f(); i >= 0; --i) {
    if (a_[i].is_zero()) continue;
    if (!first) os << " + ";
    std::string cs = a_[i].str();
    bool composite = cs.find(" + ") != std::string::npos;
    if (i == 0) {
      os << (composite ? "(" + cs + ")" : cs);
    } else {
      if (!a_[i].is_one()) os << (composite ? "(" + cs + ")" : cs) << "*";
      os << "F";
      if (i > 1) os << "^" << i;
    }
    first = false;
  }
  return os.str();
}

bool is_additive(const Poly& f) {
  if (f.is_zero()) return true;
  int p = f.ctx()->p;
  for (int i = 0; i <= f.degree(); ++i) {
    if (f.coeff(i).is_zero()) continue;
    long long e = i;
    if (e == 0) return false;
    while (e % p == 0) e /= p;
    if (e != 1) return false;
  }
  return true;
}

TwistedPoly from_poly(const Poly& f) {
  if (!is_additive(f)) fail(Errc::NotAdditive, "support not contained in p-power exponents");
  TwistedPoly r(f.ctx());
  if (f.is_zero()) return r;
  std::vector<FieldElement> a;
  long long e = 1;
  while (e <= f.degree()) {
    a.push_back(f.coeff(int(e)));
    e *= f.ctx()->p;
  }
  return TwistedPoly(f.ctx(), std::move(a));
}

TwistedPoly palindromic(const Poly& f) {
  const CtxPtr& ctx = f.ctx();
  int p = ctx->p;
  if (f.is_zero()) fail(Errc::WrongShape, "zero polynomial has no palindromic companion");
  // extract S from f = X*S(X) + c*X: exponent 1+p^j carries the F^j coefficient
  std::vector<FieldElement> s;
  for (int i = 0; i <= f.degree(); ++i) {
    if (f.coeff(i).is_zero()) continue;
    if (i == 1) continue;  // the c*X term
    long long e = i - 1;
    int j = 0;
    while (e > 1 && e % p == 0) {
      e /= p;
      ++j;
    }
    if (e != 1) fail(Errc::WrongShape, "exponent " + std::to_string(i) + " is not 1 + p^j");
    if ((int)s.size() <= j) s.resize(j + 1, ctx->zero());
    s[j] = f.coeff(i);
  }
  while (!s.empty() && s.back().is_zero()) s.pop_back();
  if (s.empty()) fail(Errc::WrongShape, "no additive part: f = c*X");
  int sdeg = int(s.size()) - 1;
  FieldElement lead_inv = s.back().inv();
  std::vector<FieldElement> ad(2 * sdeg + 1, ctx->zero());
  for (int k = 0; k <= sdeg; ++k) {
    if (s[k].is_zero()) continue;
    // a_k^{p^s} F^{s+k}
    ad[sdeg + k] = ad[sdeg + k] + lead_inv * ctx->frobenius(s[k], sdeg);
    // a_k^{p^{s-k}} F^{s-k}
    ad[sdeg - k] = ad[sdeg - k] + lead_inv * ctx->frobenius(s[k], sdeg - k);
  }
  return TwistedPoly(ctx, std::move(ad));
}

TwistedPoly subspace_poly(const std::vector<FieldElement>& basis) {
  if (basis.empty()) fail(Errc::OutOfRange, "subspace_poly of empty basis");
  const CtxPtr& ctx = basis[0].ctx();
  TwistedPoly P = TwistedPoly::identity(ctx);
  for (const auto& v : basis) {
    FieldElement pv = P.evaluate(v);
    if (pv.is_zero()) fail(Errc::DependentBasis, "basis vector lies in span of previous ones");
    // P_{V + <v>} = P^p - P(v)^{p-1} P
    TwistedPoly Pp = TwistedPoly::f_monomial(ctx->one(), 1) * P;
    P = Pp - P.scaled(pv.pow(ctx->p - 1));
  }
  return P;
}

std::pair<CtxPtr, std::vector<FieldElement>> zero_set(const TwistedPoly& P, int bound) {
  if (!P.separable()) fail(Errc::NotSeparable, "zero_set needs a separable additive polynomial");
  int md = minimal_splitting_degree(P.coeffs(), bound);
  CtxPtr ext = FieldCtx::get(P.ctx()->p, md);
  std::vector<FieldElement> cc;
  cc.reserve(P.coeffs().size());
  for (const auto& a : P.coeffs()) cc.push_back(embed(a, ext));
  return {ext, ext->additive_kernel(cc)};
}

GammaDecomposition gamma_decomposition(const std::vector<TwistedPoly>& s_list) {
  if (s_list.empty()) fail(Errc::OutOfRange, "empty list");
  const TwistedPoly& s1 = s_list[0];
  const CtxPtr& ctx = s1.ctx();
  if (s1.is_zero()) fail(Errc::ZeroPolynomial, "S_1 = 0");
  int s = s1.deg_f();
  int n = int(s_list.size());

  GammaDecomposition out;
  out.s1 = s1;
  out.gammas.push_back(ctx->one());
  for (int i = 1; i < n; ++i) {
    const TwistedPoly& si = s_list[i];
    if (!si.ctx()->same_field(*ctx)) fail(Errc::FieldMismatch, "mixed coefficient fields");
    if (si.deg_f() != s) fail(Errc::NotProportional, "F-degrees differ");
    FieldElement gamma = ctx->zero();
    bool found = false;
    for (int j = 0; j <= s; ++j) {
      if (s1.coeff(j).is_zero()) {
        if (!si.coeff(j).is_zero()) fail(Errc::NotProportional, "support of S_" + std::to_string(i + 1) + " not contained in support of S_1");
        continue;
      }
      FieldElement ratio = si.coeff(j) / s1.coeff(j);
      if (!found) {
        gamma = ratio;
        found = true;
      } else if (!(ratio == gamma)) {
        fail(Errc::NotProportional, "coefficient ratios of S_" + std::to_string(i + 1) + " are inconsistent");
      }
    }
    out.gammas.push_back(gamma);
  }

  // d = degree of the subfield generated by the gammas; d = s for n = 1
  if (n == 1) {
    out.d = s;
  } else {
    for (int d = 1; d <= ctx->m; ++d) {
      if (ctx->m % d != 0) continue;
      bool fixed = true;
      for (const auto& g : out.gammas)
        if (!(ctx->frobenius(g, d) == g)) { fixed = false; break; }
      if (fixed) { out.d = d; break; }
    }
    if (out.d == 0) fail(Errc::NotProportional, "gammas generate no proper subfield");  // unreachable: d = m always works
  }

  if (out.d == 0 || s % out.d != 0)
    fail(Errc::SupportViolation, "subfield degree d = " + std::to_string(out.d) + " does not divide s = " + std::to_string(s));
  for (int j = 0; j <= s; ++j)
    if (!s1.coeff(j).is_zero() && j % out.d != 0)
      fail(Errc::SupportViolation, "S_1 has F-degree " + std::to_string(j) + " not a multiple of d");

  // F_p-independence of the gammas
  FpMat mat(ctx->p, ctx->m, n);
  for (int i = 0; i < n; ++i)
    for (int r = 0; r < ctx->m; ++r) mat.at(r, i) = out.gammas[i].coeffs()[r];
  if (fp_rank(mat) != n) fail(Errc::DependentGammas, "gammas are F_p-dependent");
  return out;
}

}  // namespace wildcover
