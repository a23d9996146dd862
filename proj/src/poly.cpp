#include "wildcover/poly.hpp"

#include <sstream>

namespace wildcover {

Residue binom_mod_p(long long a, long long k, int p) {
  if (k < 0 || k > a) return 0;
  // small Pascal triangle for one-digit binomials
  long long acc = 1;
  while (a > 0 || k > 0) {
    int ad = int(a % p), kd = int(k % p);
    if (kd > ad) return 0;
    long long b = 1;
    for (int i = 0; i < kd; ++i) b = b * (ad - i) / (i + 1);
    acc = (acc * (b % p)) % p;
    a /= p;
    k /= p;
  }
  return Residue(acc);
}

Poly::Poly(CtxPtr ctx, std::vector<FieldElement> coeffs) : ctx_(std::move(ctx)), c_(std::move(coeffs)) {
  for (const auto& c : c_)
    if (!c.ctx()->same_field(*ctx_)) fail(Errc::FieldMismatch, "polynomial coefficient field");
  trim();
}

void Poly::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

Poly Poly::monomial(const FieldElement& c, int exp) {
  if (exp < 0) fail(Errc::OutOfRange, "negative exponent");
  Poly f(c.ctx());
  if (c.is_zero()) return f;
  f.c_.assign(exp + 1, c.ctx()->zero());
  f.c_[exp] = c;
  return f;
}

Poly Poly::from_ints(const CtxPtr& ctx, const std::vector<long long>& coeffs) {
  std::vector<FieldElement> c;
  c.reserve(coeffs.size());
  for (long long v : coeffs) c.push_back(ctx->from_int(v));
  return Poly(ctx, std::move(c));
}

FieldElement Poly::coeff(int i) const {
  if (i < 0) fail(Errc::BadIndex, "negative coefficient index");
  if (i >= (int)c_.size()) return ctx_->zero();
  return c_[i];
}

FieldElement Poly::leading() const {
  if (c_.empty()) fail(Errc::ZeroPolynomial, "leading coefficient of zero");
  return c_.back();
}

Poly Poly::operator+(const Poly& o) const {
  if (!ctx_->same_field(*o.ctx_)) fail(Errc::FieldMismatch, "polynomial addition");
  Poly r(ctx_);
  r.c_.resize(std::max(c_.size(), o.c_.size()), ctx_->zero());
  for (size_t i = 0; i < r.c_.size(); ++i) {
    if (i < c_.size()) r.c_[i] = r.c_[i] + c_[i];
    if (i < o.c_.size()) r.c_[i] = r.c_[i] + o.c_[i];
  }
  r.trim();
  return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& c : r.c_) c = -c;
  return r;
}

Poly Poly::operator*(const Poly& o) const {
  if (!ctx_->same_field(*o.ctx_)) fail(Errc::FieldMismatch, "polynomial product");
  if (is_zero() || o.is_zero()) return Poly(ctx_);
  Poly r(ctx_);
  r.c_.assign(c_.size() + o.c_.size() - 1, ctx_->zero());
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i].is_zero()) continue;
    for (size_t j = 0; j < o.c_.size(); ++j)
      if (!o.c_[j].is_zero()) r.c_[i + j] = r.c_[i + j] + c_[i] * o.c_[j];
  }
  r.trim();
  return r;
}

Poly Poly::scaled(const FieldElement& s) const {
  Poly r(ctx_);
  if (s.is_zero()) return r;
  r.c_ = c_;
  for (auto& c : r.c_) c = c * s;
  return r;
}

Poly Poly::pow(int e) const {
  if (e < 0) fail(Errc::OutOfRange, "negative polynomial power");
  Poly acc = monomial(ctx_->one(), 0), base = *this;
  while (e > 0) {
    if (e & 1) acc = acc * base;
    if (e >>= 1) base = base * base;
  }
  return acc;
}

bool Poly::operator==(const Poly& o) const {
  if (!ctx_->same_field(*o.ctx_)) return false;
  if (c_.size() != o.c_.size()) return false;
  for (size_t i = 0; i < c_.size(); ++i)
    if (!(c_[i] == o.c_[i])) return false;
  return true;
}

FieldElement Poly::evaluate(const FieldElement& x) const {
  FieldElement acc = ctx_->zero();
  for (int i = degree(); i >= 0; --i) acc = acc * x + c_[i];
  return acc;
}

Poly Poly::compose(const Poly& g) const {
  Poly acc(ctx_);
  for (int i = degree(); i >= 0; --i) acc = acc * g + monomial(c_[i], 0);
  return acc;
}

Poly Poly::frobenius_map() const {
  Poly r(ctx_);
  if (is_zero()) return r;
  r.c_.assign(size_t(degree()) * ctx_->p + 1, ctx_->zero());
  for (int i = 0; i <= degree(); ++i)
    if (!c_[i].is_zero()) r.c_[size_t(i) * ctx_->p] = ctx_->frobenius(c_[i], 1);
  r.trim();
  return r;
}

Poly Poly::embedded(const CtxPtr& target) const {
  Poly r(target);
  r.c_.reserve(c_.size());
  for (const auto& c : c_) r.c_.push_back(embed(c, target));
  r.trim();
  return r;
}

Poly Poly::translate(const FieldElement& y) const {
  return *this + delta(y);
}

Poly Poly::delta(const FieldElement& y) const {
  if (!y.ctx()->same_field(*ctx_)) fail(Errc::FieldMismatch, "delta translation point");
  Poly r(ctx_);
  if (is_zero() || y.is_zero()) return r;
  r.c_.assign(c_.size(), ctx_->zero());
  std::vector<FieldElement> ypow = {ctx_->one()};
  for (int a = 0; a <= degree(); ++a) {
    if (c_[a].is_zero()) continue;
    while ((int)ypow.size() <= a) ypow.push_back(ypow.back() * y);
    // (X+y)^a - X^a = sum_{k<a} C(a,k) y^{a-k} X^k, digits filter the support
    for (int k = 0; k < a; ++k) {
      Residue b = binom_mod_p(a, k, ctx_->p);
      if (b == 0) continue;
      r.c_[k] = r.c_[k] + c_[a] * ypow[a - k] * ctx_->from_int(b);
    }
  }
  r.trim();
  return r;
}

std::string Poly::str() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    if (c_[i].is_zero()) continue;
    if (!first) os << " + ";
    std::string cs = c_[i].str();
    bool composite = cs.find(" + ") != std::string::npos;
    if (i == 0) {
      os << (composite ? "(" + cs + ")" : cs);
    } else {
      if (!c_[i].is_one()) os << (composite ? "(" + cs + ")" : cs) << "*";
      os << "X";
      if (i > 1) os << "^" << i;
    }
    first = false;
  }
  return os.str();
}

}  // namespace wildcover
