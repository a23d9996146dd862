#pragma once

// Dense univariate polynomials over a finite field, with the translation
// difference operator f(X+y) - f(X) and composition.  Exponents are machine
// integers; binomial coefficients mod p are evaluated digit-wise (Lucas), so
// translation works at any exponent without big-integer arithmetic.

#include "wildcover/ff.hpp"

namespace wildcover {

// C(a, k) mod p for a, k >= 0 via base-p digits.
Residue binom_mod_p(long long a, long long k, int p);

class Poly {
 public:
  Poly() = default;
  explicit Poly(CtxPtr ctx) : ctx_(std::move(ctx)) {}
  Poly(CtxPtr ctx, std::vector<FieldElement> coeffs);

  static Poly zero(CtxPtr ctx) { return Poly(std::move(ctx)); }
  static Poly monomial(const FieldElement& c, int exp);
  // Polynomial with small integer coefficients, coeffs[i] multiplying X^i.
  static Poly from_ints(const CtxPtr& ctx, const std::vector<long long>& coeffs);

  const CtxPtr& ctx() const { return ctx_; }
  int degree() const { return int(c_.size()) - 1; }  // -1 for the zero polynomial
  bool is_zero() const { return c_.empty(); }
  // Coefficient of X^i (zero element beyond the degree).
  FieldElement coeff(int i) const;
  const std::vector<FieldElement>& coeffs() const { return c_; }
  FieldElement leading() const;  // errors ZeroPolynomial on 0

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator-() const;
  Poly operator*(const Poly& o) const;
  Poly scaled(const FieldElement& s) const;
  Poly pow(int e) const;
  bool operator==(const Poly& o) const;
  bool operator!=(const Poly& o) const { return !(*this == o); }

  FieldElement evaluate(const FieldElement& x) const;
  // f(g(X))
  Poly compose(const Poly& g) const;
  // f^p: exponents scaled by p, coefficients raised to the p-th power.
  Poly frobenius_map() const;
  // Coefficient-wise field embedding into a larger field.
  Poly embedded(const CtxPtr& target) const;

  // f(X + y) - f(X); linear in f, and Delta_y o Delta_z = Delta_z o Delta_y.
  Poly delta(const FieldElement& y) const;
  // f(X + y)
  Poly translate(const FieldElement& y) const;

  // Rendered like "X^11 + 4*t*X^7 + (2*t + 1)*X^3 + 3"; "0" for zero.
  std::string str() const;

 private:
  void trim();
  CtxPtr ctx_;
  std::vector<FieldElement> c_;  // index = exponent; invariant: back() != 0
};

}  // namespace wildcover
