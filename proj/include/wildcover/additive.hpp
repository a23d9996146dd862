#pragma once

// Additive polynomials sum a_i X^{p^i} represented by their twisted
// coefficient vectors (a_0, ..., a_s), i.e. elements of the twisted ring k{F}
// with the commutation rule F * a = a^p * F.  Multiplication is composition of
// the underlying additive maps.

#include "wildcover/poly.hpp"

namespace wildcover {

class TwistedPoly {
 public:
  TwistedPoly() = default;
  explicit TwistedPoly(CtxPtr ctx) : ctx_(std::move(ctx)) {}
  TwistedPoly(CtxPtr ctx, std::vector<FieldElement> fcoeffs);

  static TwistedPoly zero(CtxPtr ctx) { return TwistedPoly(std::move(ctx)); }
  // The identity map X (i.e. F^0).
  static TwistedPoly identity(const CtxPtr& ctx);
  // F^k as a twisted monomial with coefficient c.
  static TwistedPoly f_monomial(const FieldElement& c, int k);
  // X^p - X.
  static TwistedPoly wp(const CtxPtr& ctx);

  const CtxPtr& ctx() const { return ctx_; }
  int deg_f() const { return int(a_.size()) - 1; }  // -1 for zero
  bool is_zero() const { return a_.empty(); }
  FieldElement coeff(int i) const;
  const std::vector<FieldElement>& coeffs() const { return a_; }
  bool separable() const { return !a_.empty() && !a_[0].is_zero(); }

  TwistedPoly operator+(const TwistedPoly& o) const;
  TwistedPoly operator-(const TwistedPoly& o) const;
  TwistedPoly operator-() const;
  // Twisted product = composition: (this o o)(X).
  TwistedPoly operator*(const TwistedPoly& o) const;
  TwistedPoly scaled(const FieldElement& s) const;  // s * P (left coefficient scale)
  TwistedPoly monic() const;                        // errors ZeroPolynomial
  bool operator==(const TwistedPoly& o) const;
  bool operator!=(const TwistedPoly& o) const { return !(*this == o); }

  FieldElement evaluate(const FieldElement& x) const;
  Poly to_poly() const;
  TwistedPoly embedded(const CtxPtr& target) const;

  // Rendered in the F variable, e.g. "F^2 + 3*F + 1".
  std::string str() const;

 private:
  void trim();
  CtxPtr ctx_;
  std::vector<FieldElement> a_;  // a_[i] multiplies X^{p^i}
};

// True iff the polynomial is additive (support only at p-power exponents, no
// constant term); from_poly errors NotAdditive when it is not.
bool is_additive(const Poly& f);
TwistedPoly from_poly(const Poly& f);

// For f = X*S(X) + c*X with S = sum_{j<=s} a_j F^j nonzero and a_s != 0:
// the palindromic companion (1/a_s) * sum_k (a_k^{p^s} F^{s+k} + a_k^{p^{s-k}} F^{s-k}),
// an additive polynomial of F-degree 2s whose kernel is the set of translations
// y with f(X+y) - f(X) trivial modulo wp and constants.  The X-coefficient c is
// irrelevant and may be anything; errors WrongShape for other supports.
TwistedPoly palindromic(const Poly& f);

// prod_{v in span(basis)} (X - v) as a (monic, separable) additive polynomial.
// Errors DependentBasis if the basis is F_p-dependent.
TwistedPoly subspace_poly(const std::vector<FieldElement>& basis);

// Splitting field and kernel basis of a separable additive polynomial: builds
// F_{p^{m'}} for the minimal splitting degree m' <= bound and returns the
// rref-normalized kernel basis there (size = deg_F P).
std::pair<CtxPtr, std::vector<FieldElement>> zero_set(const TwistedPoly& P, int bound = 256);

// Decomposition S_i = gamma_i * S_1 with gamma_1 = 1: recovers the gammas,
// the degree d of the subfield they generate, and checks d | s, that S_1 is
// supported on F-degrees that are multiples of d, and that the gammas are
// F_p-independent.  Convention: d = s when there is a single function.
// Errors: NotProportional, SupportViolation, DependentGammas.
struct GammaDecomposition {
  int d = 0;
  std::vector<FieldElement> gammas;  // gammas[0] = 1
  TwistedPoly s1;
};
GammaDecomposition gamma_decomposition(const std::vector<TwistedPoly>& s_list);

}  // namespace wildcover
