#pragma once

// Constructors for the explicit families of verified covers: the length-n
// towers built from powers of wp(X) (with a Witt-vector lift supplying the
// last function when n = p-1), base change by a separable additive polynomial,
// towers with proportional additive parts and trivial representation, and the
// hard-coded universal towers for p = 5.

#include "wildcover/cover.hpp"

namespace wildcover {

// Reduction mod p of ((X^p - X)^p - X^{p^2} + X^p) / p!, computed over the
// integers: expands the power, certifies that every coefficient is divisible
// by p exactly once, divides by p, then multiplies by the inverse of (p-1)!
// mod p.  The result is monic of degree 1 + (p-1)p with support coprime to p.
// Errors OutOfRange (p must be an odd prime), DivisibilityViolation (guards
// against an arithmetic bug; unreachable for valid p).
Poly witt_g_last(int p);

// T(X, y) = sum_{i=1}^{p-1} ((-1)^{i+1} / i) X^i y^{p-i}, the mod-p reduction
// of ((X + y)^p - X^p - y^p) / p.  Satisfies the telescoping identity
// sum_{i=0}^{p-1} T(X + iy, y) = -y^p.  Errors OutOfRange when the
// characteristic of y's field is 2.
Poly t_polynomial(const FieldElement& y);

// The length-n tower f_i = red(S(X)^{i+1} / (i+1)!) for i <= p-2 (f_{p-1} =
// red(witt_g_last(p)) when n = p-1), with every function scaled by the single
// unit of F_p that makes f_1 monic, over the splitting field of wp o wp with
// V = Z(wp o wp) (dimension 2).  Requires p an odd prime and 1 <= n <= p-1;
// errors OutOfRange.
CoverSpec special_family(int p, int n);

// Precomposition with a separable additive polynomial S0 over the spec's
// ambient field: f_i <- red(f_i(S0(X))) and V <- the preimage S0^{-1}(V),
// regenerated over the splitting field of subspace_poly(V) o S0.  S0 = X
// returns the spec unchanged.  Digit-sum levels are preserved, the new v is
// old v + deg_F S0, and the result verifies whenever the input does.  Errors
// NotSeparable, FieldMismatch.
CoverSpec base_change(const CoverSpec& spec, const TwistedPoly& S0);

// f_i = X * (gamma_i S1)(X) + c_i X with gamma_1 = 1, over the splitting
// field of the palindromic companion of f_1, with V = its kernel (dimension
// 2s).  All f_i share that kernel, the representation is trivial, and
// |G| / g^2 = 4 p^n / (p^n - 1)^2 independently of s.  Requirements: d >= 1
// divides s, n = gammas.size() <= d, S1 of F-degree s supported on F-degrees
// that are multiples of d, gammas F_p-independent elements of F_{p^d} in the
// same field as S1, constants empty (all zero) or one per gamma.  Errors
// DivisibilityViolation, OutOfRange, WrongShape, SupportViolation,
// DependentGammas, Mismatch, FieldMismatch.
CoverSpec prop43_family(int s, int d, const std::vector<FieldElement>& gammas,
                        const TwistedPoly& S1,
                        const std::vector<FieldElement>& constants = {});

// Parameters for the universal p = 5 towers.  b0 is required for every n and
// must be nonzero; the other fields are read only for the n listed next to
// them, and every field that is read must live in b0's field.
struct UniversalParams {
  FieldElement b0;            // n = 2, 3, 4
  FieldElement b5;            // n = 2
  FieldElement c7;            // n = 3, 4
  FieldElement c9;            // n = 3
  FieldElement d8, d11, d13;  // n = 4
};

// The universal towers for p = 5 and n in {2, 3, 4}: emits the closed-form
// functions f_1..f_n in the parameters, then computes the full group of
// stable translations (always of dimension 2) over the extension where it
// becomes rational.  For n = 4 the parameters must satisfy b0^96 = 1 and
// 2t + (3 b0^24 + 3) t^5 + 2 b0^24 t^25 = 0 where t = d8 - c7.  Errors
// OutOfRange (n), ParameterConstraintViolated, FieldMismatch.
CoverSpec universal_p5(int n, const UniversalParams& params);

// Whether two parameter pairs (b0, b5) and (b0', b5') of the n = 2 universal
// tower cut out isomorphic curves: (b0'/b0)^24 = 1 and b5' = +-(b0'/b0) b5.
// Errors ParameterConstraintViolated when either b0 is zero or unset,
// FieldMismatch when the parameters live in different fields.
bool iso_criterion_n2(const UniversalParams& a, const UniversalParams& b);

}  // namespace wildcover
