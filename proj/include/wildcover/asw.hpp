#pragma once

// Reduced representatives of polynomials modulo wp(k[X]) = {g^p - g}, and the
// filtration of k[X] by the maximal base-p digit sum of the support.
//
// Rewriting c X^{pa} -> c^{1/p} X^a (a >= 1) realizes subtraction of
// wp(c^{1/p} X^a); iterating yields the unique representative with p-power-free
// support.  The absorbed constant term is kept as its own Artin-Schreier class
// (its trace to F_p), reported separately so instance checks over small fields
// stay exact even though constants vanish modulo wp over the algebraic closure.

#include "wildcover/poly.hpp"

#include <climits>

namespace wildcover {

// d_p(0): below every level.
constexpr int kDpNegInf = INT_MIN;

// Base-p digit sum of a >= 0.
int digit_sum(long long a, int p);

struct ASClass {
  Poly reduced;             // support coprime to p, zero constant term
  Residue const_class = 0;  // trace of the absorbed constant

  bool operator==(const ASClass& o) const { return const_class == o.const_class && reduced == o.reduced; }
  bool operator!=(const ASClass& o) const { return !(*this == o); }
  bool is_zero() const { return const_class == 0 && reduced.is_zero(); }
  // The class is trivial over the algebraic closure (constants always are).
  bool is_zero_geometric() const { return reduced.is_zero(); }
};

// Exact decomposition f = wp(preimage) + reduced + constant with reduced
// p-power-free and constant-free.
struct WpSplit {
  Poly preimage;
  Poly reduced;
  FieldElement constant;
};
WpSplit wp_split(const Poly& f);

ASClass reduce(const Poly& f);

// max digit sum over the support (kDpNegInf for 0).
int dp_order(const Poly& f);

// Smallest n with f in Sigma_n, computed as dp_order; errors ZeroPolynomial.
int sigma_level(const Poly& f);

// Projection onto the monomial orbit {a0 * p^r : r >= 0}; a0 >= 1 coprime to p.
Poly monomial_orbit_project(const Poly& f, long long a0);

}  // namespace wildcover
