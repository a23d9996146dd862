// Group-theoretic layer: the Lambda filtration of a commuting unitriangular
// family, maximal-jump normalization, and an exact automorphism engine for
// covers W_i^p - W_i = f_i(X) of the affine line.
//
// An automorphism is stored as (y, M, P, Z) acting by
//     X   |->  X + y,
//     W_i |->  sum_j M(i,j) W_j + P_i(X) + Z_i,
// with M lower unitriangular over F_p, the P_i constant-free polynomials and
// the Z_i field constants (so the decomposition is unique).  Composition runs
// right to left: compose(s, t) maps x to s(t(x)).
#pragma once

#include <cstddef>
#include <vector>

#include "wildcover/cover.hpp"

namespace wildcover {

// ---------------------------------------------------------------------------
// Commuting lower-unitriangular families Phi(y) and the Lambda filtration.

struct PhiGenerator {
  FieldElement y;  // label only; the matrix carries the action
  FpMat phi;       // n x n lower unitriangular over F_p
};

struct PhiFamily {
  int n = 0;
  std::vector<PhiGenerator> generators;
};

// Validates shape (square n x n, lower unitriangular, consistent p) and
// pairwise commutation.  Errors: Mismatch.
PhiFamily make_phi_family(int n, std::vector<PhiGenerator> generators);

// Conjugation family of a verified cover: Phi(y) is the transpose of the
// upper-unitriangular representation matrix L(y).
PhiFamily phi_family_from_matrices(const std::vector<RepMatrix>& matrices);

// Ascending chain Lambda_1 <= Lambda_2 <= ... <= F_p^n where
//   Lambda_i = { v : (Phi(y) - I) v in Lambda_{i-1} for every generator y },
// returned as one matrix per step with basis vectors as columns; the last
// entry is the full space.  The chain is independent of the generator order.
std::vector<FpMat> lambda_filtration(const PhiFamily& fam);
std::vector<int> lambda_dims(const PhiFamily& fam);

// True when every subdiagonal linear form y -> Phi(y)(i+1, i) is nonzero on
// the generators, i.e. the filtration jumps at every step.
bool max_jumps(const PhiFamily& fam);

// Diagonal change of basis making all subdiagonal forms equal to the first
// one.  diag lists d_1..d_n with d_1 = 1 and d_{i+1} = d_i / lambda_i, where
// Phi(.)(i+1, i) = lambda_i * Phi(.)(2, 1) as forms on the generators;
// ell_on_gens lists the common form's value on each generator, and
// `normalized` is the conjugated family diag(d) Phi diag(d)^{-1}.
// Errors: NotMaxJumps when some subdiagonal form vanishes identically.
struct HomothetyNormalization {
  std::vector<Residue> diag;
  std::vector<Residue> ell_on_gens;
  PhiFamily normalized;
};
HomothetyNormalization homothety_normalize(const PhiFamily& fam);

// ---------------------------------------------------------------------------
// Explicit automorphisms.

struct Aut {
  FieldElement y;               // translation part of the action on X
  FpMat M;                      // n x n lower unitriangular over F_p
  std::vector<Poly> P;          // n polynomials, zero constant term
  std::vector<FieldElement> Z;  // n constants

  int n() const { return M.rows; }
  const CtxPtr& ctx() const { return y.ctx(); }
  bool is_identity() const;
  bool operator==(const Aut& o) const;
  bool operator!=(const Aut& o) const { return !(*this == o); }
  // Canonical serialization (equal keys iff equal automorphisms).
  std::vector<Residue> key() const;
};

// Normalizes (constant terms of P move into Z) and validates: everything over
// one field, M lower unitriangular, sizes consistent.  Errors: Mismatch,
// FieldMismatch.
Aut make_aut(const FieldElement& y, FpMat M, std::vector<Poly> P, std::vector<FieldElement> Z);
Aut aut_identity(const CtxPtr& ctx, int n);

Aut compose(const Aut& s, const Aut& t);  // x -> s(t(x))
Aut inverse(const Aut& s);
Aut conjugate(const Aut& g, const Aut& x);   // g x g^{-1}
Aut commutator(const Aut& a, const Aut& b);  // a^{-1} b^{-1} a b
Aut power(const Aut& s, long long e);        // e may be negative

// Multiplicative order, by iterated composition.  Errors: OrderBoundExceeded
// past p^3 steps.
long long element_order(const Aut& s);

// All products of the generators (BFS; a finite group since every generator
// has finite order).  Errors: BoundExceeded when more than `bound` distinct
// elements appear.  The identity is always included.
std::vector<Aut> group_closure(const std::vector<Aut>& gens, std::size_t bound = 1000000);

// Elements of `closure` commuting with every generator.
std::vector<Aut> center(const std::vector<Aut>& closure, const std::vector<Aut>& gens);

// Derived subgroup: closure of the generator commutators under products and
// conjugation by the generators.  Errors: BoundExceeded.
std::vector<Aut> derived_subgroup(const std::vector<Aut>& gens, std::size_t bound = 1000000);

// Least common multiple of the element orders.
long long exponent_of(const std::vector<Aut>& elements);

// Exponent of closure modulo a central subgroup (order of the image coset is
// the least k with s^k in the subgroup).
long long quotient_exponent(const std::vector<Aut>& closure, const std::vector<Aut>& subgroup);

// Checks that the central elements of `closure` are exactly those of the
// shape y = 0, M = I, P = 0, Z_1 = ... = Z_{n-1} = 0, Z_n in F_p.
bool center_characterization_check(const std::vector<Aut>& closure, const std::vector<Aut>& gens);

// ---------------------------------------------------------------------------
// Generators of the automorphism group of a verified cover.

// One translation generator per V-basis element y: M = transpose(L(y)), the
// P_i solve wp(P_i) = f_i(X+y) - sum_j L(y)(j,i) f_j up to a constant, and
// Z_i is a Witt root of that constant.  When some constant has a nonzero
// trace the whole construction is lifted to the degree-p extension of the
// ambient field (where every trace vanishes).  Class generators e_i fix X and
// send W_i to W_i + 1.
struct GeneratorSet {
  CoverSpec spec;                 // adapted functions, possibly re-embedded
  VerifyResult verification;      // computed over spec's ambient field
  std::vector<Aut> translations;  // one per V-basis element, same order
  std::vector<Aut> class_gens;    // n elements e_1..e_n
  std::vector<Aut> all() const;   // translations then class generators
};
GeneratorSet build_generators(const CoverSpec& spec);

// ---------------------------------------------------------------------------
// Summary invariants of the automorphism group of a cover.

struct GroupReport {
  long long order = 0;
  long long exponent = 0;
  long long center_order = 0;
  long long derived_order = 0;
  std::vector<int> lambda_dims;
  bool max_jump = false;
  bool center_shape_ok = false;  // center_characterization_check
};
GroupReport group_report(const CoverSpec& spec, std::size_t bound = 1000000);

}  // namespace wildcover
