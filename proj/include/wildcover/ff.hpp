#pragma once

// Exact arithmetic in finite fields F_{p^m}, p a small prime, together with the
// F_p-linear algebra helpers the rest of the library is built on.
//
// A field is described by an immutable FieldCtx (prime p, degree m, monic
// irreducible modulus over F_p) shared via shared_ptr; elements are coefficient
// vectors in the power basis of the residue class t of the variable.  All
// operations are pure: they never mutate a ctx after construction, so contexts
// and elements may be shared freely across threads.

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wildcover {

enum class Errc {
  DivisionByZero,
  FieldMismatch,
  NoRoot,
  BoundExceeded,
  NoEmbedding,
  NotIrreducible,
  NotAdditive,
  NotSeparable,
  WrongShape,
  DependentBasis,
  DependentClasses,
  DependentGammas,
  NotProportional,
  SupportViolation,
  NotStable,
  RepresentationLawViolated,
  OutOfRange,
  OrderBoundExceeded,
  Mismatch,
  ZeroPolynomial,
  BadIndex,
  ParameterConstraintViolated,
  NotMaxJumps,
  DivisibilityViolation,
  ParseError,
};

const char* errc_name(Errc e);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

using Residue = int32_t;  // always normalized to [0, p)

// ---------------------------------------------------------------------------
// Dense matrices over F_p (row major) and the solvers everything else uses.

struct FpMat {
  int p = 0;
  int rows = 0;
  int cols = 0;
  std::vector<Residue> a;  // rows*cols entries in [0, p)

  FpMat() = default;
  FpMat(int p_, int rows_, int cols_) : p(p_), rows(rows_), cols(cols_), a(size_t(rows_) * cols_, 0) {}
  Residue& at(int r, int c) { return a[size_t(r) * cols + c]; }
  Residue at(int r, int c) const { return a[size_t(r) * cols + c]; }
  bool operator==(const FpMat& o) const { return p == o.p && rows == o.rows && cols == o.cols && a == o.a; }
};

FpMat fp_identity(int p, int n);
FpMat fp_mul(const FpMat& x, const FpMat& y);
FpMat fp_sub(const FpMat& x, const FpMat& y);
// Reduces m in place to reduced row echelon form; returns the rank and, if
// pivots != nullptr, the pivot column of each nonzero row.
int fp_rref(FpMat& m, std::vector<int>* pivots = nullptr);
int fp_rank(FpMat m);
// Basis of {v : m v = 0}, each vector of length m.cols.
std::vector<std::vector<Residue>> fp_nullspace(const FpMat& m);
// One solution of m x = b, or nullopt if inconsistent.
std::optional<std::vector<Residue>> fp_solve(const FpMat& m, const std::vector<Residue>& b);
FpMat fp_inverse(const FpMat& m);  // errors NotIrreducible-free: DivisionByZero if singular

// ---------------------------------------------------------------------------

struct FieldCtx;
using CtxPtr = std::shared_ptr<const FieldCtx>;

class FieldElement {
 public:
  FieldElement() = default;
  FieldElement(CtxPtr ctx, std::vector<Residue> coeffs);

  const CtxPtr& ctx() const { return ctx_; }
  const std::vector<Residue>& coeffs() const { return c_; }
  bool is_zero() const;
  bool is_one() const;
  // True iff the element lies in the prime subfield F_p.
  bool in_prime_field() const;
  // The residue when the element lies in F_p; errors OutOfRange otherwise.
  Residue as_prime() const;

  FieldElement operator+(const FieldElement& o) const;
  FieldElement operator-(const FieldElement& o) const;
  FieldElement operator-() const;
  FieldElement operator*(const FieldElement& o) const;
  FieldElement inv() const;           // errors DivisionByZero on 0
  FieldElement operator/(const FieldElement& o) const { return *this * o.inv(); }
  FieldElement pow(long long e) const;  // negative e inverts first
  bool operator==(const FieldElement& o) const;
  bool operator!=(const FieldElement& o) const { return !(*this == o); }
  // Total order used wherever a deterministic choice is needed:
  // lexicographic on the coefficient vector (c_0, ..., c_{m-1}).
  bool operator<(const FieldElement& o) const;

  // Rendered as a polynomial in t, e.g. "3*t^2 + t + 4"; "0" for zero.
  std::string str() const;

 private:
  CtxPtr ctx_;
  std::vector<Residue> c_;
};

struct FieldCtx : std::enable_shared_from_this<FieldCtx> {
  int p = 0;
  int m = 0;
  std::vector<Residue> modulus;  // monic, degree m, coefficients in F_p

  // Lexicographically smallest monic irreducible of degree m (coefficient
  // tuples (c_0,...,c_{m-1}) enumerated in ascending base-p counter order).
  static std::vector<Residue> find_irreducible(int p, int m);

  // Deterministic context: modulus = find_irreducible(p, m).  Contexts are
  // cached per (p, m), so repeated calls share one instance.
  static CtxPtr get(int p, int m);
  // Context with an explicit monic modulus (validated irreducible).
  static CtxPtr make(int p, std::vector<Residue> modulus);

  bool same_field(const FieldCtx& o) const { return p == o.p && m == o.m && modulus == o.modulus; }

  FieldElement zero() const;
  FieldElement one() const;
  FieldElement from_int(long long v) const;          // image of an integer
  FieldElement gen() const;                          // residue class t
  FieldElement element(std::vector<Residue> c) const;
  // Element with index i in [0, p^m), digits of i base p as coefficients
  // (element(0)=0, element(1)=1, element(p)=t, ...).  Enumeration order agrees
  // with operator< on elements.
  FieldElement element_by_index(long long i) const;
  long long order() const;  // p^m, errors OutOfRange if it overflows int64

  // a^(p^k); k may be negative or exceed m (reduced mod m).
  FieldElement frobenius(const FieldElement& a, long long k) const;
  // Tr_{F_{p^m}/F_p}(a) as a residue in [0, p).
  Residue trace_to_prime(const FieldElement& a) const;
  // Some z with z^p - z = c (deterministic choice), or error NoRoot when the
  // trace obstruction is nonzero.
  FieldElement artin_schreier_root(const FieldElement& c) const;

  // Matrix (m x m over F_p) of an F_p-linear map given by images of the power
  // basis, and of multiplication by a fixed element.
  FpMat mult_matrix(const FieldElement& a) const;
  const FpMat& frobenius_matrix() const { return frob_; }

  // Kernel of the additive polynomial P(Y) = sum_i coeffs[i] * Y^{p^i} as an
  // F_p-subspace of this field; basis is rref-normalized, hence deterministic.
  std::vector<FieldElement> additive_kernel(const std::vector<FieldElement>& coeffs) const;

 private:
  friend class FieldElement;
  friend struct Embedding;
  FieldCtx() = default;
  void build_tables();
  std::vector<Residue> reduce_product(const std::vector<Residue>& prod) const;

  std::vector<std::vector<Residue>> xpow_;  // t^{m+k} mod modulus, k in [0, m-1]
  FpMat frob_;                              // matrix of x -> x^p
};

// Field embedding F_{p^a} -> F_{p^b} for a | b, sending the source generator to
// the smallest root (element order) of the source modulus in the target.
struct Embedding {
  CtxPtr src, dst;
  Embedding(CtxPtr src, CtxPtr dst);  // errors NoEmbedding unless a | b (same p)
  FieldElement operator()(const FieldElement& a) const;

 private:
  std::vector<FieldElement> gen_pow_;  // images of t^i, i < src->m
};

// Convenience wrapper; uses a process-wide embedding cache keyed by the two
// contexts, so hot paths may call it repeatedly.
FieldElement embed(const FieldElement& a, const CtxPtr& target);

// All roots (each exactly once, sorted by element order) of the polynomial
// with the given coefficients (coeffs[i] multiplies Y^i, all in ctx) that lie
// in ctx.  The polynomial need not split; only in-field roots are returned.
std::vector<FieldElement> roots_in_field(const std::vector<FieldElement>& coeffs, const CtxPtr& ctx);

// Smallest m' (a multiple of the coefficient field degree, m' <= bound) such
// that the kernel of the separable additive polynomial P over F_{p^{m'}} has
// full dimension deg_F P.  Errors: NotSeparable, BoundExceeded.
int minimal_splitting_degree(const std::vector<FieldElement>& coeffs, int bound = 256);

}  // namespace wildcover
