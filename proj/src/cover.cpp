#include "wildcover/cover.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace wildcover {

namespace {

long long ipow(long long b, int e) {
  long long r = 1;
  while (e-- > 0) r *= b;
  return r;
}

// Columns are the flattened coefficient vectors of the reduced polynomials
// over the listed exponents: row (e_idx * m + c) holds coordinate c of the
// coefficient of X^{exps[e_idx]}.
FpMat flatten_columns(const CtxPtr& ctx, const std::vector<long long>& exps,
                      const std::vector<const Poly*>& polys) {
  FpMat mat(ctx->p, int(exps.size()) * ctx->m, int(polys.size()));
  for (int col = 0; col < int(polys.size()); ++col) {
    const Poly& f = *polys[col];
    for (int e_idx = 0; e_idx < int(exps.size()); ++e_idx) {
      long long e = exps[e_idx];
      if (e > f.degree()) continue;
      FieldElement coef = f.coeff(int(e));
      for (int c = 0; c < ctx->m; ++c) mat.at(e_idx * ctx->m + c, col) = coef.coeffs()[c];
    }
  }
  return mat;
}

std::vector<long long> support_union(const std::vector<const Poly*>& polys) {
  std::set<long long> s;
  for (const Poly* f : polys)
    for (int e = 0; e <= f->degree(); ++e)
      if (!f->coeff(e).is_zero()) s.insert(e);
  return {s.begin(), s.end()};
}

// c * f with c in F_p.
ASClass scaled_class(const ASClass& f, Residue c, const CtxPtr& ctx) {
  return {f.reduced.scaled(ctx->from_int(c)), Residue((c * f.const_class) % ctx->p)};
}

ASClass sub_class(const ASClass& a, const ASClass& b, int p) {
  return {a.reduced - b.reduced, Residue(((a.const_class - b.const_class) % p + p) % p)};
}

// Deterministic ordering: by degree, then lexicographic on the coefficient
// vector read from the constant term up.
bool class_less(const ASClass& a, const ASClass& b) {
  if (a.reduced.degree() != b.reduced.degree()) return a.reduced.degree() < b.reduced.degree();
  for (int e = 0; e <= a.reduced.degree(); ++e) {
    FieldElement ca = a.reduced.coeff(e), cb = b.reduced.coeff(e);
    if (ca != cb) return ca < cb;
  }
  return a.const_class < b.const_class;
}

void check_prime_basis_independent(const CtxPtr& ctx, const std::vector<FieldElement>& basis) {
  if (basis.empty()) return;
  FpMat mat(ctx->p, ctx->m, int(basis.size()));
  for (int col = 0; col < int(basis.size()); ++col) {
    if (basis[col].ctx().get() != ctx.get()) fail(Errc::FieldMismatch, "basis element in wrong field");
    const auto& coords = basis[col].coeffs();
    for (int r = 0; r < ctx->m; ++r) mat.at(r, col) = coords[r];
  }
  if (fp_rank(mat) != int(basis.size()))
    fail(Errc::DependentBasis, "translation basis is F_p-dependent");
}

// All p^r elements of the F_p-span of `basis` in a deterministic order.
std::vector<FieldElement> span_elements(const CtxPtr& ctx, const std::vector<FieldElement>& basis) {
  std::vector<FieldElement> out{ctx->zero()};
  for (const auto& b : basis) {
    std::vector<FieldElement> next;
    next.reserve(out.size() * ctx->p);
    FieldElement step = ctx->zero();
    for (int c = 0; c < ctx->p; ++c) {
      for (const auto& v : out) next.push_back(v + step);
      step = step + b;
    }
    out = std::move(next);
  }
  return out;
}

ASClass embed_class(const ASClass& f, const CtxPtr& src, const CtxPtr& dst) {
  Poly lifted = f.reduced.embedded(dst);  // NoEmbedding unless src->m | dst->m
  // Tr_{dst/F_p} restricted to the source field multiplies traces by the
  // relative degree.
  Residue scale = Residue((dst->m / src->m) % dst->p);
  return {std::move(lifted), Residue((f.const_class * scale) % dst->p)};
}

}  // namespace

CoverSpec make_cover_spec(const CtxPtr& ambient, const std::vector<Poly>& functions,
                          const std::vector<FieldElement>& v_basis) {
  CoverSpec spec;
  spec.ambient = ambient;
  for (const Poly& f : functions) {
    if (f.ctx().get() != ambient.get()) fail(Errc::FieldMismatch, "function in wrong field");
    ASClass cls = reduce(f);
    if (cls.is_zero_geometric()) fail(Errc::DependentClasses, "function is trivial modulo wp");
    spec.functions.push_back(std::move(cls));
  }
  if (spec.functions.empty()) fail(Errc::DependentClasses, "no functions supplied");
  std::vector<const Poly*> polys;
  for (const auto& c : spec.functions) polys.push_back(&c.reduced);
  FpMat mat = flatten_columns(ambient, support_union(polys), polys);
  if (fp_rank(mat) != int(polys.size()))
    fail(Errc::DependentClasses, "classes are F_p-dependent");
  check_prime_basis_independent(ambient, v_basis);
  spec.v_basis = v_basis;
  return spec;
}

AdaptedBasis adapt_basis(const std::vector<ASClass>& classes) {
  const int n = int(classes.size());
  if (n == 0) fail(Errc::DependentClasses, "no classes supplied");
  const CtxPtr& ctx = classes.front().reduced.ctx();
  std::vector<ASClass> items = classes;
  for (const auto& c : items)
    if (c.is_zero_geometric()) fail(Errc::DependentClasses, "zero class supplied");

  bool changed = true;
  while (changed) {
    changed = false;
    std::sort(items.begin(), items.end(), class_less);
    // Echelonize leading coefficients within each equal-degree block.
    for (int lo = 0; lo < n && !changed; ) {
      int hi = lo;
      while (hi < n && items[hi].reduced.degree() == items[lo].reduced.degree()) ++hi;
      // Accepted leading coefficients so far, as columns.
      for (int k = lo + 1; k < hi && !changed; ++k) {
        FpMat mat(ctx->p, ctx->m, k - lo);
        for (int col = 0; col < k - lo; ++col) {
          FieldElement lead = items[lo + col].reduced.leading();
          for (int r = 0; r < ctx->m; ++r) mat.at(r, col) = lead.coeffs()[r];
        }
        std::vector<Residue> rhs(ctx->m);
        FieldElement lead_k = items[k].reduced.leading();
        for (int r = 0; r < ctx->m; ++r) rhs[r] = lead_k.coeffs()[r];
        auto sol = fp_solve(mat, rhs);
        if (!sol) continue;  // independent of the block prefix: accepted
        ASClass repl = items[k];
        for (int col = 0; col < k - lo; ++col)
          repl = sub_class(repl, scaled_class(items[lo + col], (*sol)[col], ctx), ctx->p);
        if (repl.is_zero_geometric())
          fail(Errc::DependentClasses, "classes are F_p-dependent");
        items[k] = repl;  // degree strictly dropped; re-sort and restart
        changed = true;
      }
      lo = hi;
    }
  }

  AdaptedBasis out;
  out.functions = items;
  for (const auto& c : items) {
    int d = c.reduced.degree();
    if (d % ctx->p == 0)
      fail(Errc::Mismatch, "reduced class with p-divisible degree");  // unreachable for reduced input
    out.degrees.push_back(d);
  }
  out.jumps = out.degrees;
  out.jumps.erase(std::unique(out.jumps.begin(), out.jumps.end()), out.jumps.end());
  out.dims.push_back(0);
  for (int mu : out.jumps)
    out.dims.push_back(int(std::count_if(out.degrees.begin(), out.degrees.end(),
                                         [mu](int d) { return d <= mu; })));
  return out;
}

RamificationReport ramification(const AdaptedBasis& basis, int p, int v) {
  RamificationReport rep;
  const int n = int(basis.degrees.size());
  long long d2 = 0, g2 = 0;  // d and 2g
  for (int i = 0; i < n; ++i) {
    long long pw = ipow(p, i);
    d2 += pw * (basis.degrees[i] + 1);
    g2 += pw * (basis.degrees[i] - 1);
  }
  rep.different = (p - 1) * d2;
  long long twog = (p - 1) * g2;
  if (twog % 2 != 0) fail(Errc::Mismatch, "odd 2g");  // impossible: m_i odd when p = 2
  rep.genus = twog / 2;
  rep.order = ipow(p, n + v);
  if (2 * (rep.genus - 1) != -2 * ipow(p, n) + rep.different)
    fail(Errc::Mismatch, "Hurwitz identity violated");  // unreachable: formula identity
  if (rep.genus > 0) {
    long long g = std::gcd(rep.order, rep.genus);
    rep.ratio_num = rep.order / g;
    rep.ratio_den = rep.genus / g;
  }
  rep.is_big_action = rep.genus >= 1 && rep.order * (p - 1) > 2 * p * rep.genus;
  return rep;
}

RepMatrix solve_rep_matrix(const CoverSpec& spec, const FieldElement& y) {
  const CtxPtr& ctx = spec.ambient;
  if (y.ctx().get() != ctx.get()) fail(Errc::FieldMismatch, "translation in wrong field");
  const int n = spec.n();
  RepMatrix out{y, fp_identity(ctx->p, n)};
  for (int i = 0; i < n; ++i) {
    ASClass diff = reduce(spec.functions[i].reduced.delta(y));
    if (i == 0) {
      if (!diff.reduced.is_zero())
        fail(Errc::NotStable, "translation does not fix the class of f_1");
      continue;
    }
    std::vector<const Poly*> polys;
    for (int j = 0; j < i; ++j) polys.push_back(&spec.functions[j].reduced);
    polys.push_back(&diff.reduced);
    auto exps = support_union(polys);
    polys.pop_back();
    FpMat mat = flatten_columns(ctx, exps, polys);
    std::vector<Residue> rhs(mat.rows, 0);
    for (int e_idx = 0; e_idx < int(exps.size()); ++e_idx) {
      long long e = exps[e_idx];
      if (e > diff.reduced.degree()) continue;
      FieldElement coef = diff.reduced.coeff(int(e));
      for (int c = 0; c < ctx->m; ++c) rhs[e_idx * ctx->m + c] = coef.coeffs()[c];
    }
    auto sol = fp_solve(mat, rhs);
    if (!sol)
      fail(Errc::NotStable,
           "translation does not stabilize the span at f_" + std::to_string(i + 1));
    for (int j = 0; j < i; ++j) out.entries.at(j, i) = (*sol)[j];
  }
  return out;
}

VerifyResult verify_cover(const CoverSpec& spec) {
  const CtxPtr& ctx = spec.ambient;
  const int p = ctx->p;
  VerifyResult res;
  res.basis = adapt_basis(spec.functions);
  check_prime_basis_independent(ctx, spec.v_basis);

  CoverSpec adapted{ctx, res.basis.functions, spec.v_basis};
  for (const auto& y : spec.v_basis) res.matrices.push_back(solve_rep_matrix(adapted, y));

  // rho is a homomorphism from an abelian group: matrices must commute and be
  // multiplicative on basis pairs.
  for (size_t a = 0; a < res.matrices.size(); ++a)
    for (size_t b = a; b < res.matrices.size(); ++b) {
      RepMatrix sum = solve_rep_matrix(adapted, spec.v_basis[a] + spec.v_basis[b]);
      if (!(sum.entries == fp_mul(res.matrices[a].entries, res.matrices[b].entries)) ||
          !(sum.entries == fp_mul(res.matrices[b].entries, res.matrices[a].entries)))
        fail(Errc::RepresentationLawViolated,
             "L(y+y') != L(y) L(y') on a basis pair");
    }

  // Equal-degree blocks cannot see each other: l_{j,i}(y) = 0 when m_j = m_i.
  for (const auto& mtx : res.matrices)
    for (int i = 0; i < adapted.n(); ++i)
      for (int j = 0; j < i; ++j)
        if (res.basis.degrees[j] == res.basis.degrees[i] && mtx.entries.at(j, i) != 0)
          fail(Errc::Mismatch, "nonzero matrix entry inside an equal-degree block");

  // f_1 = X*S_1(X) + c*X; the palindromic companion has F-degree 2 s_1.
  TwistedPoly ad1 = palindromic(res.basis.functions.front().reduced);
  res.s1 = ad1.deg_f() / 2;

  const int v = spec.v();
  if (ipow(p, v) < res.basis.degrees.back() + 1)
    fail(Errc::Mismatch, "p^v < m_n + 1: translation group too small for the top degree");
  if (v > 2 * res.s1)
    fail(Errc::Mismatch, "v exceeds twice the F-degree of S_1");

  for (int i = 0; i < adapted.n(); ++i)
    if (sigma_level(res.basis.functions[i].reduced) > i + 2)
      fail(Errc::Mismatch, "f_" + std::to_string(i + 1) + " exceeds digit-sum level " +
                               std::to_string(i + 2));

  res.ram = ramification(res.basis, p, v);
  return res;
}

bool rho_trivial(const CoverSpec& spec, const std::vector<RepMatrix>& matrices) {
  for (const auto& mtx : matrices)
    if (!(mtx.entries == fp_identity(mtx.entries.p, mtx.entries.rows))) return false;
  // Trivial representation forces every function into the X*S_i(X) + c*X
  // shape with V inside the kernel of every companion.
  auto all_y = span_elements(spec.ambient, spec.v_basis);
  for (const auto& f : spec.functions) {
    TwistedPoly ad = palindromic(f.reduced);
    for (const auto& y : all_y)
      if (!ad.evaluate(y).is_zero())
        fail(Errc::Mismatch, "translation outside the kernel of a companion despite trivial rho");
  }
  return true;
}

bool max_jump_predicate(const CoverSpec& spec, const std::vector<RepMatrix>& matrices) {
  const int n = spec.n();
  for (int i = 0; i + 1 < n; ++i) {
    bool hit = false;
    for (const auto& mtx : matrices)
      if (mtx.entries.at(i, i + 1) != 0) { hit = true; break; }
    if (!hit) return false;
  }
  return true;
}

MaxJumpReport theorem58_check(const CoverSpec& spec) {
  VerifyResult res = verify_cover(spec);
  const int p = spec.ambient->p;
  const int n = spec.n();

  MaxJumpReport rep;
  rep.levels_maximal = true;
  for (int i = 0; i < n; ++i)
    if (sigma_level(res.basis.functions[i].reduced) != i + 2) rep.levels_maximal = false;
  CoverSpec adapted{spec.ambient, res.basis.functions, spec.v_basis};
  rep.subdiagonals_nonzero = max_jump_predicate(adapted, res.matrices);
  rep.equivalence = rep.levels_maximal == rep.subdiagonals_nonzero;

  if (rep.levels_maximal && rep.subdiagonals_nonzero) {
    long long ps1 = ipow(p, res.s1);
    for (int i = 0; i < n; ++i)
      if (res.basis.degrees[i] != 1 + (i + 1) * ps1) rep.degrees_match = false;
    rep.v_matches = spec.v() == res.s1 + 1;
    // |G|/g = 2p * p^n (p-1) / (n p^n (p-1) + 1 - p^n), compared exactly.
    long long pn = ipow(p, n);
    __int128 num = __int128(2) * p * pn * (p - 1);
    __int128 den = __int128(n) * pn * (p - 1) + 1 - pn;
    rep.ratio_matches = __int128(res.ram.ratio_num) * den == num * res.ram.ratio_den;
  }
  return rep;
}

CoverSpec truncate_cover(const CoverSpec& spec, int d) {
  if (d < 1 || d > spec.n()) fail(Errc::OutOfRange, "truncation index outside 1..n");
  CoverSpec out;
  out.ambient = spec.ambient;
  out.functions.assign(spec.functions.begin(), spec.functions.begin() + d);
  out.v_basis = spec.v_basis;
  return out;
}

std::pair<CtxPtr, std::vector<FieldElement>> find_stable_translations(
    const std::vector<ASClass>& functions) {
  if (functions.empty()) fail(Errc::OutOfRange, "no functions supplied");
  const CtxPtr& src = functions.front().reduced.ctx();
  TwistedPoly ad1 = palindromic(functions.front().reduced);
  auto [ext, zbasis] = zero_set(ad1);

  CoverSpec probe;
  probe.ambient = ext;
  for (const auto& f : functions) probe.functions.push_back(embed_class(f, src, ext));

  std::vector<FieldElement> survivors;
  for (const auto& y : span_elements(ext, zbasis)) {
    try {
      (void)solve_rep_matrix(probe, y);
      survivors.push_back(y);
    } catch (const Error& e) {
      if (e.code() != Errc::NotStable) throw;
    }
  }

  std::set<std::vector<Residue>> member;
  for (const auto& y : survivors) member.insert(y.coeffs());
  for (const auto& a : survivors)
    for (const auto& b : survivors)
      if (!member.count((a + b).coeffs()))
        fail(Errc::Mismatch, "stable translations not closed under addition");

  std::sort(survivors.begin(), survivors.end());
  std::vector<FieldElement> basis;
  for (const auto& y : survivors) {
    if (y.is_zero()) continue;
    FpMat trial(ext->p, ext->m, int(basis.size()) + 1);
    for (int col = 0; col < int(basis.size()); ++col)
      for (int r = 0; r < ext->m; ++r) trial.at(r, col) = basis[col].coeffs()[r];
    for (int r = 0; r < ext->m; ++r) trial.at(r, int(basis.size())) = y.coeffs()[r];
    if (fp_rank(trial) == int(basis.size()) + 1) basis.push_back(y);
  }
  if (ipow(ext->p, int(basis.size())) != (long long)survivors.size())
    fail(Errc::Mismatch, "stable translations are not an F_p-subspace");
  return {ext, basis};
}

}  // namespace wildcover
