#include "wildcover/grp.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <utility>

#include "wildcover/asw.hpp"

namespace wildcover {

namespace {

long long inv_mod(long long a, long long p) {
  a %= p;
  if (a < 0) a += p;
  if (a == 0) throw Error(Errc::DivisionByZero, "inverse of zero residue");
  long long r = 1, b = a, e = p - 2;  // p prime
  while (e > 0) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

FpMat transpose(const FpMat& m) {
  FpMat t(m.p, m.cols, m.rows);
  for (int r = 0; r < m.rows; ++r)
    for (int c = 0; c < m.cols; ++c) t.at(c, r) = m.at(r, c);
  return t;
}

bool is_lower_unitriangular(const FpMat& m) {
  if (m.rows != m.cols) return false;
  for (int r = 0; r < m.rows; ++r) {
    if (m.at(r, r) != 1) return false;
    for (int c = r + 1; c < m.cols; ++c)
      if (m.at(r, c) != 0) return false;
  }
  return true;
}

// Columns of `vecs` (each of length n) assembled into a matrix.
FpMat columns_matrix(int p, int n, const std::vector<std::vector<Residue>>& vecs) {
  FpMat b(p, n, int(vecs.size()));
  for (int c = 0; c < int(vecs.size()); ++c)
    for (int r = 0; r < n; ++r) b.at(r, c) = vecs[c][r];
  return b;
}

}  // namespace

// ---------------------------------------------------------------------------
// PhiFamily

PhiFamily make_phi_family(int n, std::vector<PhiGenerator> generators) {
  if (n <= 0) throw Error(Errc::Mismatch, "family dimension must be positive");
  if (generators.empty()) throw Error(Errc::Mismatch, "family needs at least one generator");
  int p = generators.front().phi.p;
  for (const auto& g : generators) {
    if (g.phi.p != p || g.phi.rows != n || g.phi.cols != n)
      throw Error(Errc::Mismatch, "generator matrix has wrong shape");
    if (!is_lower_unitriangular(g.phi))
      throw Error(Errc::Mismatch, "generator matrix is not lower unitriangular");
  }
  for (size_t i = 0; i < generators.size(); ++i)
    for (size_t j = i + 1; j < generators.size(); ++j)
      if (!(fp_mul(generators[i].phi, generators[j].phi) ==
            fp_mul(generators[j].phi, generators[i].phi)))
        throw Error(Errc::Mismatch, "generator matrices do not commute");
  PhiFamily fam;
  fam.n = n;
  fam.generators = std::move(generators);
  return fam;
}

PhiFamily phi_family_from_matrices(const std::vector<RepMatrix>& matrices) {
  if (matrices.empty()) throw Error(Errc::Mismatch, "no representation matrices");
  std::vector<PhiGenerator> gens;
  gens.reserve(matrices.size());
  for (const auto& m : matrices) gens.push_back({m.y, transpose(m.entries)});
  return make_phi_family(matrices.front().entries.rows, std::move(gens));
}

std::vector<FpMat> lambda_filtration(const PhiFamily& fam) {
  const int n = fam.n;
  const int p = fam.generators.front().phi.p;
  std::vector<FpMat> chain;
  FpMat basis(p, n, 0);  // current step, columns spanning it
  while (basis.cols < n) {
    // Rows annihilating the current subspace: w with w * basis = 0.
    std::vector<std::vector<Residue>> ann;
    if (basis.cols == 0) {
      ann.assign(n, std::vector<Residue>(n, 0));
      for (int i = 0; i < n; ++i) ann[i][i] = 1;
    } else {
      ann = fp_nullspace(transpose(basis));
    }
    // v lies in the next step iff w * (Phi - I) * v = 0 for all w, Phi.
    FpMat cond(p, int(ann.size() * fam.generators.size()), n);
    int row = 0;
    for (const auto& g : fam.generators) {
      for (const auto& w : ann) {
        for (int c = 0; c < n; ++c) {
          long long s = 0;
          for (int r = 0; r < n; ++r) {
            Residue entry = g.phi.at(r, c);
            if (r == c) entry = Residue((entry + p - 1) % p);
            s += (long long)w[r] * entry;
          }
          cond.at(row, c) = Residue(s % p);
        }
        ++row;
      }
    }
    FpMat next = columns_matrix(p, n, fp_nullspace(cond));
    if (next.cols <= basis.cols)
      throw Error(Errc::Mismatch, "filtration stalled before reaching the full space");
    chain.push_back(next);
    basis = std::move(next);
  }
  if (chain.empty() || chain.back().cols != n)
    throw Error(Errc::Mismatch, "filtration did not reach the full space");
  return chain;
}

std::vector<int> lambda_dims(const PhiFamily& fam) {
  std::vector<int> dims;
  for (const auto& step : lambda_filtration(fam)) dims.push_back(step.cols);
  return dims;
}

bool max_jumps(const PhiFamily& fam) {
  for (int i = 0; i + 1 < fam.n; ++i) {
    bool hit = false;
    for (const auto& g : fam.generators)
      if (g.phi.at(i + 1, i) != 0) {
        hit = true;
        break;
      }
    if (!hit) return false;
  }
  return true;
}

HomothetyNormalization homothety_normalize(const PhiFamily& fam) {
  const int n = fam.n;
  const int p = fam.generators.front().phi.p;
  const int g = int(fam.generators.size());
  // Subdiagonal forms as value vectors on the generators.
  std::vector<std::vector<Residue>> forms(std::max(0, n - 1), std::vector<Residue>(g, 0));
  for (int i = 0; i + 1 < n; ++i)
    for (int k = 0; k < g; ++k) forms[i][k] = fam.generators[k].phi.at(i + 1, i);
  for (int i = 0; i + 1 < n; ++i)
    if (std::all_of(forms[i].begin(), forms[i].end(), [](Residue r) { return r == 0; }))
      throw Error(Errc::NotMaxJumps, "subdiagonal form " + std::to_string(i + 2) + "," +
                                         std::to_string(i + 1) + " vanishes on the generators");
  if (n > p)
    throw Error(Errc::Mismatch, "a maximal-jump family cannot be longer than the characteristic");

  HomothetyNormalization out;
  out.diag.assign(n, 1);
  if (n >= 2) {
    out.ell_on_gens = forms[0];
    int pivot = 0;
    while (forms[0][pivot] == 0) ++pivot;
    long long base_inv = inv_mod(forms[0][pivot], p);
    for (int i = 0; i + 1 < n; ++i) {
      long long lambda = forms[i][pivot] * base_inv % p;
      for (int k = 0; k < g; ++k)
        if (forms[i][k] != lambda * forms[0][k] % p)
          throw Error(Errc::Mismatch, "subdiagonal forms are not proportional");
      out.diag[i + 1] = Residue(out.diag[i] * inv_mod(lambda, p) % p);
    }
  }
  std::vector<PhiGenerator> gens = fam.generators;
  for (auto& gen : gens) {
    FpMat conj(p, n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        conj.at(r, c) =
            Residue((long long)out.diag[r] * gen.phi.at(r, c) % p * inv_mod(out.diag[c], p) % p);
    gen.phi = std::move(conj);
  }
  out.normalized = make_phi_family(n, std::move(gens));
  return out;
}

// ---------------------------------------------------------------------------
// Aut

bool Aut::is_identity() const {
  if (!y.is_zero()) return false;
  if (!(M == fp_identity(M.p, M.rows))) return false;
  for (const auto& f : P)
    if (!f.is_zero()) return false;
  for (const auto& z : Z)
    if (!z.is_zero()) return false;
  return true;
}

bool Aut::operator==(const Aut& o) const {
  return y == o.y && M == o.M && P == o.P && Z == o.Z;
}

std::vector<Residue> Aut::key() const {
  const int m = y.ctx()->m;
  std::vector<Residue> k;
  k.reserve(size_t(m) * (2 + P.size() * 4) + M.a.size());
  k.insert(k.end(), y.coeffs().begin(), y.coeffs().end());
  k.insert(k.end(), M.a.begin(), M.a.end());
  for (const auto& f : P) {
    k.push_back(Residue(f.degree() + 1));
    for (int e = 0; e <= f.degree(); ++e) {
      FieldElement c = f.coeff(e);
      k.insert(k.end(), c.coeffs().begin(), c.coeffs().end());
    }
  }
  for (const auto& z : Z) k.insert(k.end(), z.coeffs().begin(), z.coeffs().end());
  return k;
}

Aut make_aut(const FieldElement& y, FpMat M, std::vector<Poly> P, std::vector<FieldElement> Z) {
  const CtxPtr& ctx = y.ctx();
  if (!ctx) throw Error(Errc::Mismatch, "automorphism needs a field context");
  if (M.p != ctx->p) throw Error(Errc::FieldMismatch, "matrix characteristic differs from field");
  if (!is_lower_unitriangular(M))
    throw Error(Errc::Mismatch, "automorphism matrix is not lower unitriangular");
  if (P.size() != size_t(M.rows) || Z.size() != size_t(M.rows))
    throw Error(Errc::Mismatch, "automorphism component counts disagree");
  for (auto& f : P) {
    if (f.is_zero()) {
      f = Poly::zero(ctx);
      continue;
    }
    if (!f.ctx()->same_field(*ctx))
      throw Error(Errc::FieldMismatch, "polynomial part over a different field");
  }
  for (const auto& z : Z)
    if (!z.ctx()->same_field(*ctx))
      throw Error(Errc::FieldMismatch, "constant part over a different field");
  // Unique decomposition: constant terms live in Z, not in P.
  for (size_t i = 0; i < P.size(); ++i) {
    FieldElement c0 = P[i].coeff(0);
    if (!c0.is_zero()) {
      P[i] = P[i] - Poly::monomial(c0, 0);
      Z[i] = Z[i] + c0;
    }
  }
  Aut s;
  s.y = y;
  s.M = std::move(M);
  s.P = std::move(P);
  s.Z = std::move(Z);
  return s;
}

Aut aut_identity(const CtxPtr& ctx, int n) {
  return make_aut(ctx->zero(), fp_identity(ctx->p, n),
                  std::vector<Poly>(size_t(n), Poly::zero(ctx)),
                  std::vector<FieldElement>(size_t(n), ctx->zero()));
}

Aut compose(const Aut& s, const Aut& t) {
  const CtxPtr& ctx = s.ctx();
  if (!ctx->same_field(*t.ctx())) throw Error(Errc::FieldMismatch, "composing over different fields");
  if (s.n() != t.n()) throw Error(Errc::Mismatch, "composing automorphisms of different ranks");
  const int n = s.n();
  std::vector<FieldElement> scalar(size_t(ctx->p));
  for (int r = 0; r < ctx->p; ++r) scalar[size_t(r)] = ctx->from_int(r);

  std::vector<Poly> P(size_t(n), Poly::zero(ctx));
  std::vector<FieldElement> Z(size_t(n), ctx->zero());
  for (int i = 0; i < n; ++i) {
    Poly acc = t.P[size_t(i)].translate(s.y);
    FieldElement zacc = t.Z[size_t(i)];
    for (int j = 0; j <= i; ++j) {
      Residue c = t.M.at(i, j);
      if (c == 0) continue;
      acc = acc + s.P[size_t(j)].scaled(scalar[size_t(c)]);
      zacc = zacc + s.Z[size_t(j)] * scalar[size_t(c)];
    }
    P[size_t(i)] = std::move(acc);
    Z[size_t(i)] = zacc;
  }
  return make_aut(s.y + t.y, fp_mul(t.M, s.M), std::move(P), std::move(Z));
}

Aut inverse(const Aut& s) {
  const CtxPtr& ctx = s.ctx();
  const int n = s.n();
  FpMat Minv = fp_inverse(s.M);
  std::vector<FieldElement> scalar(size_t(ctx->p));
  for (int r = 0; r < ctx->p; ++r) scalar[size_t(r)] = ctx->from_int(r);

  std::vector<Poly> P(size_t(n), Poly::zero(ctx));
  std::vector<FieldElement> Z(size_t(n), ctx->zero());
  for (int i = 0; i < n; ++i) {
    Poly acc = Poly::zero(ctx);
    FieldElement zacc = ctx->zero();
    for (int j = 0; j <= i; ++j) {
      Residue c = Minv.at(i, j);
      if (c == 0) continue;
      acc = acc + s.P[size_t(j)].scaled(scalar[size_t(c)]);
      zacc = zacc + s.Z[size_t(j)] * scalar[size_t(c)];
    }
    P[size_t(i)] = -acc.translate(-s.y);
    Z[size_t(i)] = -zacc;
  }
  return make_aut(-s.y, std::move(Minv), std::move(P), std::move(Z));
}

Aut conjugate(const Aut& g, const Aut& x) { return compose(compose(g, x), inverse(g)); }

Aut commutator(const Aut& a, const Aut& b) {
  return compose(compose(inverse(a), inverse(b)), compose(a, b));
}

Aut power(const Aut& s, long long e) {
  Aut base = e < 0 ? inverse(s) : s;
  unsigned long long k = e < 0 ? (unsigned long long)(-(e + 1)) + 1 : (unsigned long long)e;
  Aut acc = aut_identity(s.ctx(), s.n());
  while (k > 0) {
    if (k & 1) acc = compose(acc, base);
    base = compose(base, base);
    k >>= 1;
  }
  return acc;
}

long long element_order(const Aut& s) {
  const long long p = s.ctx()->p;
  const long long bound = p * p * p;
  Aut cur = s;
  for (long long k = 1; k <= bound; ++k) {
    if (cur.is_identity()) return k;
    cur = compose(cur, s);
  }
  throw Error(Errc::OrderBoundExceeded, "element order exceeds p^3");
}

std::vector<Aut> group_closure(const std::vector<Aut>& gens, std::size_t bound) {
  if (gens.empty()) throw Error(Errc::Mismatch, "closure needs at least one generator");
  std::vector<Aut> elements;
  std::map<std::vector<Residue>, size_t> seen;
  elements.push_back(aut_identity(gens.front().ctx(), gens.front().n()));
  seen.emplace(elements.front().key(), 0);
  for (size_t head = 0; head < elements.size(); ++head) {
    Aut cur = elements[head];  // copy: elements may reallocate below
    for (const auto& g : gens) {
      Aut next = compose(cur, g);
      auto key = next.key();
      if (seen.count(key)) continue;
      if (elements.size() >= bound)
        throw Error(Errc::BoundExceeded, "group closure exceeds the element bound");
      seen.emplace(std::move(key), elements.size());
      elements.push_back(std::move(next));
    }
  }
  return elements;
}

std::vector<Aut> center(const std::vector<Aut>& closure, const std::vector<Aut>& gens) {
  std::vector<Aut> out;
  for (const auto& s : closure) {
    bool central = true;
    for (const auto& g : gens)
      if (!(compose(s, g) == compose(g, s))) {
        central = false;
        break;
      }
    if (central) out.push_back(s);
  }
  return out;
}

std::vector<Aut> derived_subgroup(const std::vector<Aut>& gens, std::size_t bound) {
  if (gens.empty()) throw Error(Errc::Mismatch, "derived subgroup needs generators");
  const CtxPtr& ctx = gens.front().ctx();
  const int n = gens.front().n();
  std::vector<Aut> dgens;
  std::set<std::vector<Residue>> dkeys;
  auto push = [&](const Aut& a) {
    if (a.is_identity()) return false;
    auto key = a.key();
    if (dkeys.count(key)) return false;
    dkeys.insert(std::move(key));
    dgens.push_back(a);
    return true;
  };
  for (const auto& a : gens)
    for (const auto& b : gens) push(commutator(a, b));
  if (dgens.empty()) return {aut_identity(ctx, n)};

  while (true) {
    std::vector<Aut> closure = group_closure(dgens, bound);
    std::set<std::vector<Residue>> ckeys;
    for (const auto& e : closure) ckeys.insert(e.key());
    bool grew = false;
    for (const auto& e : closure) {
      for (const auto& g : gens) {
        Aut c = conjugate(g, e);
        if (!ckeys.count(c.key()) && push(c)) grew = true;
      }
    }
    if (!grew) return closure;
  }
}

long long exponent_of(const std::vector<Aut>& elements) {
  long long e = 1;
  for (const auto& s : elements) {
    // Fast path for p-power orders (covers every p-group element): the least
    // p^j with s^{p^j} = 1 is the order.  Otherwise fall back to the scan.
    const long long p = s.ctx()->p;
    long long ord = 1;
    bool found = false;
    Aut cur = s;
    for (int j = 0; j <= 3; ++j) {
      if (cur.is_identity()) {
        found = true;
        break;
      }
      cur = power(cur, p);
      ord *= p;
    }
    e = std::lcm(e, found ? ord : element_order(s));
  }
  return e;
}

long long quotient_exponent(const std::vector<Aut>& closure, const std::vector<Aut>& subgroup) {
  std::set<std::vector<Residue>> keys;
  for (const auto& s : subgroup) keys.insert(s.key());
  long long e = 1;
  for (const auto& s : closure) {
    const long long p = s.ctx()->p;
    // Coset orders divide element orders, so for p-power orders the least
    // p^j with s^{p^j} in the subgroup is the coset order.
    long long ord = 1;
    bool found = false;
    Aut cur = s;
    for (int j = 0; j <= 3; ++j) {
      if (keys.count(cur.key())) {
        found = true;
        break;
      }
      cur = power(cur, p);
      ord *= p;
    }
    if (!found) {
      const long long bound = p * p * p;
      cur = s;
      ord = 1;
      while (!keys.count(cur.key())) {
        cur = compose(cur, s);
        if (++ord > bound) throw Error(Errc::OrderBoundExceeded, "coset order exceeds p^3");
      }
    }
    e = std::lcm(e, ord);
  }
  return e;
}

namespace {

bool center_shape_matches(const std::vector<Aut>& closure,
                          const std::set<std::vector<Residue>>& central, int n) {
  for (const auto& s : closure) {
    bool shape = s.y.is_zero() && s.M == fp_identity(s.M.p, n);
    for (int i = 0; shape && i < n; ++i)
      if (!s.P[size_t(i)].is_zero()) shape = false;
    for (int i = 0; shape && i + 1 < n; ++i)
      if (!s.Z[size_t(i)].is_zero()) shape = false;
    if (shape && !s.Z[size_t(n - 1)].in_prime_field()) shape = false;
    if (shape != (central.count(s.key()) != 0)) return false;
  }
  return true;
}

}  // namespace

bool center_characterization_check(const std::vector<Aut>& closure, const std::vector<Aut>& gens) {
  if (gens.empty()) throw Error(Errc::Mismatch, "characterization needs generators");
  const int n = gens.front().n();
  std::set<std::vector<Residue>> central;
  for (const auto& s : center(closure, gens)) central.insert(s.key());
  return center_shape_matches(closure, central, n);
}

// ---------------------------------------------------------------------------
// Generators of the automorphism group of a verified cover.

std::vector<Aut> GeneratorSet::all() const {
  std::vector<Aut> out = translations;
  out.insert(out.end(), class_gens.begin(), class_gens.end());
  return out;
}

namespace {

// Builds the generator set over spec's own ambient field, or returns nullopt
// when some Witt-root constant has a nonzero trace there.
std::optional<GeneratorSet> try_build_generators(const CoverSpec& spec) {
  const CtxPtr& ctx = spec.ambient;
  VerifyResult vr = verify_cover(spec);
  const int n = int(vr.basis.functions.size());

  std::vector<Poly> adapted;
  adapted.reserve(size_t(n));
  for (const auto& cls : vr.basis.functions) adapted.push_back(cls.reduced);
  CoverSpec aspec = make_cover_spec(ctx, adapted, spec.v_basis);

  std::vector<FieldElement> scalar(size_t(ctx->p));
  for (int r = 0; r < ctx->p; ++r) scalar[size_t(r)] = ctx->from_int(r);

  std::vector<Aut> translations;
  for (size_t k = 0; k < spec.v_basis.size(); ++k) {
    const FieldElement& y = spec.v_basis[k];
    const FpMat& L = vr.matrices[k].entries;
    std::vector<Poly> P(size_t(n), Poly::zero(ctx));
    std::vector<FieldElement> Z(size_t(n), ctx->zero());
    for (int i = 0; i < n; ++i) {
      Poly lhs = adapted[size_t(i)].delta(y);
      for (int j = 0; j < i; ++j) {
        Residue c = L.at(j, i);
        if (c != 0) lhs = lhs - adapted[size_t(j)].scaled(scalar[size_t(c)]);
      }
      WpSplit sp = wp_split(lhs);
      if (!sp.reduced.is_zero())
        throw Error(Errc::Mismatch, "verified cover produced an unstable translation");
      if (ctx->trace_to_prime(sp.constant) != 0) return std::nullopt;
      P[size_t(i)] = sp.preimage;
      Z[size_t(i)] = ctx->artin_schreier_root(sp.constant);
    }
    translations.push_back(make_aut(y, transpose(L), std::move(P), std::move(Z)));
  }

  std::vector<Aut> class_gens;
  for (int i = 0; i < n; ++i) {
    std::vector<FieldElement> Z(size_t(n), ctx->zero());
    Z[size_t(i)] = ctx->one();
    class_gens.push_back(make_aut(ctx->zero(), fp_identity(ctx->p, n),
                                  std::vector<Poly>(size_t(n), Poly::zero(ctx)), std::move(Z)));
  }

  GeneratorSet out;
  out.spec = std::move(aspec);
  out.verification = std::move(vr);
  out.translations = std::move(translations);
  out.class_gens = std::move(class_gens);
  return out;
}

}  // namespace

GeneratorSet build_generators(const CoverSpec& spec) {
  if (auto direct = try_build_generators(spec)) return *std::move(direct);
  // Some Witt-root constant is obstructed; over the degree-p extension every
  // constant from the base has trace p * Tr(c) = 0, so roots always exist.
  const CtxPtr ext = FieldCtx::get(spec.ambient->p, spec.ambient->m * spec.ambient->p);
  std::vector<Poly> lifted;
  lifted.reserve(spec.functions.size());
  for (const auto& cls : spec.functions) lifted.push_back(cls.reduced.embedded(ext));
  std::vector<FieldElement> vlift;
  vlift.reserve(spec.v_basis.size());
  for (const auto& y : spec.v_basis) vlift.push_back(embed(y, ext));
  auto lifted_set = try_build_generators(make_cover_spec(ext, lifted, vlift));
  if (!lifted_set)
    throw Error(Errc::Mismatch, "trace obstruction survived the degree-p extension");
  return *std::move(lifted_set);
}

GroupReport group_report(const CoverSpec& spec, std::size_t bound) {
  GeneratorSet gs = build_generators(spec);
  std::vector<Aut> gens = gs.all();
  std::vector<Aut> closure = group_closure(gens, bound);
  std::vector<Aut> cent = center(closure, gens);
  std::vector<Aut> der = derived_subgroup(gens, bound);
  PhiFamily fam = phi_family_from_matrices(gs.verification.matrices);

  GroupReport rep;
  rep.order = (long long)closure.size();
  rep.exponent = exponent_of(closure);
  rep.center_order = (long long)cent.size();
  rep.derived_order = (long long)der.size();
  rep.lambda_dims = lambda_dims(fam);
  rep.max_jump = max_jumps(fam);
  std::set<std::vector<Residue>> central_keys;
  for (const auto& s : cent) central_keys.insert(s.key());
  rep.center_shape_ok = center_shape_matches(closure, central_keys, spec.n());
  return rep;
}

}  // namespace wildcover
