#include "wildcover/ff.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>

namespace wildcover {

const char* errc_name(Errc e) {
  switch (e) {
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::FieldMismatch: return "FieldMismatch";
    case Errc::NoRoot: return "NoRoot";
    case Errc::BoundExceeded: return "BoundExceeded";
    case Errc::NoEmbedding: return "NoEmbedding";
    case Errc::NotIrreducible: return "NotIrreducible";
    case Errc::NotAdditive: return "NotAdditive";
    case Errc::NotSeparable: return "NotSeparable";
    case Errc::WrongShape: return "WrongShape";
    case Errc::DependentBasis: return "DependentBasis";
    case Errc::DependentClasses: return "DependentClasses";
    case Errc::DependentGammas: return "DependentGammas";
    case Errc::NotProportional: return "NotProportional";
    case Errc::SupportViolation: return "SupportViolation";
    case Errc::NotStable: return "NotStable";
    case Errc::RepresentationLawViolated: return "RepresentationLawViolated";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::OrderBoundExceeded: return "OrderBoundExceeded";
    case Errc::Mismatch: return "Mismatch";
    case Errc::ZeroPolynomial: return "ZeroPolynomial";
    case Errc::BadIndex: return "BadIndex";
    case Errc::ParameterConstraintViolated: return "ParameterConstraintViolated";
    case Errc::NotMaxJumps: return "NotMaxJumps";
    case Errc::DivisibilityViolation: return "DivisibilityViolation";
    case Errc::ParseError: return "ParseError";
  }
  return "Error";
}

namespace {

Residue norm_mod(long long v, int p) {
  long long r = v % p;
  if (r < 0) r += p;
  return Residue(r);
}

Residue inv_mod(Residue a, int p) {
  if (a == 0) fail(Errc::DivisionByZero, "inverse of 0 mod p");
  // extended Euclid
  long long t = 0, newt = 1, r = p, newr = a;
  while (newr != 0) {
    long long q = r / newr;
    std::swap(t -= q * newt, newt);
    std::swap(r -= q * newr, newr);
  }
  return norm_mod(t, p);
}

}  // namespace

// ---------------------------------------------------------------------------
// F_p matrices

FpMat fp_identity(int p, int n) {
  FpMat m(p, n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

FpMat fp_mul(const FpMat& x, const FpMat& y) {
  if (x.p != y.p || x.cols != y.rows) fail(Errc::Mismatch, "matrix product shapes");
  FpMat z(x.p, x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      Residue v = x.at(i, k);
      if (v == 0) continue;
      for (int j = 0; j < y.cols; ++j)
        z.at(i, j) = norm_mod(z.at(i, j) + (long long)v * y.at(k, j), x.p);
    }
  return z;
}

FpMat fp_sub(const FpMat& x, const FpMat& y) {
  if (x.p != y.p || x.rows != y.rows || x.cols != y.cols) fail(Errc::Mismatch, "matrix difference shapes");
  FpMat z(x.p, x.rows, x.cols);
  for (size_t i = 0; i < x.a.size(); ++i) z.a[i] = norm_mod((long long)x.a[i] - y.a[i], x.p);
  return z;
}

int fp_rref(FpMat& m, std::vector<int>* pivots) {
  if (pivots) pivots->clear();
  int rank = 0;
  for (int col = 0; col < m.cols && rank < m.rows; ++col) {
    int piv = -1;
    for (int r = rank; r < m.rows; ++r)
      if (m.at(r, col) != 0) { piv = r; break; }
    if (piv < 0) continue;
    if (piv != rank)
      for (int c = 0; c < m.cols; ++c) std::swap(m.at(piv, c), m.at(rank, c));
    Residue inv = inv_mod(m.at(rank, col), m.p);
    for (int c = col; c < m.cols; ++c) m.at(rank, c) = norm_mod((long long)m.at(rank, c) * inv, m.p);
    for (int r = 0; r < m.rows; ++r) {
      if (r == rank) continue;
      Residue f = m.at(r, col);
      if (f == 0) continue;
      for (int c = col; c < m.cols; ++c)
        m.at(r, c) = norm_mod(m.at(r, c) - (long long)f * m.at(rank, c), m.p);
    }
    if (pivots) pivots->push_back(col);
    ++rank;
  }
  return rank;
}

int fp_rank(FpMat m) { return fp_rref(m); }

std::vector<std::vector<Residue>> fp_nullspace(const FpMat& mat) {
  FpMat m = mat;
  std::vector<int> pivots;
  fp_rref(m, &pivots);
  std::vector<bool> is_pivot(m.cols, false);
  for (int c : pivots) is_pivot[c] = true;
  std::vector<std::vector<Residue>> basis;
  for (int freec = 0; freec < m.cols; ++freec) {
    if (is_pivot[freec]) continue;
    std::vector<Residue> v(m.cols, 0);
    v[freec] = 1;
    for (size_t r = 0; r < pivots.size(); ++r)
      v[pivots[r]] = norm_mod(-(long long)m.at(int(r), freec), m.p);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<std::vector<Residue>> fp_solve(const FpMat& mat, const std::vector<Residue>& b) {
  if ((int)b.size() != mat.rows) fail(Errc::Mismatch, "rhs length");
  FpMat m(mat.p, mat.rows, mat.cols + 1);
  for (int r = 0; r < mat.rows; ++r) {
    for (int c = 0; c < mat.cols; ++c) m.at(r, c) = mat.at(r, c);
    m.at(r, mat.cols) = norm_mod(b[r], mat.p);
  }
  std::vector<int> pivots;
  fp_rref(m, &pivots);
  for (size_t r = 0; r < pivots.size(); ++r)
    if (pivots[r] == mat.cols) return std::nullopt;  // pivot in augmented column
  std::vector<Residue> x(mat.cols, 0);
  for (size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = m.at(int(r), mat.cols);
  return x;
}

FpMat fp_inverse(const FpMat& mat) {
  if (mat.rows != mat.cols) fail(Errc::Mismatch, "inverse of non-square matrix");
  int n = mat.rows;
  FpMat m(mat.p, n, 2 * n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) m.at(r, c) = mat.at(r, c);
    m.at(r, n + r) = 1;
  }
  int rank = fp_rref(m);
  if (rank != n) fail(Errc::DivisionByZero, "singular matrix");
  FpMat inv(mat.p, n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) inv.at(r, c) = m.at(r, n + c);
  return inv;
}

// ---------------------------------------------------------------------------
// F_p[x] helpers (coefficient vectors, index = degree) used for modulus search.

namespace {

using PPol = std::vector<Residue>;

void ppol_trim(PPol& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

int ppol_deg(const PPol& f) { return int(f.size()) - 1; }

PPol ppol_mulmod(const PPol& a, const PPol& b, const PPol& mod, int p) {
  PPol prod(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j)
      prod[i + j] = norm_mod(prod[i + j] + (long long)a[i] * b[j], p);
  }
  int dm = ppol_deg(mod);
  for (int d = ppol_deg(prod); d >= dm; --d) {
    Residue lead = prod[d];
    if (lead == 0) continue;
    for (int k = 0; k <= dm; ++k)
      prod[d - dm + k] = norm_mod(prod[d - dm + k] - (long long)lead * mod[k], p);
  }
  prod.resize(dm);
  ppol_trim(prod);
  if (prod.empty()) prod = {0};
  return prod;
}

PPol ppol_gcd(PPol a, PPol b, int p) {
  ppol_trim(a);
  ppol_trim(b);
  while (!b.empty()) {
    // a mod b
    int db = ppol_deg(b);
    Residue binv = inv_mod(b[db], p);
    while (ppol_deg(a) >= db) {
      int da = ppol_deg(a);
      Residue f = norm_mod((long long)a[da] * binv, p);
      if (f != 0)
        for (int k = 0; k <= db; ++k)
          a[da - db + k] = norm_mod(a[da - db + k] - (long long)f * b[k], p);
      a.pop_back();
      ppol_trim(a);
    }
    std::swap(a, b);
  }
  ppol_trim(a);
  return a;
}

// irreducibility over F_p via iterated p-th powers: x^{p^m} = x mod f and
// gcd(x^{p^{m/q}} - x, f) = 1 for every prime q | m.
bool ppol_irreducible(const PPol& f, int p) {
  int m = ppol_deg(f);
  if (m == 1) return true;
  if (f[0] == 0) return false;  // divisible by x
  // table: x^{p*i} mod f for i < m
  PPol xp = {0, 1};  // will become x^p mod f
  {
    PPol acc = {1};
    for (int e = 0; e < p; ++e) acc = ppol_mulmod(acc, PPol{0, 1}, f, p);
    xp = acc;
  }
  std::vector<PPol> xp_tab(m);
  xp_tab[0] = {1};
  for (int i = 1; i < m; ++i) xp_tab[i] = ppol_mulmod(xp_tab[i - 1], xp, f, p);
  auto pth_power = [&](const PPol& h) {
    PPol r = {0};
    for (size_t i = 0; i < h.size(); ++i) {
      if (h[i] == 0) continue;  // coefficients are in F_p: c^p = c
      const PPol& t = xp_tab[i];
      if (r.size() < t.size()) r.resize(t.size(), 0);
      for (size_t k = 0; k < t.size(); ++k) r[k] = norm_mod(r[k] + (long long)h[i] * t[k], p);
    }
    ppol_trim(r);
    if (r.empty()) r = {0};
    return r;
  };
  std::vector<int> prime_divs;
  {
    int mm = m;
    for (int q = 2; q * q <= mm; ++q)
      if (mm % q == 0) {
        prime_divs.push_back(q);
        while (mm % q == 0) mm /= q;
      }
    if (mm > 1) prime_divs.push_back(mm);
  }
  PPol h = {0, 1};
  for (int k = 1; k <= m; ++k) {
    h = pth_power(h);
    for (int q : prime_divs) {
      if (k != m / q) continue;
      PPol d = h;
      if (d.size() < 2) d.resize(2, 0);
      d[1] = norm_mod(d[1] - 1, p);
      ppol_trim(d);
      PPol g = ppol_gcd(d, f, p);
      if (ppol_deg(g) > 0) return false;
    }
  }
  if (h.size() < 2) h.resize(2, 0);
  h[1] = norm_mod(h[1] - 1, p);
  ppol_trim(h);
  return h.empty();
}

}  // namespace

// ---------------------------------------------------------------------------
// FieldCtx

std::vector<Residue> FieldCtx::find_irreducible(int p, int m) {
  if (p < 2 || m < 1) fail(Errc::OutOfRange, "field parameters");
  // counter encodes (c_0, ..., c_{m-1}) base p, c_0 least significant digit
  for (long long counter = 0;; ++counter) {
    PPol f(m + 1, 0);
    long long v = counter;
    bool overflow = false;
    for (int i = 0; i < m; ++i) {
      f[i] = Residue(v % p);
      v /= p;
    }
    if (v != 0) overflow = true;
    if (overflow) fail(Errc::NoRoot, "no irreducible found (exhausted)");  // cannot happen
    f[m] = 1;
    if (ppol_irreducible(f, p)) return f;
  }
}

namespace {
std::mutex g_ctx_mutex;
std::map<std::pair<int, int>, CtxPtr>& ctx_cache() {
  static std::map<std::pair<int, int>, CtxPtr> cache;
  return cache;
}
}  // namespace

CtxPtr FieldCtx::get(int p, int m) {
  std::lock_guard<std::mutex> lock(g_ctx_mutex);
  auto key = std::make_pair(p, m);
  auto it = ctx_cache().find(key);
  if (it != ctx_cache().end()) return it->second;
  auto ctx = std::shared_ptr<FieldCtx>(new FieldCtx());
  ctx->p = p;
  ctx->m = m;
  ctx->modulus = find_irreducible(p, m);
  ctx->build_tables();
  CtxPtr c = ctx;
  ctx_cache()[key] = c;
  return c;
}

CtxPtr FieldCtx::make(int p, std::vector<Residue> modulus) {
  ppol_trim(modulus);
  int m = ppol_deg(modulus);
  if (p < 2 || m < 1) fail(Errc::OutOfRange, "field parameters");
  for (auto& c : modulus) c = norm_mod(c, p);
  if (modulus.back() != 1) fail(Errc::OutOfRange, "modulus must be monic");
  if (!ppol_irreducible(modulus, p)) fail(Errc::NotIrreducible, "modulus is reducible");
  auto ctx = std::shared_ptr<FieldCtx>(new FieldCtx());
  ctx->p = p;
  ctx->m = m;
  ctx->modulus = std::move(modulus);
  ctx->build_tables();
  return ctx;
}

void FieldCtx::build_tables() {
  // t^{m+k} mod modulus for k in [0, m-1]
  xpow_.assign(std::max(m - 1, 0) + 1, std::vector<Residue>(m, 0));
  std::vector<Residue> cur(m, 0);
  for (int i = 0; i < m; ++i) cur[i] = norm_mod(-(long long)modulus[i], p);  // t^m
  xpow_[0] = cur;
  for (int k = 1; k <= m - 1; ++k) {
    std::vector<Residue> nxt(m, 0);
    // multiply cur by t
    Residue top = cur[m - 1];
    for (int i = m - 1; i >= 1; --i) nxt[i] = cur[i - 1];
    nxt[0] = 0;
    if (top != 0)
      for (int i = 0; i < m; ++i)
        nxt[i] = norm_mod(nxt[i] + (long long)top * xpow_[0][i], p);
    xpow_[k] = nxt;
    cur = nxt;
  }
  // matrix of x -> x^p: columns are (t^j)^p = (t^p)^j
  frob_ = FpMat(p, m, m);
  // t^p as coefficient vector
  std::vector<Residue> tp(m, 0);
  if (p < m) {
    tp[p] = 1;
  } else {
    // reduce the monomial x^p step by step
    std::vector<Residue> mono(m, 0);
    mono[m - 1] = 1;  // t^{m-1}
    for (int e = m - 1; e < p; ++e) {
      // multiply by t
      std::vector<Residue> nxt(m, 0);
      Residue top = mono[m - 1];
      for (int i = m - 1; i >= 1; --i) nxt[i] = mono[i - 1];
      if (top != 0)
        for (int i = 0; i < m; ++i) nxt[i] = norm_mod(nxt[i] + (long long)top * xpow_[0][i], p);
      mono = nxt;
    }
    tp = mono;
  }
  std::vector<Residue> col(m, 0);
  col[0] = 1;  // (t^0)^p = 1
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) frob_.at(i, j) = col[i];
    if (j + 1 < m) {
      // col *= tp
      std::vector<Residue> prod(2 * m - 1, 0);
      for (int i = 0; i < m; ++i) {
        if (col[i] == 0) continue;
        for (int k = 0; k < m; ++k)
          prod[i + k] = norm_mod(prod[i + k] + (long long)col[i] * tp[k], p);
      }
      col = reduce_product(prod);
    }
  }
}

std::vector<Residue> FieldCtx::reduce_product(const std::vector<Residue>& prod) const {
  std::vector<Residue> r(m, 0);
  for (int i = 0; i < m && i < (int)prod.size(); ++i) r[i] = prod[i];
  for (int d = m; d < (int)prod.size(); ++d) {
    Residue c = prod[d];
    if (c == 0) continue;
    const std::vector<Residue>& rep = xpow_[d - m];
    for (int i = 0; i < m; ++i) r[i] = norm_mod(r[i] + (long long)c * rep[i], p);
  }
  return r;
}

FieldElement FieldCtx::zero() const { return FieldElement(shared_from_this(), std::vector<Residue>(m, 0)); }

FieldElement FieldCtx::one() const { return from_int(1); }

FieldElement FieldCtx::from_int(long long v) const {
  std::vector<Residue> c(m, 0);
  c[0] = norm_mod(v, p);
  return FieldElement(shared_from_this(), std::move(c));
}

FieldElement FieldCtx::gen() const {
  std::vector<Residue> c(m, 0);
  if (m == 1) {
    // residue class of the variable in F_p[x]/(x + c0): the constant -c0
    c[0] = norm_mod(-(long long)modulus[0], p);
  } else {
    c[1] = 1;
  }
  return FieldElement(shared_from_this(), std::move(c));
}

FieldElement FieldCtx::element(std::vector<Residue> c) const {
  if ((int)c.size() > m) fail(Errc::OutOfRange, "coefficient vector too long");
  c.resize(m, 0);
  for (auto& v : c) v = norm_mod(v, p);
  return FieldElement(shared_from_this(), std::move(c));
}

FieldElement FieldCtx::element_by_index(long long i) const {
  if (i < 0) fail(Errc::OutOfRange, "element index");
  std::vector<Residue> c(m, 0);
  for (int d = 0; d < m && i > 0; ++d) {
    c[d] = Residue(i % p);
    i /= p;
  }
  if (i != 0) fail(Errc::OutOfRange, "element index exceeds field size");
  return FieldElement(shared_from_this(), std::move(c));
}

long long FieldCtx::order() const {
  long long v = 1;
  for (int i = 0; i < m; ++i) {
    if (v > (long long)4e18 / p) fail(Errc::OutOfRange, "field order overflows int64");
    v *= p;
  }
  return v;
}

FieldElement FieldCtx::frobenius(const FieldElement& a, long long k) const {
  if (!a.ctx()->same_field(*this)) fail(Errc::FieldMismatch, "frobenius ctx");
  long long kk = ((k % m) + m) % m;
  std::vector<Residue> v = a.coeffs();
  for (long long step = 0; step < kk; ++step) {
    std::vector<Residue> w(m, 0);
    for (int i = 0; i < m; ++i) {
      if (v[i] == 0) continue;
      for (int r = 0; r < m; ++r) w[r] = norm_mod(w[r] + (long long)frob_.at(r, i) * v[i], p);
    }
    v = std::move(w);
  }
  return FieldElement(a.ctx(), std::move(v));
}

Residue FieldCtx::trace_to_prime(const FieldElement& a) const {
  if (!a.ctx()->same_field(*this)) fail(Errc::FieldMismatch, "trace ctx");
  FieldElement acc = a, cur = a;
  for (int i = 1; i < m; ++i) {
    cur = frobenius(cur, 1);
    acc = acc + cur;
  }
  for (int i = 1; i < m; ++i)
    if (acc.coeffs()[i] != 0) fail(Errc::Mismatch, "trace not in prime field");
  return acc.coeffs()[0];
}

FieldElement FieldCtx::artin_schreier_root(const FieldElement& c) const {
  if (!c.ctx()->same_field(*this)) fail(Errc::FieldMismatch, "artin_schreier_root ctx");
  FpMat mat = fp_sub(frob_, fp_identity(p, m));
  auto sol = fp_solve(mat, c.coeffs());
  if (!sol) fail(Errc::NoRoot, "z^p - z = c has no root in this field (trace obstruction)");
  return FieldElement(c.ctx(), std::move(*sol));
}

FpMat FieldCtx::mult_matrix(const FieldElement& a) const {
  if (!a.ctx()->same_field(*this)) fail(Errc::FieldMismatch, "mult_matrix ctx");
  FpMat mat(p, m, m);
  FieldElement col = a;
  FieldElement t = gen();
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) mat.at(i, j) = col.coeffs()[i];
    if (j + 1 < m) col = col * t;
  }
  return mat;
}

std::vector<FieldElement> FieldCtx::additive_kernel(const std::vector<FieldElement>& coeffs) const {
  // matrix of y -> sum_i a_i * y^{p^i}, column j = image of t^j
  FpMat mat(p, m, m);
  for (int j = 0; j < m; ++j) {
    std::vector<Residue> basis(m, 0);
    basis[j] = 1;
    FieldElement v(shared_from_this(), basis);
    FieldElement img = zero();
    FieldElement cur = v;
    for (size_t i = 0; i < coeffs.size(); ++i) {
      if (!coeffs[i].ctx()->same_field(*this)) fail(Errc::FieldMismatch, "additive_kernel coefficients");
      if (!coeffs[i].is_zero()) img = img + coeffs[i] * cur;
      if (i + 1 < coeffs.size()) cur = frobenius(cur, 1);
    }
    for (int i = 0; i < m; ++i) mat.at(i, j) = img.coeffs()[i];
  }
  auto null = fp_nullspace(mat);
  std::vector<FieldElement> basis;
  basis.reserve(null.size());
  for (auto& v : null) basis.emplace_back(shared_from_this(), std::move(v));
  return basis;
}

// ---------------------------------------------------------------------------
// FieldElement

FieldElement::FieldElement(CtxPtr ctx, std::vector<Residue> coeffs) : ctx_(std::move(ctx)), c_(std::move(coeffs)) {
  if ((int)c_.size() != ctx_->m) fail(Errc::OutOfRange, "coefficient vector length");
}

bool FieldElement::is_zero() const {
  for (Residue v : c_)
    if (v != 0) return false;
  return true;
}

bool FieldElement::is_one() const {
  if (c_[0] != 1) return false;
  for (size_t i = 1; i < c_.size(); ++i)
    if (c_[i] != 0) return false;
  return true;
}

bool FieldElement::in_prime_field() const {
  for (size_t i = 1; i < c_.size(); ++i)
    if (c_[i] != 0) return false;
  return true;
}

Residue FieldElement::as_prime() const {
  if (!in_prime_field()) fail(Errc::OutOfRange, "element not in prime subfield");
  return c_[0];
}

namespace {
void check_same(const FieldElement& a, const FieldElement& b) {
  if (a.ctx() == b.ctx()) return;
  if (!a.ctx() || !b.ctx() || !a.ctx()->same_field(*b.ctx())) fail(Errc::FieldMismatch, "operands in different fields");
}
}  // namespace

FieldElement FieldElement::operator+(const FieldElement& o) const {
  check_same(*this, o);
  std::vector<Residue> r(c_.size());
  for (size_t i = 0; i < c_.size(); ++i) r[i] = norm_mod((long long)c_[i] + o.c_[i], ctx_->p);
  return FieldElement(ctx_, std::move(r));
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
  check_same(*this, o);
  std::vector<Residue> r(c_.size());
  for (size_t i = 0; i < c_.size(); ++i) r[i] = norm_mod((long long)c_[i] - o.c_[i], ctx_->p);
  return FieldElement(ctx_, std::move(r));
}

FieldElement FieldElement::operator-() const {
  std::vector<Residue> r(c_.size());
  for (size_t i = 0; i < c_.size(); ++i) r[i] = norm_mod(-(long long)c_[i], ctx_->p);
  return FieldElement(ctx_, std::move(r));
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
  check_same(*this, o);
  int m = ctx_->m, p = ctx_->p;
  std::vector<Residue> prod(2 * m - 1, 0);
  for (int i = 0; i < m; ++i) {
    if (c_[i] == 0) continue;
    for (int j = 0; j < m; ++j)
      prod[i + j] = norm_mod(prod[i + j] + (long long)c_[i] * o.c_[j], p);
  }
  return FieldElement(ctx_, ctx_->reduce_product(prod));
}

FieldElement FieldElement::inv() const {
  if (is_zero()) fail(Errc::DivisionByZero, "field inverse of zero");
  // extended Euclid in F_p[x] against the modulus
  int p = ctx_->p;
  PPol r0 = ctx_->modulus, r1(c_.begin(), c_.end());
  ppol_trim(r1);
  PPol s0 = {0}, s1 = {1};
  while (!(r1.size() == 1 || ppol_deg(r1) == 0)) {
    // divide r0 by r1
    PPol q(std::max<int>(ppol_deg(r0) - ppol_deg(r1) + 1, 1), 0);
    PPol rem = r0;
    Residue linv = inv_mod(r1.back(), p);
    while (ppol_deg(rem) >= ppol_deg(r1) && !rem.empty()) {
      int shift = ppol_deg(rem) - ppol_deg(r1);
      Residue f = norm_mod((long long)rem.back() * linv, p);
      q[shift] = f;
      for (int k = 0; k <= ppol_deg(r1); ++k)
        rem[shift + k] = norm_mod(rem[shift + k] - (long long)f * r1[k], p);
      ppol_trim(rem);
    }
    // s2 = s0 - q*s1
    PPol qs(q.size() + s1.size() - 1, 0);
    for (size_t i = 0; i < q.size(); ++i) {
      if (q[i] == 0) continue;
      for (size_t j = 0; j < s1.size(); ++j)
        qs[i + j] = norm_mod(qs[i + j] + (long long)q[i] * s1[j], p);
    }
    PPol s2(std::max(s0.size(), qs.size()), 0);
    for (size_t i = 0; i < s2.size(); ++i) {
      Residue a = i < s0.size() ? s0[i] : 0;
      Residue b = i < qs.size() ? qs[i] : 0;
      s2[i] = norm_mod((long long)a - b, p);
    }
    r0 = std::move(r1);
    r1 = std::move(rem);
    s0 = std::move(s1);
    s1 = std::move(s2);
    if (r1.empty()) fail(Errc::DivisionByZero, "element not invertible (modulus not irreducible?)");
  }
  Residue scale = inv_mod(r1[0], p);
  std::vector<Residue> out(ctx_->m, 0);
  for (size_t i = 0; i < s1.size() && i < out.size(); ++i) out[i] = norm_mod((long long)s1[i] * scale, p);
  return FieldElement(ctx_, std::move(out));
}

FieldElement FieldElement::pow(long long e) const {
  if (e < 0) return inv().pow(-e);
  FieldElement base = *this, acc = ctx_->one();
  while (e > 0) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

bool FieldElement::operator==(const FieldElement& o) const {
  check_same(*this, o);
  return c_ == o.c_;
}

bool FieldElement::operator<(const FieldElement& o) const {
  check_same(*this, o);
  return c_ < o.c_;
}

std::string FieldElement::str() const {
  std::ostringstream os;
  bool first = true;
  for (int d = ctx_->m - 1; d >= 0; --d) {
    Residue v = c_[d];
    if (v == 0) continue;
    if (!first) os << " + ";
    if (d == 0) {
      os << v;
    } else {
      if (v != 1) os << v << "*";
      os << "t";
      if (d > 1) os << "^" << d;
    }
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

// ---------------------------------------------------------------------------
// Polynomials over a field (local helpers for root finding / embeddings)

namespace {

using FPol = std::vector<FieldElement>;  // index = degree

void fpol_trim(FPol& f) {
  while (!f.empty() && f.back().is_zero()) f.pop_back();
}

int fpol_deg(const FPol& f) { return int(f.size()) - 1; }

FPol fpol_monic(FPol f) {
  fpol_trim(f);
  if (f.empty()) return f;
  FieldElement inv = f.back().inv();
  for (auto& c : f) c = c * inv;
  return f;
}

FPol fpol_mod(FPol a, const FPol& b) {
  fpol_trim(a);
  FieldElement linv = b.back().inv();
  while (fpol_deg(a) >= fpol_deg(b)) {
    int shift = fpol_deg(a) - fpol_deg(b);
    FieldElement f = a.back() * linv;
    for (int k = 0; k <= fpol_deg(b); ++k) a[shift + k] = a[shift + k] - f * b[k];
    fpol_trim(a);
  }
  return a;
}

FPol fpol_mulmod(const FPol& a, const FPol& b, const FPol& mod, const CtxPtr& ctx) {
  if (a.empty() || b.empty()) return {};
  FPol prod(a.size() + b.size() - 1, ctx->zero());
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (size_t j = 0; j < b.size(); ++j)
      if (!b[j].is_zero()) prod[i + j] = prod[i + j] + a[i] * b[j];
  }
  return fpol_mod(std::move(prod), mod);
}

FPol fpol_gcd(FPol a, FPol b) {
  fpol_trim(a);
  fpol_trim(b);
  while (!b.empty()) {
    FPol r = fpol_mod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return fpol_monic(std::move(a));
}

FPol fpol_divexact(FPol a, const FPol& b) {
  fpol_trim(a);
  FPol q(std::max<int>(fpol_deg(a) - fpol_deg(b) + 1, 0), b.empty() ? FieldElement() : b[0].ctx()->zero());
  FieldElement linv = b.back().inv();
  while (fpol_deg(a) >= fpol_deg(b) && !a.empty()) {
    int shift = fpol_deg(a) - fpol_deg(b);
    FieldElement f = a.back() * linv;
    q[shift] = f;
    for (int k = 0; k <= fpol_deg(b); ++k) a[shift + k] = a[shift + k] - f * b[k];
    fpol_trim(a);
  }
  return q;
}

// derivative
FPol fpol_deriv(const FPol& f, const CtxPtr& ctx) {
  if (f.size() <= 1) return {};
  FPol d(f.size() - 1, ctx->zero());
  for (size_t i = 1; i < f.size(); ++i) d[i - 1] = f[i] * ctx->from_int((long long)i);
  fpol_trim(d);
  return d;
}

// p-th power of h modulo the monic polynomial mod (both over ctx)
FPol fpol_pth_power_mod(const FPol& h, const FPol& mod, const CtxPtr& ctx) {
  int dm = fpol_deg(mod);
  // x^{p*i} mod `mod` for i < dm
  FPol xp = {ctx->zero(), ctx->one()};  // x
  {
    FPol acc = {ctx->one()};
    for (int e = 0; e < ctx->p; ++e) acc = fpol_mulmod(acc, FPol{ctx->zero(), ctx->one()}, mod, ctx);
    xp = acc;
  }
  std::vector<FPol> tab(dm);
  tab[0] = {ctx->one()};
  for (int i = 1; i < dm; ++i) tab[i] = fpol_mulmod(tab[i - 1], xp, mod, ctx);
  FPol r;
  for (size_t i = 0; i < h.size(); ++i) {
    if (h[i].is_zero()) continue;
    FieldElement cp = ctx->frobenius(h[i], 1);
    const FPol& t = tab[i];
    if (r.size() < t.size()) r.resize(t.size(), ctx->zero());
    for (size_t k = 0; k < t.size(); ++k) r[k] = r[k] + cp * t[k];
  }
  fpol_trim(r);
  return r;
}

void collect_roots(FPol g, const CtxPtr& ctx, std::vector<FieldElement>& out) {
  fpol_trim(g);
  if (fpol_deg(g) <= 0) return;
  if (fpol_deg(g) == 1) {
    out.push_back(-(g[0] * g[1].inv()));
    return;
  }
  // split with gcd(g, Tr(u x) - c) for deterministic u, c.  The power basis
  // t, t^2, ... comes first: the trace form is nondegenerate, so any two
  // distinct roots are separated by Tr(t^k x) for some k < m, which makes
  // every pass here split g.  (Index-order candidates alone can stall for a
  // long time: low-degree u often have degenerate traces when the modulus is
  // sparse.)  The indexed enumeration afterwards is a safety net.
  long long u_wrap = (1LL << 62);
  if (ctx->m * 4 < 60) {  // field small enough that p^m fits comfortably
    long long ord = 1;
    for (int i = 0; i < ctx->m; ++i) ord *= ctx->p;
    u_wrap = ord;
  }
  FieldElement tpow = ctx->one();
  for (long long ui = 1; ui < (1 << 20); ++ui) {
    FieldElement u;
    if (ui < ctx->m) {
      tpow = tpow * ctx->gen();
      u = tpow;
    } else {
      long long idx = 1 + (ui - ctx->m) % (u_wrap - 1);
      u = ctx->element_by_index(idx);
    }
    if (u.is_zero()) continue;
    // trace polynomial sum_{i<M} (u x)^{p^i} mod g
    FPol cur = fpol_mod(FPol{ctx->zero(), u}, g);
    FPol tr = cur;
    for (int i = 1; i < ctx->m; ++i) {
      cur = fpol_pth_power_mod(cur, g, ctx);
      if (tr.size() < cur.size()) tr.resize(cur.size(), ctx->zero());
      for (size_t k = 0; k < cur.size(); ++k) tr[k] = tr[k] + cur[k];
    }
    fpol_trim(tr);
    for (int c = 0; c < ctx->p; ++c) {
      FPol shifted = tr;
      if (shifted.empty()) shifted.push_back(ctx->zero());
      shifted[0] = shifted[0] - ctx->from_int(c);
      FPol h = fpol_gcd(shifted, g);
      if (fpol_deg(h) > 0 && fpol_deg(h) < fpol_deg(g)) {
        FPol rest = fpol_divexact(g, h);
        collect_roots(std::move(h), ctx, out);
        collect_roots(std::move(rest), ctx, out);
        return;
      }
    }
  }
  fail(Errc::NoRoot, "root splitting did not converge");
}

}  // namespace

std::vector<FieldElement> roots_in_field(const std::vector<FieldElement>& coeffs, const CtxPtr& ctx) {
  FPol f = coeffs;
  fpol_trim(f);
  if (f.empty()) fail(Errc::ZeroPolynomial, "roots of the zero polynomial");
  if (fpol_deg(f) == 0) return {};
  f = fpol_monic(std::move(f));
  // squarefree part
  FPol d = fpol_deriv(f, ctx);
  if (!d.empty()) {
    FPol g = fpol_gcd(f, d);
    if (fpol_deg(g) > 0) f = fpol_divexact(f, g);
  } else {
    // f = h(x^p); every root of f is a root of h(x^p) -> use f as is (roots
    // still detected through the x^q - x gcd below, with multiplicity folded)
  }
  // keep only the part splitting in this field: gcd(f, x^q - x)
  FPol cur = fpol_mod(FPol{ctx->zero(), ctx->one()}, f);
  for (int i = 0; i < ctx->m; ++i) cur = fpol_pth_power_mod(cur, f, ctx);
  // cur = x^{p^m} mod f; subtract x
  FPol diff = cur;
  if (diff.size() < 2) diff.resize(2, ctx->zero());
  diff[1] = diff[1] - ctx->one();
  fpol_trim(diff);
  FPol split = diff.empty() ? f : fpol_gcd(diff, f);
  std::vector<FieldElement> out;
  collect_roots(split, ctx, out);
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Embeddings

Embedding::Embedding(CtxPtr src_, CtxPtr dst_) : src(std::move(src_)), dst(std::move(dst_)) {
  if (src->p != dst->p || dst->m % src->m != 0)
    fail(Errc::NoEmbedding, "no field embedding (degree must divide target degree)");
  gen_pow_.reserve(src->m);
  if (src->same_field(*dst)) {
    FieldElement t = dst->gen();
    FieldElement acc = dst->one();
    for (int i = 0; i < src->m; ++i) {
      gen_pow_.push_back(acc);
      if (i + 1 < src->m) acc = acc * t;
    }
    return;
  }
  // image of the source generator: smallest root of the source modulus in dst
  FPol f(src->modulus.size(), dst->zero());
  for (size_t i = 0; i < src->modulus.size(); ++i) f[i] = dst->from_int(src->modulus[i]);
  std::vector<FieldElement> roots = roots_in_field(f, dst);
  if (roots.empty()) fail(Errc::NoEmbedding, "source modulus has no root in target");
  FieldElement img = roots.front();
  if (src->m == 1) img = dst->from_int(norm_mod(-(long long)src->modulus[0], src->p));
  FieldElement acc = dst->one();
  for (int i = 0; i < src->m; ++i) {
    gen_pow_.push_back(acc);
    if (i + 1 < src->m) acc = acc * img;
  }
}

FieldElement Embedding::operator()(const FieldElement& a) const {
  if (!a.ctx()->same_field(*src)) fail(Errc::FieldMismatch, "embedding source mismatch");
  FieldElement out = dst->zero();
  for (int i = 0; i < src->m; ++i)
    if (a.coeffs()[i] != 0) out = out + gen_pow_[i] * dst->from_int(a.coeffs()[i]);
  return out;
}

namespace {
std::mutex g_emb_mutex;
std::map<std::pair<const FieldCtx*, const FieldCtx*>, std::shared_ptr<const Embedding>>& emb_cache() {
  static std::map<std::pair<const FieldCtx*, const FieldCtx*>, std::shared_ptr<const Embedding>> cache;
  return cache;
}
}  // namespace

FieldElement embed(const FieldElement& a, const CtxPtr& target) {
  std::shared_ptr<const Embedding> emb;
  {
    std::lock_guard<std::mutex> lock(g_emb_mutex);
    auto key = std::make_pair(a.ctx().get(), target.get());
    auto it = emb_cache().find(key);
    if (it != emb_cache().end()) emb = it->second;
  }
  if (!emb) {
    emb = std::make_shared<const Embedding>(a.ctx(), target);
    std::lock_guard<std::mutex> lock(g_emb_mutex);
    emb_cache()[std::make_pair(a.ctx().get(), target.get())] = emb;
  }
  return (*emb)(a);
}

// ---------------------------------------------------------------------------

int minimal_splitting_degree(const std::vector<FieldElement>& coeffs, int bound) {
  std::vector<FieldElement> c = coeffs;
  while (!c.empty() && c.back().is_zero()) c.pop_back();
  if (c.empty()) fail(Errc::ZeroPolynomial, "splitting degree of zero polynomial");
  if (c[0].is_zero()) fail(Errc::NotSeparable, "additive polynomial with a_0 = 0 is inseparable");
  int r = int(c.size()) - 1;
  const CtxPtr& base = c[0].ctx();
  for (int md = base->m; md <= bound; md += base->m) {
    CtxPtr ext = FieldCtx::get(base->p, md);
    std::vector<FieldElement> cc;
    cc.reserve(c.size());
    for (const auto& a : c) cc.push_back(embed(a, ext));
    if ((int)ext->additive_kernel(cc).size() == r) return md;
  }
  fail(Errc::BoundExceeded, "splitting field degree exceeds bound " + std::to_string(bound));
}

}  // namespace wildcover
