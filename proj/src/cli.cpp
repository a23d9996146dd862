#include "wildcover/cli.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "wildcover/families.hpp"
#include "wildcover/grp.hpp"

namespace wildcover {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void parse_fail(int line, int col, const std::string& msg) {
  fail(Errc::ParseError,
       "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg);
}

bool small_prime(int p) { return p == 2 || p == 3 || p == 5 || p == 7 || p == 11 || p == 13; }

void check_field_params(int p, int m, int line = 1, int col = 1) {
  if (!small_prime(p)) parse_fail(line, col, "p must be one of 2, 3, 5, 7, 11, 13");
  if (m < 1 || m > 48) parse_fail(line, col, "m must be between 1 and 48");
}

// ---------------------------------------------------------------------------
// Recursive-descent parser for polynomial literals.
//
//   expr   := ['+'|'-'] term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := atom ('^' natural)?
//   atom   := natural | 't' | VAR | '(' expr ')'
//
// `var` names the variable symbol ('X' for function lines, 't' for modulus
// lines, 0 for plain field elements); 't' denotes the field generator when the
// ambient field is a proper extension.  Positions are reported as
// (line, col0 + offset), so single-line inputs get exact columns.

class ExprParser {
 public:
  ExprParser(std::string text, CtxPtr ctx, char var, int line, int col0)
      : s_(std::move(text)), ctx_(std::move(ctx)), var_(var), line_(line), col0_(col0) {}

  Poly parse() {
    skip();
    if (i_ == s_.size()) die("empty expression");
    Poly v = expr();
    skip();
    if (i_ != s_.size()) die(std::string("unexpected '") + s_[i_] + "'");
    return v;
  }

 private:
  [[noreturn]] void die(const std::string& msg) const {
    parse_fail(line_, col0_ + int(i_), msg);
  }

  void skip() {
    while (i_ < s_.size() && (s_[i_] == ' ' || s_[i_] == '\t')) ++i_;
  }

  bool at(char c) const { return i_ < s_.size() && s_[i_] == c; }

  Poly expr() {
    bool negate = false;
    if (at('+') || at('-')) {
      negate = s_[i_] == '-';
      ++i_;
      skip();
    }
    Poly acc = term();
    if (negate) acc = -acc;
    skip();
    while (at('+') || at('-')) {
      const bool minus = s_[i_] == '-';
      ++i_;
      skip();
      const Poly t = term();
      acc = minus ? acc - t : acc + t;
      skip();
    }
    return acc;
  }

  Poly term() {
    Poly acc = factor();
    skip();
    while (at('*')) {
      ++i_;
      skip();
      acc = acc * factor();
      skip();
    }
    return acc;
  }

  Poly factor() {
    Poly base = atom();
    skip();
    if (!at('^')) return base;
    ++i_;
    skip();
    const long long e = natural("exponent");
    if (e > 10000) die("exponent too large (limit 10000)");
    if (e == 0) return Poly::monomial(ctx_->one(), 0);
    if (base.is_zero()) return Poly::zero(ctx_);
    return base.pow(int(e));
  }

  Poly atom() {
    if (i_ == s_.size()) die("expected a number, 't', a variable, or '('");
    const char c = s_[i_];
    if (c >= '0' && c <= '9')
      return Poly::monomial(ctx_->from_int(natural("number")), 0);
    if (var_ != 0 && c == var_) {
      ++i_;
      return Poly::monomial(ctx_->one(), 1);
    }
    if (c == 't') {
      if (ctx_->m == 1) die("'t' denotes the field generator and needs m > 1");
      ++i_;
      return Poly::monomial(ctx_->gen(), 0);
    }
    if (c == '(') {
      ++i_;
      skip();
      Poly v = expr();
      skip();
      if (!at(')')) die("expected ')'");
      ++i_;
      return v;
    }
    die(std::string("unexpected '") + c + "'");
  }

  long long natural(const std::string& what) {
    if (i_ == s_.size() || s_[i_] < '0' || s_[i_] > '9') die("expected " + what);
    long long v = 0;
    int digits = 0;
    while (i_ < s_.size() && s_[i_] >= '0' && s_[i_] <= '9') {
      if (++digits > 15) die(what + " too large");
      v = v * 10 + (s_[i_] - '0');
      ++i_;
    }
    return v;
  }

  std::string s_;
  CtxPtr ctx_;
  char var_ = 0;
  int line_ = 1;
  int col0_ = 1;
  size_t i_ = 0;
};

Poly parse_poly_at(const std::string& text, const CtxPtr& ctx, int line, int col) {
  return ExprParser(text, ctx, 'X', line, col).parse();
}

FieldElement parse_element_at(const std::string& text, const CtxPtr& ctx, int line, int col) {
  const Poly v = ExprParser(text, ctx, 0, line, col).parse();
  return v.is_zero() ? ctx->zero() : v.coeff(0);
}

// Modulus line: a monic degree-m polynomial in 't' over F_p.
CtxPtr parse_modulus(int p, int m, const std::string& text, int line, int col) {
  const Poly f = ExprParser(text, FieldCtx::get(p, 1), 't', line, col).parse();
  if (f.degree() != m) parse_fail(line, col, "modulus degree must equal m");
  const FieldElement lead = f.leading();
  if (!lead.is_one()) parse_fail(line, col, "modulus must be monic");
  std::vector<Residue> c(size_t(m) + 1, 0);
  for (int i = 0; i <= m; ++i) {
    const FieldElement ci = f.coeff(i);
    c[size_t(i)] = ci.is_zero() ? 0 : ci.as_prime();
  }
  try {
    return FieldCtx::make(p, std::move(c));
  } catch (const Error& e) {
    parse_fail(line, col, e.what());
  }
}

std::string modulus_str(const FieldCtx& ctx) {
  std::ostringstream os;
  bool first = true;
  for (int d = int(ctx.modulus.size()) - 1; d >= 0; --d) {
    const Residue v = ctx.modulus[size_t(d)];
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
  return os.str();
}

std::string strip_spaces(std::string s) {
  s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
  return s;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    const size_t pos = s.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Family construction shared by the `family` subcommand and the `family =`
// directive inside description files.  The token grammar is the subcommand's
// argument list, e.g. {"special", "-p", "5", "-n", "2"}.

struct FamilyBuild {
  CoverSpec cover;
  std::string normalized;  // canonical directive that rebuilds the same cover
};

FamilyBuild family_from_tokens(const std::vector<std::string>& tokens) {
  CLI::App fam("family");
  fam.set_help_flag("");
  fam.require_subcommand(1);

  auto* sp = fam.add_subcommand("special", "");
  int sp_p = 0, sp_n = 0;
  sp->add_option("-p", sp_p)->required();
  sp->add_option("-n", sp_n)->required();

  auto* un = fam.add_subcommand("universal", "");
  int un_n = 0, un_m = 1;
  std::string b0, b5 = "0", c7 = "0", c9 = "0", d8 = "0", d11 = "0", d13 = "0";
  un->add_option("-n", un_n)->required();
  un->add_option("-m", un_m);
  un->add_option("--b0", b0)->required();
  un->add_option("--b5", b5);
  un->add_option("--c7", c7);
  un->add_option("--c9", c9);
  un->add_option("--d8", d8);
  un->add_option("--d11", d11);
  un->add_option("--d13", d13);

  auto* pr = fam.add_subcommand("prop43", "");
  int pr_p = 5, pr_m = 1, pr_s = 0, pr_d = 0;
  std::string gammas_text, s1_text, constants_text;
  pr->add_option("-p", pr_p);
  pr->add_option("-m", pr_m);
  pr->add_option("-s", pr_s)->required();
  pr->add_option("-d", pr_d)->required();
  pr->add_option("--gammas", gammas_text)->required();
  pr->add_option("--s1", s1_text)->required();
  auto* constants_opt = pr->add_option("--constants", constants_text);

  try {
    std::vector<std::string> rev(tokens.rbegin(), tokens.rend());
    fam.parse(rev);
  } catch (const CLI::ParseError& e) {
    fail(Errc::ParseError, std::string("family arguments: ") + e.what());
  }

  FamilyBuild out;
  if (*sp) {
    out.cover = special_family(sp_p, sp_n);
    out.normalized = "special -p " + std::to_string(sp_p) + " -n " + std::to_string(sp_n);
    return out;
  }
  if (*un) {
    check_field_params(5, un_m);
    const CtxPtr ctx = FieldCtx::get(5, un_m);
    UniversalParams prm;
    prm.b0 = parse_element_at(b0, ctx, 1, 1);
    prm.b5 = parse_element_at(b5, ctx, 1, 1);
    prm.c7 = parse_element_at(c7, ctx, 1, 1);
    prm.c9 = parse_element_at(c9, ctx, 1, 1);
    prm.d8 = parse_element_at(d8, ctx, 1, 1);
    prm.d11 = parse_element_at(d11, ctx, 1, 1);
    prm.d13 = parse_element_at(d13, ctx, 1, 1);
    out.cover = universal_p5(un_n, prm);
    std::ostringstream os;
    os << "universal -n " << un_n << " -m " << un_m << " --b0 " << strip_spaces(prm.b0.str());
    if (un_n == 2) os << " --b5 " << strip_spaces(prm.b5.str());
    if (un_n >= 3) os << " --c7 " << strip_spaces(prm.c7.str());
    if (un_n == 3) os << " --c9 " << strip_spaces(prm.c9.str());
    if (un_n == 4)
      os << " --d8 " << strip_spaces(prm.d8.str()) << " --d11 " << strip_spaces(prm.d11.str())
         << " --d13 " << strip_spaces(prm.d13.str());
    out.normalized = os.str();
    return out;
  }
  check_field_params(pr_p, pr_m);
  const CtxPtr ctx = FieldCtx::get(pr_p, pr_m);
  std::vector<FieldElement> gammas;
  for (const std::string& g : split_commas(gammas_text))
    gammas.push_back(parse_element_at(g, ctx, 1, 1));
  const TwistedPoly s1 = from_poly(parse_poly_at(s1_text, ctx, 1, 1));
  std::vector<FieldElement> constants;
  if (constants_opt->count() > 0)
    for (const std::string& c : split_commas(constants_text))
      constants.push_back(parse_element_at(c, ctx, 1, 1));
  out.cover = prop43_family(pr_s, pr_d, gammas, s1, constants);
  std::ostringstream os;
  os << "prop43 -p " << pr_p << " -m " << pr_m << " -s " << pr_s << " -d " << pr_d;
  std::vector<std::string> gs;
  for (const FieldElement& g : gammas) gs.push_back(strip_spaces(g.str()));
  os << " --gammas " << join(gs, ",");
  os << " --s1 " << strip_spaces(s1.to_poly().str());
  if (!constants.empty()) {
    std::vector<std::string> cs;
    for (const FieldElement& c : constants) cs.push_back(strip_spaces(c.str()));
    os << " --constants " << join(cs, ",");
  }
  out.normalized = os.str();
  return out;
}

SpecFile spec_from_cover(const CoverSpec& cover, std::string directive = "") {
  SpecFile sf;
  sf.ctx = cover.ambient;
  for (const ASClass& c : cover.functions) sf.functions.push_back(c.reduced);
  sf.v_auto = false;
  sf.v_basis = cover.v_basis;
  sf.family = std::move(directive);
  return sf;
}

}  // namespace

// ---------------------------------------------------------------------------
// Description files.

bool SpecFile::operator==(const SpecFile& o) const {
  if (v_auto != o.v_auto || family != o.family) return false;
  if ((ctx == nullptr) != (o.ctx == nullptr)) return false;
  if (ctx && !ctx->same_field(*o.ctx)) return false;
  return functions == o.functions && v_basis == o.v_basis;
}

SpecFile parse_spec(const std::string& text) {
  struct Line {
    int number;
    std::string key;
    std::string value;
    int value_col;  // 1-based column of the first value character
  };
  std::vector<Line> lines;
  {
    std::istringstream is(text);
    std::string raw;
    int number = 0;
    while (std::getline(is, raw)) {
      ++number;
      const size_t hash = raw.find('#');
      std::string body = hash == std::string::npos ? raw : raw.substr(0, hash);
      const size_t eq = body.find('=');
      size_t first = body.find_first_not_of(" \t");
      if (first == std::string::npos) continue;  // blank
      if (eq == std::string::npos) parse_fail(number, int(first) + 1, "expected 'key = value'");
      size_t key_end = body.find_last_not_of(" \t", eq - 1);
      if (key_end == std::string::npos || key_end < first)
        parse_fail(number, int(first) + 1, "missing key before '='");
      std::string key = body.substr(first, key_end - first + 1);
      size_t vstart = body.find_first_not_of(" \t", eq + 1);
      if (vstart == std::string::npos)
        parse_fail(number, int(eq) + 2, "missing value after '='");
      size_t vend = body.find_last_not_of(" \t");
      lines.push_back(
          {number, std::move(key), body.substr(vstart, vend - vstart + 1), int(vstart) + 1});
    }
  }
  if (lines.empty()) parse_fail(1, 1, "empty description");

  for (const Line& ln : lines)
    if (ln.key == "family" && lines.size() > 1)
      parse_fail(ln.number, 1, "a family directive must be the only entry");
  if (lines[0].key == "family") {
    std::vector<std::string> tokens;
    std::istringstream ts(lines[0].value);
    std::string tok;
    while (ts >> tok) tokens.push_back(tok);
    FamilyBuild fb = family_from_tokens(tokens);
    return spec_from_cover(fb.cover, fb.normalized);
  }

  SpecFile sf;
  int p = 0, m = 1;
  bool saw_m = false, saw_modulus = false, saw_v = false;
  int next_fn = 1;
  auto need_ctx = [&](const Line& ln) {
    if (!sf.ctx) {
      if (p == 0) parse_fail(ln.number, 1, "'p = ...' must come first");
      check_field_params(p, m, ln.number, 1);
      sf.ctx = FieldCtx::get(p, m);
    }
  };
  for (const Line& ln : lines) {
    if (ln.key == "p") {
      if (p != 0) parse_fail(ln.number, 1, "duplicate 'p'");
      try {
        p = std::stoi(ln.value);
      } catch (...) {
        parse_fail(ln.number, ln.value_col, "p must be an integer");
      }
      check_field_params(p, 1, ln.number, ln.value_col);
    } else if (ln.key == "m") {
      if (p == 0) parse_fail(ln.number, 1, "'p = ...' must come before 'm'");
      if (saw_m) parse_fail(ln.number, 1, "duplicate 'm'");
      if (sf.ctx) parse_fail(ln.number, 1, "'m' must come before the functions / V / modulus");
      try {
        m = std::stoi(ln.value);
      } catch (...) {
        parse_fail(ln.number, ln.value_col, "m must be an integer");
      }
      check_field_params(p, m, ln.number, ln.value_col);
      saw_m = true;
    } else if (ln.key == "modulus") {
      if (p == 0) parse_fail(ln.number, 1, "'p = ...' must come before 'modulus'");
      if (saw_modulus) parse_fail(ln.number, 1, "duplicate 'modulus'");
      if (sf.ctx) parse_fail(ln.number, 1, "'modulus' must come before the functions / V");
      sf.ctx = parse_modulus(p, m, ln.value, ln.number, ln.value_col);
      saw_modulus = true;
    } else if (!ln.key.empty() && ln.key[0] == 'f') {
      int idx = 0;
      try {
        idx = std::stoi(ln.key.substr(1));
      } catch (...) {
        parse_fail(ln.number, 1, "unknown key '" + ln.key + "'");
      }
      if (idx != next_fn)
        parse_fail(ln.number, 1,
                   "expected 'f" + std::to_string(next_fn) + "', got '" + ln.key + "'");
      ++next_fn;
      need_ctx(ln);
      sf.functions.push_back(parse_poly_at(ln.value, sf.ctx, ln.number, ln.value_col));
    } else if (ln.key == "V") {
      if (saw_v) parse_fail(ln.number, 1, "duplicate 'V'");
      saw_v = true;
      need_ctx(ln);
      if (ln.value == "auto") {
        sf.v_auto = true;
        continue;
      }
      const std::string prefix = "basis:";
      if (ln.value.rfind(prefix, 0) != 0)
        parse_fail(ln.number, ln.value_col, "expected 'auto' or 'basis: e1, e2, ...'");
      sf.v_auto = false;
      const std::string rest = ln.value.substr(prefix.size());
      int col = ln.value_col + int(prefix.size());
      for (const std::string& piece : split_commas(rest)) {
        sf.v_basis.push_back(parse_element_at(piece, sf.ctx, ln.number, col));
        col += int(piece.size()) + 1;
      }
    } else {
      parse_fail(ln.number, 1, "unknown key '" + ln.key + "'");
    }
  }
  if (p == 0) parse_fail(lines[0].number, 1, "missing 'p = ...' header");
  if (!sf.ctx) {
    check_field_params(p, m, lines[0].number, 1);
    sf.ctx = FieldCtx::get(p, m);
  }
  return sf;
}

std::string print_spec(const SpecFile& spec) {
  if (!spec.family.empty()) return "family = " + spec.family + "\n";
  std::ostringstream os;
  os << "p = " << spec.ctx->p << "\n";
  os << "m = " << spec.ctx->m << "\n";
  if (spec.ctx->m > 1) os << "modulus = " << modulus_str(*spec.ctx) << "\n";
  for (size_t i = 0; i < spec.functions.size(); ++i)
    os << "f" << i + 1 << " = " << spec.functions[i].str() << "\n";
  if (spec.v_auto) {
    os << "V = auto\n";
  } else {
    std::vector<std::string> es;
    for (const FieldElement& e : spec.v_basis) es.push_back(e.str());
    os << "V = basis: " << join(es, ", ") << "\n";
  }
  return os.str();
}

Poly parse_poly(const std::string& text, const CtxPtr& ctx) {
  return parse_poly_at(text, ctx, 1, 1);
}

FieldElement parse_element(const std::string& text, const CtxPtr& ctx) {
  return parse_element_at(text, ctx, 1, 1);
}

CoverSpec to_cover_spec(const SpecFile& spec) {
  if (!spec.ctx) fail(Errc::ParseError, "description has no field header");
  if (spec.functions.empty()) fail(Errc::WrongShape, "description has no functions");
  if (!spec.v_auto) return make_cover_spec(spec.ctx, spec.functions, spec.v_basis);
  std::vector<ASClass> classes;
  classes.reserve(spec.functions.size());
  for (const Poly& f : spec.functions) classes.push_back(reduce(f));
  auto [ext, basis] = find_stable_translations(classes);
  std::vector<Poly> lifted;
  lifted.reserve(spec.functions.size());
  for (const Poly& f : spec.functions) lifted.push_back(f.embedded(ext));
  return make_cover_spec(ext, lifted, basis);
}

// ---------------------------------------------------------------------------
// Reports.

namespace {

void render_human(std::ostream& out, const json& j, int indent) {
  const std::string pad(size_t(indent), ' ');
  for (const auto& el : j.items()) {
    out << pad << el.key() << ":";
    const json& v = el.value();
    if (v.is_object()) {
      out << "\n";
      render_human(out, v, indent + 2);
    } else if (v.is_string()) {
      out << " " << v.get<std::string>() << "\n";
    } else {
      out << " " << v.dump() << "\n";
    }
  }
}

void emit(std::ostream& out, const json& j, bool as_json) {
  if (as_json) {
    out << j.dump(2) << "\n";
  } else {
    render_human(out, j, 0);
  }
}

int math_fail(std::ostream& out, const Error& e, bool as_json) {
  json j;
  j["error"] = e.what();
  emit(out, j, as_json);
  return 1;
}

std::string ratio_str(const RamificationReport& ram) {
  return std::to_string(ram.ratio_num) + "/" + std::to_string(ram.ratio_den);
}

json matrix_json(const FpMat& mat) {
  json rows = json::array();
  for (int r = 0; r < mat.rows; ++r) {
    json row = json::array();
    for (int c = 0; c < mat.cols; ++c) row.push_back(mat.at(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

void put_header(json& j, const CoverSpec& cover) {
  j["p"] = cover.ambient->p;
  j["m"] = cover.ambient->m;
  j["n"] = cover.n();
  j["v"] = cover.v();
}

void put_functions(json& j, const CoverSpec& cover) {
  json fs = json::array();
  for (const ASClass& c : cover.functions) fs.push_back(c.reduced.str());
  j["functions"] = std::move(fs);
  json vb = json::array();
  for (const FieldElement& e : cover.v_basis) vb.push_back(e.str());
  j["v_basis"] = std::move(vb);
}

void put_ramification(json& j, const VerifyResult& vr) {
  j["degrees"] = vr.basis.degrees;
  j["jumps"] = vr.basis.jumps;
  j["dims"] = vr.basis.dims;
  j["different"] = vr.ram.different;
  j["genus"] = vr.ram.genus;
  j["order"] = vr.ram.order;
  j["ratio"] = ratio_str(vr.ram);
  j["big_action"] = vr.ram.is_big_action;
}

void put_predicates(json& j, const MaxJumpReport& t58) {
  json p;
  p["verified"] = true;
  p["levels_maximal"] = t58.levels_maximal;
  p["subdiagonals_nonzero"] = t58.subdiagonals_nonzero;
  p["equivalence"] = t58.equivalence;
  p["degrees_match"] = t58.degrees_match;
  p["v_matches"] = t58.v_matches;
  p["ratio_matches"] = t58.ratio_matches;
  p["all"] = t58.all();
  j["predicates"] = std::move(p);
}

// ---------------------------------------------------------------------------
// Subcommand drivers.

struct Opts {
  bool json = false;
  std::string poly_text;
  int p = 0;
  int m = 1;
  std::string modulus;
  std::string file = "-";
  int ambient_bound = 256;
  long long closure_bound = 1000000;
  int element_order = -1;
  int iso_m = 1;
  std::string iso_b0, iso_b5 = "0", iso_to_b0, iso_to_b5 = "0";
};

CtxPtr make_ctx(const Opts& o) {
  check_field_params(o.p, o.m);
  if (o.modulus.empty()) return FieldCtx::get(o.p, o.m);
  return parse_modulus(o.p, o.m, o.modulus, 1, 1);
}

std::string load_text(const std::string& path, std::istream& in) {
  std::ostringstream ss;
  if (path == "-") {
    ss << in.rdbuf();
  } else {
    std::ifstream f(path);
    if (!f) fail(Errc::ParseError, "cannot open file: " + path);
    ss << f.rdbuf();
  }
  return ss.str();
}

int do_reduce(const Opts& o, std::ostream& out) {
  const CtxPtr ctx = make_ctx(o);
  const Poly f = parse_poly(o.poly_text, ctx);
  const ASClass cls = reduce(f);
  json j;
  j["p"] = ctx->p;
  j["m"] = ctx->m;
  j["input"] = f.str();
  j["reduced"] = cls.reduced.str();
  j["const_class"] = cls.const_class;
  j["dp_order"] = f.is_zero() ? json() : json(dp_order(f));
  j["sigma_level"] = cls.reduced.is_zero() ? json() : json(sigma_level(cls.reduced));
  emit(out, j, o.json);
  return 0;
}

int do_sigma(const Opts& o, std::ostream& out) {
  const CtxPtr ctx = make_ctx(o);
  const Poly f = parse_poly(o.poly_text, ctx);
  json j;
  j["p"] = ctx->p;
  j["m"] = ctx->m;
  j["input"] = f.str();
  j["dp_order"] = f.is_zero() ? json() : json(dp_order(f));
  j["sigma_level"] = f.is_zero() ? json() : json(sigma_level(f));
  emit(out, j, o.json);
  return 0;
}

int do_palindromic(const Opts& o, std::ostream& out) {
  const CtxPtr ctx = make_ctx(o);
  const Poly f = parse_poly(o.poly_text, ctx);
  const TwistedPoly adjoint = palindromic(f);
  auto [kctx, basis] = zero_set(adjoint, o.ambient_bound);
  json j;
  j["p"] = ctx->p;
  j["m"] = ctx->m;
  j["input"] = f.str();
  j["adjoint"] = adjoint.str();
  j["f_degree"] = adjoint.deg_f();
  j["kernel_m"] = kctx->m;
  json kb = json::array();
  for (const FieldElement& e : basis) kb.push_back(e.str());
  j["kernel_basis"] = std::move(kb);
  emit(out, j, o.json);
  return 0;
}

int do_adapt(const Opts& o, std::istream& in, std::ostream& out) {
  const SpecFile sf = parse_spec(load_text(o.file, in));
  std::vector<ASClass> classes;
  for (const Poly& f : sf.functions) classes.push_back(reduce(f));
  AdaptedBasis basis;
  try {
    basis = adapt_basis(classes);
  } catch (const Error& e) {
    return math_fail(out, e, o.json);
  }
  json j;
  j["p"] = sf.ctx->p;
  j["m"] = sf.ctx->m;
  j["n"] = int(basis.functions.size());
  j["degrees"] = basis.degrees;
  j["jumps"] = basis.jumps;
  j["dims"] = basis.dims;
  json fs = json::array();
  for (const ASClass& c : basis.functions) fs.push_back(c.reduced.str());
  j["functions"] = std::move(fs);
  emit(out, j, o.json);
  return 0;
}

int do_verify(const Opts& o, std::istream& in, std::ostream& out, bool with_matrices) {
  const SpecFile sf = parse_spec(load_text(o.file, in));
  const CoverSpec cover = to_cover_spec(sf);
  VerifyResult vr;
  MaxJumpReport t58;
  try {
    vr = verify_cover(cover);
    t58 = theorem58_check(cover);
  } catch (const Error& e) {
    return math_fail(out, e, o.json);
  }
  json j;
  put_header(j, cover);
  j["s1"] = vr.s1;
  put_functions(j, cover);
  put_ramification(j, vr);
  if (with_matrices) {
    json ms = json::array();
    for (const RepMatrix& rm : vr.matrices) {
      json one;
      one["y"] = rm.y.str();
      one["entries"] = matrix_json(rm.entries);
      ms.push_back(std::move(one));
    }
    j["matrices"] = std::move(ms);
  } else {
    json levels = json::array();
    for (const ASClass& c : cover.functions) levels.push_back(sigma_level(c.reduced));
    j["sigma_levels"] = std::move(levels);
    j["rho_trivial"] = rho_trivial(cover, vr.matrices);
  }
  put_predicates(j, t58);
  emit(out, j, o.json);
  return t58.all() ? 0 : 1;
}

int do_group(const Opts& o, std::istream& in, std::ostream& out) {
  const SpecFile sf = parse_spec(load_text(o.file, in));
  const CoverSpec cover = to_cover_spec(sf);
  json j;
  put_header(j, cover);
  try {
    const GroupReport gr = group_report(cover, size_t(o.closure_bound));
    j["order"] = gr.order;
    j["exponent"] = gr.exponent;
    j["center_order"] = gr.center_order;
    j["derived_order"] = gr.derived_order;
    j["lambda_dims"] = gr.lambda_dims;
    j["max_jump"] = gr.max_jump;
    j["center_shape_ok"] = gr.center_shape_ok;
    if (o.element_order >= 0) {
      const GeneratorSet gens = build_generators(cover);
      const std::vector<Aut> all = gens.all();
      if (size_t(o.element_order) >= all.size())
        fail(Errc::BadIndex, "generator index out of range (have " +
                                 std::to_string(all.size()) + ")");
      json eo;
      eo["index"] = o.element_order;
      eo["order"] = element_order(all[size_t(o.element_order)]);
      j["element_order"] = std::move(eo);
    }
  } catch (const Error& e) {
    return math_fail(out, e, o.json);
  }
  emit(out, j, o.json);
  return 0;
}

int do_family(const std::vector<std::string>& tokens, std::ostream& out) {
  const FamilyBuild fb = family_from_tokens(tokens);
  out << print_spec(spec_from_cover(fb.cover));
  return 0;
}

int do_iso(const Opts& o, std::ostream& out) {
  check_field_params(5, o.iso_m);
  const CtxPtr ctx = FieldCtx::get(5, o.iso_m);
  UniversalParams a, b;
  a.b0 = parse_element(o.iso_b0, ctx);
  a.b5 = parse_element(o.iso_b5, ctx);
  b.b0 = parse_element(o.iso_to_b0, ctx);
  b.b5 = parse_element(o.iso_to_b5, ctx);
  const bool iso = iso_criterion_n2(a, b);
  json j;
  j["p"] = 5;
  j["m"] = o.iso_m;
  j["isomorphic"] = iso;
  emit(out, j, o.json);
  return iso ? 0 : 1;
}

}  // namespace

// ---------------------------------------------------------------------------
// Dispatch.

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err) {
  Opts o;
  CLI::App app{"Exact-arithmetic toolkit for Artin-Schreier covers of the affine line:\n"
               "reduction and digit-sum levels of defining functions, translation\n"
               "representations, ramification and genus bookkeeping, automorphism\n"
               "groups, and hard-coded cover families.",
               "wildcover"};
  app.require_subcommand(1);

  auto add_field_flags = [&](CLI::App* sub, bool with_poly) {
    if (with_poly)
      sub->add_option("poly", o.poly_text, "polynomial literal, e.g. \"X^11 + 4*t*X^7\"")
          ->required();
    sub->add_option("-p", o.p, "field characteristic (prime <= 13)")->required();
    sub->add_option("-m", o.m, "extension degree of the ambient field (default 1)");
    sub->add_option("--modulus", o.modulus,
                    "monic degree-m modulus in t (default: lexicographically smallest)");
    sub->add_flag("--json", o.json, "emit the report as JSON");
  };
  auto add_file_flags = [&](CLI::App* sub) {
    sub->add_option("file", o.file, "cover description file, or '-' for stdin (default)");
    sub->add_flag("--json", o.json, "emit the report as JSON");
  };

  auto* reduce_cmd = app.add_subcommand(
      "reduce", "Reduce a polynomial modulo g^p - g: p-power-free representative, absorbed "
                "constant class, digit-sum order and level");
  add_field_flags(reduce_cmd, true);

  auto* sigma_cmd = app.add_subcommand(
      "sigma", "Digit-sum order d_p and filtration level of a polynomial literal");
  add_field_flags(sigma_cmd, true);

  auto* palindromic_cmd = app.add_subcommand(
      "palindromic", "Adjoint additive polynomial of f = X*S(X) + c*X and its kernel "
                     "in the splitting field");
  add_field_flags(palindromic_cmd, true);
  palindromic_cmd->add_option("--ambient-bound", o.ambient_bound,
                              "cap on the splitting-field extension degree (default 256)");

  auto* adapt_cmd = app.add_subcommand(
      "adapt", "Adapt the functions of a description to the degree filtration");
  add_file_flags(adapt_cmd);

  auto* verify_cmd = app.add_subcommand(
      "verify", "Check a cover description end to end: representation matrices, "
                "ramification report, and the maximal-jump dichotomy");
  add_file_flags(verify_cmd);

  auto* invariants_cmd = app.add_subcommand(
      "invariants", "Numeric invariants of a cover description (no matrices): degrees, "
                    "levels, different, genus, order, ratio, predicates");
  add_file_flags(invariants_cmd);

  auto* family_cmd = app.add_subcommand(
      "family", "Construct a hard-coded cover family and print its description.\n"
                "  family special -p P -n N\n"
                "  family universal -n N [-m M] --b0 E [--b5 E] [--c7 E] [--c9 E] "
                "[--d8 E] [--d11 E] [--d13 E]\n"
                "  family prop43 [-p P] [-m M] -s S -d D --gammas E,E,... --s1 POLY "
                "[--constants E,E,...]\n"
                "Field elements E are t-expressions like t^2+1; output is a description "
                "consumable by verify / invariants / group / adapt.");
  family_cmd->allow_extras();

  auto* group_cmd = app.add_subcommand(
      "group", "Automorphism p-group of a cover description: order, exponent, center, "
               "derived subgroup, filtration dimensions");
  add_file_flags(group_cmd);
  group_cmd->add_option("--closure-bound", o.closure_bound,
                        "cap on the group enumeration (default 1000000)");
  group_cmd->add_option("--element-order", o.element_order,
                        "also report the order of generator #IDX (translations first, "
                        "then class generators)");

  auto* iso_cmd = app.add_subcommand(
      "iso", "Isomorphism test for two length-two towers from the two-parameter family "
             "(characteristic 5)");
  iso_cmd->add_option("-m", o.iso_m, "extension degree of the parameter field (default 1)");
  iso_cmd->add_option("--b0", o.iso_b0, "first tower: leading parameter")->required();
  iso_cmd->add_option("--b5", o.iso_b5, "first tower: linear parameter (default 0)");
  iso_cmd->add_option("--to-b0", o.iso_to_b0, "second tower: leading parameter")->required();
  iso_cmd->add_option("--to-b5", o.iso_to_b5, "second tower: linear parameter (default 0)");
  iso_cmd->add_flag("--json", o.json, "emit the report as JSON");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (*reduce_cmd) return do_reduce(o, out);
    if (*sigma_cmd) return do_sigma(o, out);
    if (*palindromic_cmd) return do_palindromic(o, out);
    if (*adapt_cmd) return do_adapt(o, in, out);
    if (*verify_cmd) return do_verify(o, in, out, /*with_matrices=*/true);
    if (*invariants_cmd) return do_verify(o, in, out, /*with_matrices=*/false);
    if (*family_cmd) return do_family(family_cmd->remaining(), out);
    if (*group_cmd) return do_group(o, in, out);
    if (*iso_cmd) return do_iso(o, out);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 2;
  }
  err << "no subcommand selected\n";
  return 2;
}

}  // namespace wildcover
