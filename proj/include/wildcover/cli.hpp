#pragma once

// Command-line front end: textual cover descriptions, polynomial literals,
// subcommand dispatch, and deterministic JSON reports.

#include <iosfwd>
#include <string>
#include <vector>

#include "wildcover/cover.hpp"

namespace wildcover {

// A textual cover description:
//
//   p = 5
//   m = 5
//   modulus = t^5 + 4*t + 2        # optional; lexicographically smallest when absent
//   f1 = X^6 + 4*X^2               # one line per function, indices consecutive from 1
//   f2 = 3*X^11 + 2*X^7
//   V = auto                       # or:  V = basis: 1, t, t^2 + 3
//
// '#' starts a comment, blank lines are ignored.  Alternatively the whole
// description may be a single family directive using the same arguments as
// the `family` subcommand:
//
//   family = special -p 5 -n 2
//
// which expands to the constructed cover when parsed.
struct SpecFile {
  CtxPtr ctx;
  std::vector<Poly> functions;
  bool v_auto = true;
  std::vector<FieldElement> v_basis;  // empty when v_auto
  std::string family;                 // normalized directive; empty when explicit

  bool operator==(const SpecFile& o) const;
  bool operator!=(const SpecFile& o) const { return !(*this == o); }
};

// Parsing reports malformed input as ParseError carrying "line L, column C".
// print_spec(parse_spec(text)) parses back to an equal structure.
SpecFile parse_spec(const std::string& text);
std::string print_spec(const SpecFile& spec);

// Polynomial literal over ctx: sums, differences, products and powers built
// from natural numbers, 't' (the field generator, extension fields only) and
// the variable 'X', e.g. "X^11 + 4*t*X^7 + (t^2 + 1)*X^3 + 3".
Poly parse_poly(const std::string& text, const CtxPtr& ctx);
// Same grammar without the variable.
FieldElement parse_element(const std::string& text, const CtxPtr& ctx);

// Resolves a description to a checked cover: reduces the functions and, for
// V = auto, finds the largest stable translation group (which may extend the
// ambient field).
CoverSpec to_cover_spec(const SpecFile& spec);

// Entry point shared by the binary and the in-process tests.  `args` excludes
// the program name; `in` serves subcommands reading a description from '-'.
// Returns the process exit code: 0 all checks passed, 1 a mathematical
// predicate failed, 2 parse or validation error.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err);

}  // namespace wildcover
