#pragma once

// Scene files (.mp): declarations of algebras, subspaces, Manin pairs,
// splittings, fibers and numeric examples, followed by check directives.
//
//   algebra d { dim 2; basis e f; bracket [e,f] = f; pairing [[0,1],[1,0]]; }
//   subspace g in d { span e, 1/2*f; }
//   maninpair p (d, g);
//   splitting j for p { auto; }
//   fiber x { splitting j; canonical; }
//   example ex { run "dressing-so3"; samples 20; }
//   check manin p;
//
// Rationals appear in algebraic declarations, doubles only in examples.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "manin/examples.hpp"
#include "manin/fiber_spec.hpp"

namespace manin::scene {

struct Position {
  std::size_t line = 1;  // 1-based
  std::size_t col = 1;   // 1-based
  friend bool operator==(const Position&, const Position&) = default;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(Position pos, std::string message, std::string token);
  Position pos;
  std::string message;
  std::string token;
};

/// Raised by validate_scene, naming the declaration.
class SemanticError : public std::runtime_error {
 public:
  SemanticError(Position pos, std::string decl, std::string reason);
  Position pos;
  std::string decl;
  std::string reason;
};

enum class TokenKind { ident, integer, rational, real, string, punct, end };

struct Token {
  TokenKind kind = TokenKind::end;
  std::string text;
  Position pos;
};

/// Throws ParseError on unterminated strings and stray characters.
std::vector<Token> tokenize(const std::string& text);

// ---- IR ----------------------------------------------------------------

struct Term {
  Rational coef;
  std::string ident;
  friend bool operator==(const Term&, const Term&) = default;
};
using LinExpr = std::vector<Term>;  // empty means 0

using RatMatrix = std::vector<std::vector<Rational>>;

struct BracketDecl {
  std::string a, b;
  LinExpr value;
  Position pos;
  friend bool operator==(const BracketDecl& x, const BracketDecl& y) {
    return x.a == y.a && x.b == y.b && x.value == y.value;
  }
};

struct AlgebraDecl {
  std::string name;
  std::optional<std::size_t> dim;
  std::vector<std::string> basis;
  std::vector<BracketDecl> brackets;
  bool pairing_diag = false;
  std::optional<RatMatrix> pairing;  // diag: one row
  Position pos;
  friend bool operator==(const AlgebraDecl& x, const AlgebraDecl& y) {
    return x.name == y.name && x.dim == y.dim && x.basis == y.basis && x.brackets == y.brackets &&
           x.pairing_diag == y.pairing_diag && x.pairing == y.pairing;
  }
};

struct SubspaceDecl {
  std::string name, algebra;
  std::vector<LinExpr> span;
  Position pos;
  friend bool operator==(const SubspaceDecl& x, const SubspaceDecl& y) {
    return x.name == y.name && x.algebra == y.algebra && x.span == y.span;
  }
};

struct PairDecl {
  std::string name, algebra, subspace;
  Position pos;
  friend bool operator==(const PairDecl& x, const PairDecl& y) {
    return x.name == y.name && x.algebra == y.algebra && x.subspace == y.subspace;
  }
};

struct SplittingDecl {
  std::string name, pair;
  bool automatic = false;
  std::vector<LinExpr> images;
  std::optional<RatMatrix> shift;
  Position pos;
  friend bool operator==(const SplittingDecl& x, const SplittingDecl& y) {
    return x.name == y.name && x.pair == y.pair && x.automatic == y.automatic && x.images == y.images &&
           x.shift == y.shift;
  }
};

struct FiberDecl {
  std::string name, splitting;  // the pair is the splitting's
  std::optional<std::size_t> tangent;
  bool canonical = false;
  std::optional<RatMatrix> anchor, dJ, pi, action, dirac, section;
  Position pos;
  friend bool operator==(const FiberDecl& x, const FiberDecl& y) {
    return x.name == y.name && x.splitting == y.splitting && x.tangent == y.tangent &&
           x.canonical == y.canonical && x.anchor == y.anchor && x.dJ == y.dJ && x.pi == y.pi &&
           x.action == y.action && x.dirac == y.dirac && x.section == y.section;
  }
};

struct ExampleDecl {
  std::string name;
  std::string run;  // registry name
  std::optional<std::size_t> samples;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol, nested_tol, step;
  Position pos;
  friend bool operator==(const ExampleDecl& x, const ExampleDecl& y) {
    return x.name == y.name && x.run == y.run && x.samples == y.samples && x.seed == y.seed && x.tol == y.tol &&
           x.nested_tol == y.nested_tol && x.step == y.step;
  }
};

struct CheckArg {
  std::string text;
  bool quoted = false;
  friend bool operator==(const CheckArg&, const CheckArg&) = default;
};

struct CheckDecl {
  std::string kind;
  std::vector<CheckArg> args;
  Position pos;
  friend bool operator==(const CheckDecl& x, const CheckDecl& y) { return x.kind == y.kind && x.args == y.args; }
};

using Decl = std::variant<AlgebraDecl, SubspaceDecl, PairDecl, SplittingDecl, FiberDecl, ExampleDecl, CheckDecl>;

struct SceneIR {
  std::vector<Decl> decls;  // source order
  friend bool operator==(const SceneIR&, const SceneIR&) = default;
};

SceneIR parse_scene(const std::string& text);
/// Canonical text; parse_scene(print_scene(ir)) == ir.
std::string print_scene(const SceneIR& ir);

// ---- validation ----------------------------------------------------------

struct PlannedCheck {
  std::string name;  // "kind arg..."
  std::function<std::vector<CheckResult>()> run;
};

struct CheckedScene {
  std::map<std::string, QuadraticLieAlgebra> algebras;
  std::map<std::string, Subspace> subspaces;
  std::map<std::string, ManinPairPoint> pairs;
  std::map<std::string, IsotropicSplitting> splittings;
  std::map<std::string, FiberSpec> fibers;
  std::map<std::string, std::pair<const ExampleInfo*, ExampleParams>> examples;
  std::vector<PlannedCheck> plan;
};

/// Builds every object eagerly; throws SemanticError. Seed overrides the
/// seed of every example that does not set one.
CheckedScene validate_scene(const SceneIR& ir, std::uint64_t default_seed = 0);

/// Runs the plan in declaration order. Results of a check directive are
/// prefixed with its name.
std::vector<CheckResult> run_plan(const CheckedScene& scene);

/// Directive kinds accepted by `check`.
const std::vector<std::string>& check_kinds();

}  // namespace manin::scene
