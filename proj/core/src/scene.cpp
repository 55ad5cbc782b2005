#include "manin/scene.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <regex>
#include <set>
#include <sstream>

#include "manin/numeric/hamiltonian.hpp"

namespace manin::scene {

namespace {

std::string where(Position p) { return std::to_string(p.line) + ":" + std::to_string(p.col); }

}  // namespace

ParseError::ParseError(Position p, std::string msg, std::string tok)
    : std::runtime_error(where(p) + ": " + msg + (tok.empty() ? "" : " (got '" + tok + "')")),
      pos(p),
      message(std::move(msg)),
      token(std::move(tok)) {}

SemanticError::SemanticError(Position p, std::string d, std::string r)
    : std::runtime_error(where(p) + ": " + d + ": " + r), pos(p), decl(std::move(d)), reason(std::move(r)) {}

// ---- tokenizer -------------------------------------------------------------

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;
  const std::size_t n = text.size();
  auto peek = [&](std::size_t k = 0) -> char { return i + k < n ? text[i + k] : '\0'; };
  auto advance = [&] {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++i;
  };
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };

  while (i < n) {
    const char c = peek();
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance();
      continue;
    }
    if (c == '#') {
      while (i < n && peek() != '\n') advance();
      continue;
    }
    Token t;
    t.pos = {line, col};
    if (alpha(c)) {
      t.kind = TokenKind::ident;
      while (i < n && (alpha(peek()) || digit(peek()))) {
        t.text += peek();
        advance();
      }
    } else if (digit(c)) {
      t.kind = TokenKind::integer;
      auto digits = [&] {
        while (i < n && digit(peek())) {
          t.text += peek();
          advance();
        }
      };
      digits();
      if (peek() == '/' && digit(peek(1))) {
        t.kind = TokenKind::rational;
        t.text += '/';
        advance();
        digits();
      } else {
        if (peek() == '.' && digit(peek(1))) {
          t.kind = TokenKind::real;
          t.text += '.';
          advance();
          digits();
        }
        if ((peek() == 'e' || peek() == 'E') &&
            (digit(peek(1)) || ((peek(1) == '+' || peek(1) == '-') && digit(peek(2))))) {
          t.kind = TokenKind::real;
          t.text += peek();
          advance();
          if (peek() == '+' || peek() == '-') {
            t.text += peek();
            advance();
          }
          digits();
        }
      }
    } else if (c == '"') {
      t.kind = TokenKind::string;
      advance();
      for (;;) {
        if (i >= n || peek() == '\n') throw ParseError(t.pos, "unterminated string", "\"" + t.text);
        const char d = peek();
        if (d == '"') {
          advance();
          break;
        }
        if (d == '\\') {
          const char e = peek(1);
          if (e != '"' && e != '\\') throw ParseError({line, col}, "invalid escape in string", std::string(1, e));
          advance();
          t.text += e;
          advance();
          continue;
        }
        t.text += d;
        advance();
      }
    } else if (std::string_view("{}()[],;=+-*").find(c) != std::string_view::npos) {
      t.kind = TokenKind::punct;
      t.text = std::string(1, c);
      advance();
    } else {
      const auto u = static_cast<unsigned char>(c);
      std::string shown = (u < 0x20 || u >= 0x7f) ? "\\x" + std::to_string(u) : std::string(1, c);
      throw ParseError(t.pos, "unexpected character", shown);
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = TokenKind::end;
  end.pos = {line, col};
  out.push_back(end);
  return out;
}

// ---- parser ------------------------------------------------------------------

namespace {

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : t_(std::move(toks)) {}

  SceneIR scene() {
    SceneIR ir;
    while (cur().kind != TokenKind::end) ir.decls.push_back(decl());
    return ir;
  }

 private:
  std::vector<Token> t_;
  std::size_t k_ = 0;

  const Token& cur() const { return t_[k_]; }
  const Token& next() const { return t_[std::min(k_ + 1, t_.size() - 1)]; }
  Token take() { return t_[k_ == t_.size() - 1 ? k_ : k_++]; }

  [[noreturn]] void fail(const std::string& expected) const {
    const Token& t = cur();
    throw ParseError(t.pos, "expected " + expected, t.kind == TokenKind::end ? "end of input" : t.text);
  }
  bool is_punct(char c) const { return cur().kind == TokenKind::punct && cur().text[0] == c; }
  bool is_word(const char* w) const { return cur().kind == TokenKind::ident && cur().text == w; }
  void punct(char c, const std::string& context) {
    if (!is_punct(c)) fail(std::string("'") + c + "' " + context);
    take();
  }
  std::string ident(const std::string& what) {
    if (cur().kind != TokenKind::ident) fail(what);
    return take().text;
  }
  void keyword(const char* w, const std::string& context) {
    if (!is_word(w)) fail(std::string("'") + w + "' " + context);
    take();
  }
  std::uint64_t integer(const std::string& what) {
    if (cur().kind != TokenKind::integer) fail(what);
    const Token t = take();
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || p != t.text.data() + t.text.size()) throw ParseError(t.pos, "integer out of range", t.text);
    return v;
  }
  Rational unsigned_rational(const std::string& what) {
    if (cur().kind != TokenKind::integer && cur().kind != TokenKind::rational) fail(what);
    const Token t = take();
    auto q = parse_rational(t.text);
    if (!q) throw ParseError(t.pos, "zero denominator", t.text);
    return *q;
  }
  Rational rational(const std::string& what) {
    if (is_punct('-')) {
      take();
      return -unsigned_rational(what);
    }
    return unsigned_rational(what);
  }
  double real(const std::string& what) {
    bool neg = false;
    if (is_punct('-')) {
      take();
      neg = true;
    }
    if (cur().kind != TokenKind::integer && cur().kind != TokenKind::real) fail(what);
    const Token t = take();
    double v = 0;
    auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || p != t.text.data() + t.text.size()) throw ParseError(t.pos, "number out of range", t.text);
    return neg ? -v : v;
  }

  // term := [rat ['*']] ident
  Term term(bool negate) {
    Term t;
    t.coef = 1;
    if (cur().kind == TokenKind::integer || cur().kind == TokenKind::rational) {
      t.coef = unsigned_rational("a coefficient");
      if (is_punct('*')) take();
    }
    t.ident = ident("a basis element");
    if (negate) t.coef = -t.coef;
    return t;
  }

  LinExpr linexpr() {
    LinExpr e;
    if (cur().kind == TokenKind::integer && cur().text == "0" &&
        !(next().kind == TokenKind::ident || (next().kind == TokenKind::punct && next().text == "*"))) {
      take();
      return e;
    }
    bool neg = false;
    if (is_punct('-') || is_punct('+')) neg = take().text == "-";
    e.push_back(term(neg));
    while (is_punct('+') || is_punct('-')) e.push_back(term(take().text == "-"));
    return e;
  }

  std::vector<LinExpr> linexpr_list() {
    std::vector<LinExpr> v{linexpr()};
    while (is_punct(',')) {
      take();
      v.push_back(linexpr());
    }
    return v;
  }

  RatMatrix matrix() {
    RatMatrix m;
    punct('[', "to open a matrix");
    if (is_punct(']')) {
      take();
      return m;
    }
    for (;;) {
      punct('[', "to open a matrix row");
      std::vector<Rational> row;
      if (!is_punct(']')) {
        row.push_back(rational("a matrix entry"));
        while (is_punct(',')) {
          take();
          row.push_back(rational("a matrix entry"));
        }
      }
      punct(']', "to close a matrix row");
      m.push_back(std::move(row));
      if (is_punct(']')) break;
      punct(',', "between matrix rows");
    }
    take();
    return m;
  }

  void end_item(const std::string& item) { punct(';', "after " + item); }

  template <class T>
  void once(std::optional<T>& slot, const Token& at, T value) {
    if (slot) throw ParseError(at.pos, "duplicate field", at.text);
    slot = std::move(value);
  }
  void once_flag(bool& flag, const Token& at) {
    if (flag) throw ParseError(at.pos, "duplicate field", at.text);
    flag = true;
  }

  Decl decl() {
    if (cur().kind != TokenKind::ident) fail("a declaration (algebra, subspace, maninpair, splitting, fiber, example, check)");
    const std::string w = cur().text;
    if (w == "algebra") return algebra();
    if (w == "subspace") return subspace();
    if (w == "maninpair") return maninpair();
    if (w == "splitting") return splitting();
    if (w == "fiber") return fiber();
    if (w == "example") return example();
    if (w == "check") return check();
    fail("a declaration (algebra, subspace, maninpair, splitting, fiber, example, check)");
  }

  AlgebraDecl algebra() {
    AlgebraDecl a;
    a.pos = take().pos;
    a.name = ident("an algebra name");
    punct('{', "to open algebra '" + a.name + "'");
    bool have_pairing = false;
    while (!is_punct('}')) {
      const Token at = cur();
      if (is_word("dim")) {
        take();
        once(a.dim, at, static_cast<std::size_t>(integer("a dimension")));
        end_item("dim");
      } else if (is_word("basis")) {
        take();
        if (!a.basis.empty()) throw ParseError(at.pos, "duplicate field", at.text);
        a.basis.push_back(ident("a basis element name"));
        while (cur().kind == TokenKind::ident) a.basis.push_back(take().text);
        end_item("basis");
      } else if (is_word("bracket")) {
        take();
        BracketDecl b;
        b.pos = at.pos;
        punct('[', "after bracket");
        b.a = ident("a basis element");
        punct(',', "inside bracket");
        b.b = ident("a basis element");
        punct(']', "to close bracket");
        punct('=', "after bracket");
        b.value = linexpr();
        a.brackets.push_back(std::move(b));
        end_item("bracket");
      } else if (is_word("pairing")) {
        take();
        once_flag(have_pairing, at);
        if (is_word("diag")) {
          take();
          a.pairing_diag = true;
          punct('(', "after diag");
          std::vector<Rational> d{rational("a diagonal entry")};
          while (is_punct(',')) {
            take();
            d.push_back(rational("a diagonal entry"));
          }
          punct(')', "to close diag");
          a.pairing = RatMatrix{std::move(d)};
        } else {
          a.pairing = matrix();
        }
        end_item("pairing");
      } else {
        fail("dim, basis, bracket, pairing or '}' to close algebra '" + a.name + "'");
      }
    }
    take();
    return a;
  }

  SubspaceDecl subspace() {
    SubspaceDecl s;
    s.pos = take().pos;
    s.name = ident("a subspace name");
    keyword("in", "after subspace name");
    s.algebra = ident("an algebra name");
    punct('{', "to open subspace '" + s.name + "'");
    while (!is_punct('}')) {
      const Token at = cur();
      if (!is_word("span")) fail("span or '}' to close subspace '" + s.name + "'");
      take();
      if (!s.span.empty()) throw ParseError(at.pos, "duplicate field", at.text);
      s.span = linexpr_list();
      end_item("span");
    }
    take();
    return s;
  }

  PairDecl maninpair() {
    PairDecl p;
    p.pos = take().pos;
    p.name = ident("a pair name");
    punct('(', "after pair name");
    p.algebra = ident("an algebra name");
    punct(',', "between algebra and subspace");
    p.subspace = ident("a subspace name");
    punct(')', "to close maninpair");
    end_item("maninpair");
    return p;
  }

  SplittingDecl splitting() {
    SplittingDecl s;
    s.pos = take().pos;
    s.name = ident("a splitting name");
    keyword("for", "after splitting name");
    s.pair = ident("a pair name");
    punct('{', "to open splitting '" + s.name + "'");
    while (!is_punct('}')) {
      const Token at = cur();
      if (is_word("auto")) {
        take();
        if (s.automatic || !s.images.empty()) throw ParseError(at.pos, "splitting takes one of auto or images", at.text);
        s.automatic = true;
        end_item("auto");
      } else if (is_word("images")) {
        take();
        if (s.automatic || !s.images.empty()) throw ParseError(at.pos, "splitting takes one of auto or images", at.text);
        s.images = linexpr_list();
        end_item("images");
      } else if (is_word("shift")) {
        take();
        once(s.shift, at, matrix());
        end_item("shift");
      } else {
        fail("auto, images, shift or '}' to close splitting '" + s.name + "'");
      }
    }
    take();
    return s;
  }

  FiberDecl fiber() {
    FiberDecl f;
    f.pos = take().pos;
    f.name = ident("a fiber name");
    punct('{', "to open fiber '" + f.name + "'");
    bool have_splitting = false;
    while (!is_punct('}')) {
      const Token at = cur();
      if (cur().kind != TokenKind::ident) fail("a fiber field or '}' to close fiber '" + f.name + "'");
      const std::string w = cur().text;
      if (w == "splitting") {
        take();
        once_flag(have_splitting, at);
        f.splitting = ident("a splitting name");
      } else if (w == "tangent") {
        take();
        once(f.tangent, at, static_cast<std::size_t>(integer("a tangent dimension")));
      } else if (w == "canonical") {
        take();
        once_flag(f.canonical, at);
      } else {
        std::optional<RatMatrix>* slot = w == "anchor" ? &f.anchor
                                         : w == "dJ"   ? &f.dJ
                                         : w == "pi"   ? &f.pi
                                         : w == "action" ? &f.action
                                         : w == "dirac"  ? &f.dirac
                                         : w == "section" ? &f.section
                                                          : nullptr;
        if (!slot)
          fail("splitting, tangent, canonical, anchor, dJ, pi, action, dirac, section or '}' to close fiber '" +
               f.name + "'");
        take();
        once(*slot, at, matrix());
      }
      end_item(w);
    }
    take();
    return f;
  }

  ExampleDecl example() {
    ExampleDecl e;
    e.pos = take().pos;
    e.name = ident("an example name");
    punct('{', "to open example '" + e.name + "'");
    bool have_run = false;
    while (!is_punct('}')) {
      const Token at = cur();
      if (cur().kind != TokenKind::ident) fail("an example field or '}' to close example '" + e.name + "'");
      const std::string w = cur().text;
      take();
      if (w == "run") {
        once_flag(have_run, at);
        if (cur().kind != TokenKind::string) fail("a quoted example name");
        e.run = take().text;
      } else if (w == "samples") {
        once(e.samples, at, static_cast<std::size_t>(integer("a sample count")));
      } else if (w == "seed") {
        once(e.seed, at, integer("a seed"));
      } else if (w == "tol") {
        once(e.tol, at, real("a tolerance"));
      } else if (w == "nested_tol") {
        once(e.nested_tol, at, real("a tolerance"));
      } else if (w == "step") {
        once(e.step, at, real("a step size"));
      } else {
        --k_;
        fail("run, samples, seed, tol, nested_tol, step or '}' to close example '" + e.name + "'");
      }
      end_item(w);
    }
    take();
    return e;
  }

  CheckDecl check() {
    CheckDecl c;
    c.pos = take().pos;
    c.kind = ident("a check kind");
    while (cur().kind == TokenKind::ident || cur().kind == TokenKind::string) {
      const Token t = take();
      c.args.push_back({t.text, t.kind == TokenKind::string});
    }
    end_item("check arguments");
    return c;
  }
};

// ---- printer -------------------------------------------------------------------

std::string print_expr(const LinExpr& e) {
  if (e.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const Term& t = e[i];
    const bool neg = sgn(t.coef) < 0;
    if (i == 0)
      s += neg ? "-" : "";
    else
      s += neg ? " - " : " + ";
    const Rational a = neg ? Rational(-t.coef) : t.coef;
    if (a != 1) s += to_string(a) + "*";
    s += t.ident;
  }
  return s;
}

std::string print_exprs(const std::vector<LinExpr>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + print_expr(v[i]);
  return s;
}

std::string print_row(const std::vector<Rational>& r) {
  std::string s;
  for (std::size_t i = 0; i < r.size(); ++i) s += (i ? ", " : "") + to_string(r[i]);
  return s;
}

std::string print_matrix(const RatMatrix& m) {
  std::string s = "[";
  for (std::size_t i = 0; i < m.size(); ++i) s += (i ? ", [" : "[") + print_row(m[i]) + "]";
  return s + "]";
}

std::string print_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::string quote(const std::string& s) {
  std::string q = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') q += '\\';
    q += c;
  }
  return q + "\"";
}

struct Printer {
  std::ostringstream os;

  void operator()(const AlgebraDecl& a) {
    os << "algebra " << a.name << " {\n";
    if (a.dim) os << "  dim " << *a.dim << ";\n";
    if (!a.basis.empty()) {
      os << "  basis";
      for (const auto& b : a.basis) os << ' ' << b;
      os << ";\n";
    }
    for (const auto& b : a.brackets) os << "  bracket [" << b.a << "," << b.b << "] = " << print_expr(b.value) << ";\n";
    if (a.pairing) {
      if (a.pairing_diag)
        os << "  pairing diag(" << print_row(a.pairing->empty() ? std::vector<Rational>{} : a.pairing->front())
           << ");\n";
      else
        os << "  pairing " << print_matrix(*a.pairing) << ";\n";
    }
    os << "}\n";
  }
  void operator()(const SubspaceDecl& s) {
    os << "subspace " << s.name << " in " << s.algebra << " {\n";
    if (!s.span.empty()) os << "  span " << print_exprs(s.span) << ";\n";
    os << "}\n";
  }
  void operator()(const PairDecl& p) { os << "maninpair " << p.name << " (" << p.algebra << ", " << p.subspace << ");\n"; }
  void operator()(const SplittingDecl& s) {
    os << "splitting " << s.name << " for " << s.pair << " {\n";
    if (s.automatic) os << "  auto;\n";
    if (!s.images.empty()) os << "  images " << print_exprs(s.images) << ";\n";
    if (s.shift) os << "  shift " << print_matrix(*s.shift) << ";\n";
    os << "}\n";
  }
  void operator()(const FiberDecl& f) {
    os << "fiber " << f.name << " {\n";
    if (!f.splitting.empty()) os << "  splitting " << f.splitting << ";\n";
    if (f.tangent) os << "  tangent " << *f.tangent << ";\n";
    if (f.canonical) os << "  canonical;\n";
    auto m = [&](const char* key, const std::optional<RatMatrix>& v) {
      if (v) os << "  " << key << ' ' << print_matrix(*v) << ";\n";
    };
    m("anchor", f.anchor);
    m("dJ", f.dJ);
    m("pi", f.pi);
    m("action", f.action);
    m("dirac", f.dirac);
    m("section", f.section);
    os << "}\n";
  }
  void operator()(const ExampleDecl& e) {
    os << "example " << e.name << " {\n";
    if (!e.run.empty()) os << "  run " << quote(e.run) << ";\n";
    if (e.samples) os << "  samples " << *e.samples << ";\n";
    if (e.seed) os << "  seed " << *e.seed << ";\n";
    if (e.tol) os << "  tol " << print_double(*e.tol) << ";\n";
    if (e.nested_tol) os << "  nested_tol " << print_double(*e.nested_tol) << ";\n";
    if (e.step) os << "  step " << print_double(*e.step) << ";\n";
    os << "}\n";
  }
  void operator()(const CheckDecl& c) {
    os << "check " << c.kind;
    for (const auto& a : c.args) os << ' ' << (a.quoted ? quote(a.text) : a.text);
    os << ";\n";
  }
};

}  // namespace

SceneIR parse_scene(const std::string& text) { return Parser(tokenize(text)).scene(); }

std::string print_scene(const SceneIR& ir) {
  Printer p;
  for (std::size_t i = 0; i < ir.decls.size(); ++i) {
    const bool both_checks =
        i > 0 && std::holds_alternative<CheckDecl>(ir.decls[i]) && std::holds_alternative<CheckDecl>(ir.decls[i - 1]);
    if (i > 0 && !both_checks) p.os << '\n';
    std::visit(p, ir.decls[i]);
  }
  return p.os.str();
}

// ---- validation ------------------------------------------------------------------

namespace {

constexpr std::size_t kMaxDim = 64;
constexpr std::size_t kMaxSamples = 100000;

struct Validator {
  CheckedScene out;
  std::uint64_t default_seed = 0;
  std::map<std::string, std::string> kind_of;  // declared name -> declaration kind
  std::map<std::string, std::vector<std::string>> basis_of;
  std::map<std::string, std::string> algebra_of_subspace, pair_of_splitting;

  [[noreturn]] static void error(Position p, const std::string& decl, const std::string& reason) {
    throw SemanticError(p, decl, reason);
  }

  void declare(Position p, const std::string& kind, const std::string& name) {
    if (auto it = kind_of.find(name); it != kind_of.end())
      error(p, name, "duplicate name (already declared as " + it->second + ")");
    kind_of[name] = kind;
  }

  void require_kind(Position p, const std::string& decl, const std::string& kind, const std::string& ref) {
    auto it = kind_of.find(ref);
    if (it == kind_of.end()) error(p, decl, "unknown identifier '" + ref + "'");
    if (it->second != kind) error(p, decl, "'" + ref + "' is a " + it->second + ", expected a " + kind);
  }

  static QMatrix to_matrix(Position p, const std::string& decl, const std::string& field, const RatMatrix& m,
                           std::size_t rows, std::size_t cols) {
    if (m.size() != rows) error(p, decl, field + " must have " + std::to_string(rows) + " rows, has " + std::to_string(m.size()));
    QMatrix q(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
      if (m[i].size() != cols)
        error(p, decl, field + " row " + std::to_string(i + 1) + " must have " + std::to_string(cols) + " entries");
      for (std::size_t j = 0; j < cols; ++j) q(i, j) = m[i][j];
    }
    return q;
  }

  static std::size_t cols_of(Position p, const std::string& decl, const std::string& field, const RatMatrix& m) {
    if (m.empty()) return 0;
    for (const auto& r : m)
      if (r.size() != m.front().size()) error(p, decl, field + " has rows of different lengths");
    return m.front().size();
  }

  QVector vec(Position p, const std::string& decl, const std::vector<std::string>& basis, const LinExpr& e) {
    QVector v(basis.size());
    for (const Term& t : e) {
      auto it = std::find(basis.begin(), basis.end(), t.ident);
      if (it == basis.end()) error(p, decl, "unknown basis element '" + t.ident + "'");
      v[it - basis.begin()] += t.coef;
    }
    return v;
  }

  static std::string name_indices(const std::string& s, const std::vector<std::string>& basis) {
    static const std::regex triple(R"(\((\d+),(\d+),(\d+)\))");
    std::smatch m;
    if (!std::regex_search(s, m, triple)) return s;
    auto b = [&](int k) { return basis.at(std::stoul(m[k].str())); };
    return m.prefix().str() + "[" + b(1) + "," + b(2) + "," + b(3) + "]" + m.suffix().str();
  }

  void algebra(const AlgebraDecl& a) {
    declare(a.pos, "algebra", a.name);
    if (!a.dim) error(a.pos, a.name, "missing dim");
    const std::size_t n = *a.dim;
    if (n == 0 || n > kMaxDim) error(a.pos, a.name, "dim must be between 1 and " + std::to_string(kMaxDim));
    if (a.basis.size() != n)
      error(a.pos, a.name, "basis has " + std::to_string(a.basis.size()) + " elements, dim is " + std::to_string(n));
    std::set<std::string> seen;
    for (const auto& b : a.basis)
      if (!seen.insert(b).second) error(a.pos, a.name, "basis element '" + b + "' repeated");
    if (!a.pairing) error(a.pos, a.name, "missing pairing");

    std::vector<Rational> c(n * n * n);
    std::vector<char> set(n * n, 0);
    auto index = [&](Position p, const std::string& id) {
      auto it = std::find(a.basis.begin(), a.basis.end(), id);
      if (it == a.basis.end()) error(p, a.name, "unknown basis element '" + id + "'");
      return static_cast<std::size_t>(it - a.basis.begin());
    };
    for (const auto& b : a.brackets) {
      const std::size_t i = index(b.pos, b.a), j = index(b.pos, b.b);
      const QVector v = vec(b.pos, a.name, a.basis, b.value);
      const std::string what = "bracket [" + b.a + "," + b.b + "]";
      if (i == j) {
        for (const auto& x : v)
          if (sgn(x) != 0) error(b.pos, a.name, what + " must be 0");
        continue;
      }
      for (std::size_t k = 0; k < n; ++k) {
        const Rational& old = c[(i * n + j) * n + k];
        if (set[i * n + j] && old != v[k]) error(b.pos, a.name, what + " contradicts an earlier bracket");
      }
      for (std::size_t k = 0; k < n; ++k) {
        c[(i * n + j) * n + k] = v[k];
        c[(j * n + i) * n + k] = -v[k];
      }
      set[i * n + j] = set[j * n + i] = 1;
    }

    QMatrix g;
    if (a.pairing_diag) {
      const auto& d = a.pairing->front();
      if (d.size() != n) error(a.pos, a.name, "diag pairing has " + std::to_string(d.size()) + " entries, dim is " + std::to_string(n));
      g = QMatrix::diagonal(d);
    } else {
      g = to_matrix(a.pos, a.name, "pairing", *a.pairing, n, n);
    }
    if (!g.is_symmetric()) error(a.pos, a.name, "pairing is not symmetric");

    QuadraticLieAlgebra d(n, std::move(c), SplitForm(g));
    const QuadraticLieReport rep = check_quadratic_lie(d);
    if (!rep.ok()) {
      std::string why;
      for (const auto& f : rep.failures) why += (why.empty() ? "" : "; ") + name_indices(f, a.basis);
      error(a.pos, a.name, "not a quadratic Lie algebra: " + why);
    }
    basis_of[a.name] = a.basis;
    out.algebras.emplace(a.name, std::move(d));
  }

  void subspace(const SubspaceDecl& s) {
    declare(s.pos, "subspace", s.name);
    require_kind(s.pos, s.name, "algebra", s.algebra);
    const auto& basis = basis_of.at(s.algebra);
    QMatrix rows(s.span.size(), basis.size());
    for (std::size_t r = 0; r < s.span.size(); ++r) {
      const QVector v = vec(s.pos, s.name, basis, s.span[r]);
      for (std::size_t k = 0; k < v.size(); ++k) rows(r, k) = v[k];
    }
    algebra_of_subspace[s.name] = s.algebra;
    out.subspaces.emplace(s.name, Subspace::span(basis.size(), rows));
  }

  void pair(const PairDecl& p) {
    declare(p.pos, "maninpair", p.name);
    require_kind(p.pos, p.name, "algebra", p.algebra);
    require_kind(p.pos, p.name, "subspace", p.subspace);
    if (algebra_of_subspace.at(p.subspace) != p.algebra)
      error(p.pos, p.name, "subspace '" + p.subspace + "' lives in '" + algebra_of_subspace.at(p.subspace) + "'");
    const QuadraticLieAlgebra& d = out.algebras.at(p.algebra);
    const Subspace& g = out.subspaces.at(p.subspace);
    try {
      if (!is_manin_pair(d, g)) {
        const bool lag = is_lagrangian(d.form(), g);
        error(p.pos, p.name, lag ? "subspace is Lagrangian but not a subalgebra" : "subspace is not Lagrangian");
      }
    } catch (const SignatureError& e) {
      error(p.pos, p.name, std::string("pairing is not split: ") + e.what());
    }
    out.pairs.emplace(p.name, ManinPairPoint{d, g, p.name});
  }

  void splitting(const SplittingDecl& s) {
    declare(s.pos, "splitting", s.name);
    require_kind(s.pos, s.name, "maninpair", s.pair);
    const ManinPairPoint& pp = out.pairs.at(s.pair);
    const std::size_t r = pp.rank(), n = pp.d.dim();
    IsotropicSplitting j;
    if (s.automatic) {
      j = make_isotropic_splitting(pp);
    } else if (!s.images.empty()) {
      if (s.images.size() != r)
        error(s.pos, s.name, "images lists " + std::to_string(s.images.size()) + " vectors, rank is " + std::to_string(r));
      j.images = QMatrix(r, n);
      const auto& basis = basis_of.at(find_algebra(pp));
      for (std::size_t k = 0; k < r; ++k) {
        const QVector v = vec(s.pos, s.name, basis, s.images[k]);
        for (std::size_t c = 0; c < n; ++c) j.images(k, c) = v[c];
      }
    } else {
      error(s.pos, s.name, "needs auto or images");
    }
    if (s.shift) {
      const QMatrix lambda = to_matrix(s.pos, s.name, "shift", *s.shift, r, r);
      if (!lambda.is_skew()) error(s.pos, s.name, "shift is not skew");
      j = shift_splitting(pp.g, j, lambda);
    }
    const SplittingReport rep = check_splitting(pp.d.form(), pp.g, j);
    if (!rep.isotropic) error(s.pos, s.name, "image is not isotropic");
    if (!rep.right_inverse) error(s.pos, s.name, "images are not dual to the subalgebra basis (p o j != id)");
    pair_of_splitting[s.name] = s.pair;
    out.splittings.emplace(s.name, std::move(j));
  }

  std::map<std::string, std::string> pair_algebra;
  std::string find_algebra(const ManinPairPoint& pp) const { return pair_algebra.at(pp.name); }

  void fiber(const FiberDecl& f) {
    declare(f.pos, "fiber", f.name);
    if (f.splitting.empty()) error(f.pos, f.name, "missing splitting");
    require_kind(f.pos, f.name, "splitting", f.splitting);
    const ManinPairPoint& pp = out.pairs.at(pair_of_splitting.at(f.splitting));
    const IsotropicSplitting& j = out.splittings.at(f.splitting);
    const std::size_t e = pp.d.dim(), r = pp.rank();

    PairFiber pf = PairFiber::over_point(pp);
    if (f.anchor) {
      const std::size_t b = f.anchor->size();
      if (b > kMaxDim) error(f.pos, f.name, "anchor has too many rows");
      pf.anchor = to_matrix(f.pos, f.name, "anchor", *f.anchor, b, e);
      const auto ginv = inverse(pp.d.form().gram());
      if (!(pf.anchor * *ginv * pf.anchor.transpose()).is_zero())
        error(f.pos, f.name, "anchor violates rho rho^* = 0");
    }
    const std::size_t b = pf.base_dim();

    FiberSpec spec;
    if (f.canonical) {
      if (f.tangent || f.dJ || f.pi || f.action || f.dirac)
        error(f.pos, f.name, "canonical fibers take only splitting, anchor and section");
      spec = canonical_fiber_spec(pf, j);
    } else {
      if (!f.tangent) error(f.pos, f.name, "missing tangent");
      const std::size_t n = *f.tangent;
      if (n > kMaxDim) error(f.pos, f.name, "tangent dimension too large");
      spec.pair = pf;
      spec.j = j;
      spec.tangent_dim = n;
      spec.dJ = f.dJ ? to_matrix(f.pos, f.name, "dJ", *f.dJ, b, n) : QMatrix(b, n);
      if (f.pi.has_value() != f.action.has_value()) error(f.pos, f.name, "pi and action must be given together");
      if (f.pi) {
        QuasiPoissonPointData q{to_matrix(f.pos, f.name, "pi", *f.pi, n, n),
                                to_matrix(f.pos, f.name, "action", *f.action, n, r)};
        spec.quasi = std::move(q);
      }
      if (f.dirac) {
        const std::size_t rows = f.dirac->size();
        if (rows > 2 * kMaxDim) error(f.pos, f.name, "dirac has too many rows");
        spec.dirac = Subspace::span(2 * n, to_matrix(f.pos, f.name, "dirac", *f.dirac, rows, 2 * n));
      }
    }
    spec.name = f.name;
    if (f.section) spec.id = ExactIdentification{to_matrix(f.pos, f.name, "section", *f.section, e, b)};
    try {
      spec.validate();
    } catch (const std::exception& ex) {
      error(f.pos, f.name, ex.what());
    }
    out.fibers.emplace(f.name, std::move(spec));
  }

  void example(const ExampleDecl& x) {
    declare(x.pos, "example", x.name);
    const ExampleInfo* info = find_example(x.run);
    if (x.run.empty()) error(x.pos, x.name, "missing run");
    if (!info) error(x.pos, x.name, "unknown example '" + x.run + "'");
    ExampleParams p;
    p.seed = default_seed;
    if (x.samples) {
      if (*x.samples == 0 || *x.samples > kMaxSamples)
        error(x.pos, x.name, "samples must be between 1 and " + std::to_string(kMaxSamples));
      p.samples = *x.samples;
    }
    if (x.seed) p.seed = *x.seed;
    auto positive = [&](const std::optional<double>& v, double& slot, const char* what) {
      if (!v) return;
      if (!(*v > 0) || !std::isfinite(*v)) error(x.pos, x.name, std::string(what) + " must be positive");
      slot = *v;
    };
    positive(x.tol, p.tol, "tol");
    positive(x.nested_tol, p.nested_tol, "nested_tol");
    positive(x.step, p.step, "step");
    out.examples.emplace(x.name, std::make_pair(info, p));
  }

  void check(const CheckDecl& c);
};

std::vector<CheckResult> single(const std::string& name, const std::function<std::pair<bool, std::string>()>& body) {
  return {timed(name, 0, [&] {
    const auto [ok, witness] = body();
    return Outcome{ok, ok ? 0.0 : 1.0, witness};
  })};
}

std::vector<CheckResult> prefixed(const std::string& prefix, std::vector<CheckResult> rs) {
  for (auto& r : rs) r.name = prefix + "/" + r.name;
  return rs;
}

HamiltonianFiber k_of(const FiberSpec& f) {
  if (f.k) return *f.k;
  if (f.quasi) return k_from_quasi(*f.quasi, f.pair, f.j, f.dJ);
  const auto id = f.identification();
  if (!id) throw std::invalid_argument("no exact identification: E is not T_S (+) T_S^* over this fiber");
  return k_from_dirac({*f.dirac}, f.dJ, f.pair, *id);
}

void Validator::check(const CheckDecl& c) {
  std::string label = c.kind;
  for (const auto& a : c.args) label += " " + a.text;
  auto args = [&](std::size_t lo, std::size_t hi) {
    if (c.args.size() < lo || c.args.size() > hi)
      error(c.pos, "check " + c.kind,
            "takes " + std::to_string(lo) + (hi > lo ? "-" + std::to_string(hi) : "") + " arguments");
  };
  auto ref = [&](std::size_t i, const std::string& kind) -> const std::string& {
    if (c.args[i].quoted) error(c.pos, "check " + c.kind, "argument " + std::to_string(i + 1) + " must be a name");
    require_kind(c.pos, "check " + c.kind, kind, c.args[i].text);
    return c.args[i].text;
  };
  CheckedScene& s = out;
  const std::string k = c.kind;

  if (k == "lie") {
    args(1, 1);
    const QuadraticLieAlgebra d = s.algebras.at(ref(0, "algebra"));
    const auto basis = basis_of.at(c.args[0].text);
    s.plan.push_back({label, [label, d, basis] {
                        return single(label, [&] {
                          const auto rep = check_quadratic_lie(d);
                          std::string w;
                          for (const auto& f : rep.failures) w += (w.empty() ? "" : "; ") + name_indices(f, basis);
                          return std::pair<bool, std::string>{rep.ok(), w.empty() ? rep.signature.to_string() : w};
                        });
                      }});
  } else if (k == "manin") {
    args(1, 1);
    const ManinPairPoint p = s.pairs.at(ref(0, "maninpair"));
    s.plan.push_back({label, [label, p] {
                        return single(label, [&] { return std::pair<bool, std::string>{is_manin_pair(p.d, p.g), ""}; });
                      }});
  } else if (k == "catalog") {
    args(2, 2);
    const ManinPairPoint p = s.pairs.at(ref(0, "maninpair"));
    const std::string name = c.args[1].text;
    const auto names = catalog::names();
    if (std::find(names.begin(), names.end(), name) == names.end())
      error(c.pos, "check catalog", "unknown catalog pair '" + name + "'");
    s.plan.push_back({label, [label, p, name] {
                        return single(label, [&] {
                          const ManinPairPoint q = catalog::by_name(name);
                          const bool d_same = p.d == q.d, g_same = p.g == q.g;
                          return std::pair<bool, std::string>{
                              d_same && g_same, d_same ? (g_same ? "" : "subalgebra differs") : "algebra differs"};
                        });
                      }});
  } else if (k == "splitting" || k == "quasi") {
    args(1, 1);
    const std::string& name = ref(0, "splitting");
    const ManinPairPoint p = s.pairs.at(pair_of_splitting.at(name));
    const IsotropicSplitting j = s.splittings.at(name);
    if (k == "splitting") {
      s.plan.push_back({label, [label, p, j] {
                          return single(label, [&] {
                            const auto rep = check_splitting(p.d.form(), p.g, j);
                            return std::pair<bool, std::string>{
                                rep.ok(), rep.isotropic ? (rep.right_inverse ? "" : "p o j != id") : "not isotropic"};
                          });
                        }});
    } else {
      s.plan.push_back({label, [label, p, j] {
                          return single(label, [&] {
                            const QuasiBialgebraData q = derive_quasi_data(p, j);
                            if (!q.antisymmetric()) return std::pair<bool, std::string>{false, "F or chi not antisymmetric"};
                            const auto rep = check_quasi_jacobi(subalgebra_constants(p), q);
                            return std::pair<bool, std::string>{rep.ok(), rep.failure};
                          });
                        }});
    }
  } else if (k == "morphism") {
    args(1, 1);
    const ManinPairPoint p = s.pairs.at(ref(0, "maninpair"));
    s.plan.push_back({label, [label, p] {
                        return single(label, [&] {
                          const MorphismFiber m = identity_morphism(p);
                          const bool def = check_morphism_def(m), eq = check_morphism_equiv(m);
                          return std::pair<bool, std::string>{def && eq, def == eq ? "" : "criteria disagree"};
                        });
                      }});
  } else if (k == "hamiltonian") {
    args(1, 1);
    const FiberSpec f = s.fibers.at(ref(0, "fiber"));
    s.plan.push_back({label, [label, f] {
                        return single(label, [&] {
                          const auto rep = check_hamiltonian_fiber(k_of(f));
                          return std::pair<bool, std::string>{rep.ok(), rep.ok() ? "" : rep.failure()};
                        });
                      }});
  } else if (k == "dictionary") {
    args(1, 2);
    const FiberSpec f = s.fibers.at(ref(0, "fiber"));
    DictMode mode = DictMode::roundtrip;
    if (c.args.size() == 2) {
      std::string m = c.args[1].text;
      std::replace(m.begin(), m.end(), '_', '-');
      auto parsed = parse_dict_mode(m);
      if (!parsed) error(c.pos, "check dictionary", "unknown mode '" + c.args[1].text + "'");
      mode = *parsed;
    }
    s.plan.push_back({label, [label, f, mode] { return prefixed(label, run_dictionary(f, mode).checks); }});
  } else if (k == "example") {
    args(1, 1);
    const auto [info, params] = s.examples.at(ref(0, "example"));
    s.plan.push_back({label, [label, info = info, params = params] { return prefixed(label, info->run(params)); }});
  } else {
    std::string kinds;
    for (const auto& x : check_kinds()) kinds += (kinds.empty() ? "" : ", ") + x;
    error(c.pos, "check " + c.kind, "unknown check kind (expected one of " + kinds + ")");
  }
}

}  // namespace

const std::vector<std::string>& check_kinds() {
  static const std::vector<std::string> kinds{"lie",        "manin",       "catalog",    "splitting", "quasi",
                                              "morphism",   "hamiltonian", "dictionary", "example"};
  return kinds;
}

CheckedScene validate_scene(const SceneIR& ir, std::uint64_t default_seed) {
  Validator v;
  v.default_seed = default_seed;
  for (const Decl& d : ir.decls) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, AlgebraDecl>) v.algebra(x);
          if constexpr (std::is_same_v<T, SubspaceDecl>) v.subspace(x);
          if constexpr (std::is_same_v<T, PairDecl>) {
            v.pair(x);
            v.pair_algebra[x.name] = x.algebra;
          }
          if constexpr (std::is_same_v<T, SplittingDecl>) v.splitting(x);
          if constexpr (std::is_same_v<T, FiberDecl>) v.fiber(x);
          if constexpr (std::is_same_v<T, ExampleDecl>) v.example(x);
          if constexpr (std::is_same_v<T, CheckDecl>) v.check(x);
        },
        d);
  }
  return std::move(v.out);
}

std::vector<CheckResult> run_plan(const CheckedScene& scene) {
  std::vector<CheckResult> all;
  for (const PlannedCheck& c : scene.plan) {
    std::vector<CheckResult> rs;
    try {
      rs = c.run();
    } catch (const std::exception& e) {
      CheckResult r;
      r.name = c.name;
      r.status = CheckStatus::error;
      r.witness = e.what();
      rs = {r};
    }
    all.insert(all.end(), rs.begin(), rs.end());
  }
  return all;
}

}  // namespace manin::scene
