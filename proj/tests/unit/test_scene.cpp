#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <regex>
#include <sstream>

#include "manin/scene.hpp"

using namespace manin;
using namespace manin::scene;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<fs::path> files(const std::string& sub) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(fs::path(MANIN_FIXTURES) / sub))
    if (e.path().extension() == ".mp") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

std::string fixture(const std::string& name) { return slurp(fs::path(MANIN_FIXTURES) / "scenes" / name); }

}  // namespace

TEST(Tokenizer, KindsAndPositions) {
  const auto toks = tokenize("algebra a {\n  dim 2; # note\n  x 3/4 -1.5e2 \"s\\\"q\" }");
  ASSERT_GE(toks.size(), 10u);
  EXPECT_EQ(toks[0].kind, TokenKind::ident);
  EXPECT_EQ(toks[3].text, "dim");
  EXPECT_EQ(toks[3].pos, (Position{2, 3}));
  EXPECT_EQ(toks[4].kind, TokenKind::integer);
  EXPECT_EQ(toks[7].kind, TokenKind::rational);
  EXPECT_EQ(toks[7].text, "3/4");
  EXPECT_EQ(toks[7].pos, (Position{3, 5}));
  bool real = false, str = false;
  for (const auto& t : toks) {
    real = real || t.kind == TokenKind::real;
    if (t.kind == TokenKind::string) {
      str = true;
      EXPECT_EQ(t.text, "s\"q");
    }
  }
  EXPECT_TRUE(real);
  EXPECT_TRUE(str);
  EXPECT_EQ(toks.back().kind, TokenKind::end);
}

TEST(Tokenizer, Errors) {
  EXPECT_THROW(tokenize("\"open"), ParseError);
  EXPECT_THROW(tokenize("a $ b"), ParseError);
}

TEST(Parser, MinimalScene) {
  const SceneIR ir = parse_scene(fixture("abelian_r2.mp"));
  ASSERT_EQ(ir.decls.size(), 4u);
  const auto& a = std::get<AlgebraDecl>(ir.decls[0]);
  EXPECT_EQ(a.name, "a");
  EXPECT_EQ(a.dim, 2u);
  EXPECT_EQ(a.basis, (std::vector<std::string>{"e1", "f1"}));
  EXPECT_TRUE(a.pairing_diag);
  const auto& s = std::get<SubspaceDecl>(ir.decls[1]);
  ASSERT_EQ(s.span.size(), 1u);
  EXPECT_EQ(s.span[0], (LinExpr{{1, "e1"}, {1, "f1"}}));
  const auto& c = std::get<CheckDecl>(ir.decls[3]);
  EXPECT_EQ(c.kind, "catalog");
  ASSERT_EQ(c.args.size(), 2u);
  EXPECT_TRUE(c.args[1].quoted);
}

TEST(Parser, LinearExpressionCoefficients) {
  const SceneIR ir = parse_scene("subspace g in a { span 1/2*e1 - 3*f1 + e2, -e1; }\n");
  const auto& s = std::get<SubspaceDecl>(ir.decls[0]);
  EXPECT_EQ(s.span[0], (LinExpr{{Rational(1, 2), "e1"}, {-3, "f1"}, {1, "e2"}}));
  EXPECT_EQ(s.span[1], (LinExpr{{-1, "e1"}}));
}

TEST(Printer, GoldenRoundTripOfEveryFixture) {
  // golden/ holds the canonical text of each scene, frozen from the printer
  const auto scenes = files("scenes");
  ASSERT_EQ(scenes.size(), 10u);
  for (const auto& p : scenes) {
    const std::string golden = slurp(fs::path(MANIN_FIXTURES) / "golden" / p.filename());
    ASSERT_FALSE(golden.empty()) << p.filename();
    const SceneIR ir = parse_scene(slurp(p));
    EXPECT_EQ(print_scene(ir), golden) << p.filename();
    EXPECT_EQ(parse_scene(golden), ir) << p.filename();
    EXPECT_EQ(print_scene(parse_scene(golden)), golden) << p.filename();
  }
}

TEST(Validation, EveryFixturePasses) {
  for (const auto& p : files("scenes")) {
    const CheckedScene s = validate_scene(parse_scene(slurp(p)), 1);
    for (const auto& r : run_plan(s))
      EXPECT_EQ(r.status, CheckStatus::pass) << p.filename() << ": " << r.name << " " << r.witness;
  }
}

TEST(Validation, CatalogPairsAreBitIdentical) {
  const std::regex directive(R"re(check catalog (\w+) "([\w-]+)";)re");
  int seen = 0;
  for (const auto& p : files("scenes")) {
    const std::string text = slurp(p);
    const CheckedScene s = validate_scene(parse_scene(text));
    for (std::sregex_iterator it(text.begin(), text.end(), directive), end; it != end; ++it) {
      const ManinPairPoint& mine = s.pairs.at((*it)[1]);
      const ManinPairPoint ref = catalog::by_name((*it)[2]);
      EXPECT_EQ(mine.d.constants(), ref.d.constants()) << (*it)[2];
      EXPECT_EQ(mine.d.form(), ref.d.form()) << (*it)[2];
      EXPECT_EQ(mine.g, ref.g) << (*it)[2];
      ++seen;
    }
  }
  EXPECT_EQ(seen, 6);
}

TEST(Validation, PlanFollowsCheckDirectives) {
  const CheckedScene s = validate_scene(parse_scene(fixture("so3_double.mp")));
  const SceneIR ir = parse_scene(fixture("so3_double.mp"));
  std::size_t checks = 0;
  for (const auto& d : ir.decls) checks += std::holds_alternative<CheckDecl>(d);
  ASSERT_EQ(s.plan.size(), checks);
  EXPECT_EQ(s.plan[0].name.rfind("lie ", 0), 0u);
  for (const auto& r : run_plan(s)) EXPECT_FALSE(r.name.empty());
}

TEST(Validation, AutoSplittingIsIsotropicRightInverse) {
  const CheckedScene s = validate_scene(parse_scene(fixture("sl2_double_standard.mp")));
  for (const auto& [name, j] : s.splittings) {
    bool found = false;
    for (const auto& [pname, pair] : s.pairs) {
      if (j.images.cols() != pair.d.dim() || j.rank() != pair.rank()) continue;
      found = found || check_splitting(pair.d.form(), pair.g, j).ok();
    }
    EXPECT_TRUE(found) << name;
  }
}

TEST(Validation, ExampleSeedDefault) {
  const SceneIR ir = parse_scene("example e { run \"symplectic-r2\"; samples 3; }\n");
  EXPECT_EQ(validate_scene(ir, 42).examples.at("e").second.seed, 42u);
  const SceneIR fixed = parse_scene("example e { run \"symplectic-r2\"; samples 3; seed 7; }\n");
  EXPECT_EQ(validate_scene(fixed, 42).examples.at("e").second.seed, 7u);
  EXPECT_THROW(validate_scene(parse_scene("example e { run \"nope\"; }\n")), SemanticError);
}

TEST(Errors, FixturesReportLabelledPositions) {
  const std::regex label(R"(# expect (parse|semantic) (\d+):(\d+)(?: (.*))?)");
  const auto errs = files("errors");
  ASSERT_EQ(errs.size(), 20u);
  for (const auto& p : errs) {
    const std::string text = slurp(p);
    std::smatch m;
    const std::string first = text.substr(0, text.find('\n'));
    ASSERT_TRUE(std::regex_match(first, m, label)) << p.filename();
    const Position want{std::stoul(m[2]), std::stoul(m[3])};
    const std::string needle = m[4];
    if (m[1] == "parse") {
      try {
        parse_scene(text);
        ADD_FAILURE() << p.filename() << " parsed";
      } catch (const ParseError& e) {
        EXPECT_EQ(e.pos, want) << p.filename() << ": " << e.what();
      }
    } else {
      try {
        validate_scene(parse_scene(text));
        ADD_FAILURE() << p.filename() << " validated";
      } catch (const SemanticError& e) {
        EXPECT_EQ(e.pos, want) << p.filename() << ": " << e.what();
        EXPECT_NE(e.reason.find(needle), std::string::npos) << p.filename() << ": " << e.reason;
      }
    }
  }
}

TEST(Fuzz, MutatedScenesFailCleanly) {
  std::vector<std::string> corpus;
  for (const auto& p : files("scenes")) corpus.push_back(slurp(p));
  const std::string alphabet = "{}[](),;=+-*/ \n\"#.0123456789abcdefxyz_";
  std::mt19937_64 rng(2024);
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  int parsed = 0;
  for (int t = 0; t < 2000; ++t) {
    std::string s = corpus[pick(corpus.size())];
    const int edits = 1 + static_cast<int>(pick(3));
    for (int e = 0; e < edits && !s.empty(); ++e) {
      const std::size_t at = pick(s.size());
      switch (pick(3)) {
        case 0: s.erase(at, 1 + pick(4)); break;
        case 1: s.insert(at, 1, alphabet[pick(alphabet.size())]); break;
        default: s[at] = alphabet[pick(alphabet.size())];
      }
    }
    try {
      const SceneIR ir = parse_scene(s);
      ++parsed;
      EXPECT_EQ(parse_scene(print_scene(ir)), ir);
      try {
        validate_scene(ir);
      } catch (const SemanticError&) {
      }
    } catch (const ParseError&) {
    } catch (const std::exception& e) {
      ADD_FAILURE() << "unexpected " << typeid(e).name() << ": " << e.what() << "\n" << s;
    }
  }
  EXPECT_GT(parsed, 100);
}

TEST(CheckKinds, Listed) {
  const auto& k = check_kinds();
  for (const char* want : {"lie", "manin", "catalog", "splitting", "quasi", "morphism", "hamiltonian", "dictionary", "example"})
    EXPECT_NE(std::find(k.begin(), k.end(), want), k.end()) << want;
}
