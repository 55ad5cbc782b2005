#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "manin_cli/cli.hpp"
#include "manin_cli/report.hpp"

using namespace manin;
using namespace manin::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Invocation {
  int code;
  std::string out, err;
};

Invocation invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "manin");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string scene(const std::string& name) { return (fs::path(MANIN_FIXTURES) / "scenes" / name).string(); }
std::string fiber(const std::string& name) { return (fs::path(MANIN_FIXTURES) / "fibers" / name).string(); }

std::string write_temp(const std::string& name, const std::string& text) {
  const fs::path p = fs::temp_directory_path() / ("manin_cli_test_" + name);
  std::ofstream(p) << text;
  return p.string();
}

json without_timing(json j) {
  for (auto& c : j["checks"]) c.erase("elapsed_ms");
  return j;
}

}  // namespace

TEST(Fnv1a, KnownVectors) {
  EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
  EXPECT_EQ(fnv1a_hex("foobar"), "85944171f73967e8");
}

TEST(Report, SchemaFieldsAndDefaultWitness) {
  CheckResult ok{"a", CheckStatus::pass, 1e-9, 1e-6, "", 1.5};
  CheckResult bad{"b", CheckStatus::fail, 0.25, 1e-6, "", 2.0};
  CheckResult nan{"c", CheckStatus::error, std::nan(""), 0, "boom", 0};
  const auto r = make_report("check x.mp", "00", 5, {ok, bad, nan});
  EXPECT_EQ(r["schema"], 1);
  EXPECT_EQ(r["seed"], 5);
  EXPECT_EQ(r["command"], "check x.mp");
  ASSERT_EQ(r["checks"].size(), 3u);
  EXPECT_EQ(r["checks"][1]["status"], "fail");
  EXPECT_EQ(r["checks"][1]["witness"].get<std::string>().rfind("residual ", 0), 0u);
  EXPECT_TRUE(r["checks"][2]["residual"].is_null());
  EXPECT_EQ(r["summary"]["total"], 3);
  EXPECT_EQ(r["summary"]["pass"], 1);
  EXPECT_EQ(r["summary"]["fail"], 1);
  EXPECT_EQ(r["summary"]["error"], 1);
  // timing does not enter the hash
  CheckResult slow = ok;
  slow.elapsed_ms = 900;
  EXPECT_EQ(determinism_hash(make_report("check x.mp", "00", 5, {slow, bad, nan})), determinism_hash(r));
  EXPECT_NE(determinism_hash(make_report("check x.mp", "00", 6, {ok, bad, nan})), determinism_hash(r));
}

TEST(Check, So3DoubleJsonReport) {
  const Invocation r = invoke({"--json", "check", scene("so3_double.mp")});
  ASSERT_EQ(r.code, kAllPass) << r.err;
  const json j = json::parse(r.out);
  for (const char* key : {"schema", "tool_version", "command", "scene_hash", "seed", "checks", "summary", "determinism_hash"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["seed"], 0);
  EXPECT_EQ(j["summary"]["pass"], j["summary"]["total"]);
  for (const auto& c : j["checks"])
    for (const char* key : {"name", "status", "residual", "tol", "witness", "elapsed_ms"}) EXPECT_TRUE(c.contains(key)) << key;
}

TEST(Check, DeterministicAcrossRuns) {
  for (const char* name : {"so3_double.mp", "numeric_examples.mp"}) {
    const Invocation a = invoke({"--json", "check", scene(name), "--seed", "9"});
    const Invocation b = invoke({"--json", "check", scene(name), "--seed", "9"});
    const json ja = json::parse(a.out), jb = json::parse(b.out);
    EXPECT_EQ(ja["determinism_hash"], jb["determinism_hash"]) << name;
    EXPECT_EQ(without_timing(ja).dump(), without_timing(jb).dump()) << name;
    EXPECT_EQ(ja["seed"], 9);
  }
}

TEST(Check, TextOutputAndQuiet) {
  const Invocation r = invoke({"check", scene("abelian_r2.mp")});
  EXPECT_EQ(r.code, kAllPass);
  EXPECT_NE(r.out.find("catalog p"), std::string::npos) << r.out;
  const Invocation q = invoke({"--quiet", "check", scene("abelian_r2.mp")});
  EXPECT_EQ(q.code, kAllPass);
  EXPECT_LT(q.out.size(), r.out.size());
}

TEST(Check, ParseErrorIsPositioned) {
  const std::string path = write_temp("broken.mp", "algebra a {\n  dim 2\n}\n");
  const Invocation r = invoke({"check", path});
  EXPECT_EQ(r.code, kInputError);
  EXPECT_NE(r.err.find(path + ":3:1: parse error"), std::string::npos) << r.err;
}

TEST(Check, SemanticErrorNamesDeclaration) {
  const std::string path = write_temp("semantic.mp", "algebra a { dim 2; basis e1 f1; pairing diag(1, -1); }\n"
                                                     "subspace g in a { span e1; }\nmaninpair p (a, g);\n");
  const Invocation r = invoke({"check", path});
  EXPECT_EQ(r.code, kInputError);
  EXPECT_NE(r.err.find(":3:1: error in 'p'"), std::string::npos) << r.err;
}

TEST(Check, MissingFile) {
  EXPECT_EQ(invoke({"check", "/nonexistent/scene.mp"}).code, kInputError);
}

TEST(Usage, UnknownSubcommandAndFlag) {
  EXPECT_EQ(invoke({"frobnicate"}).code, kInputError);
  EXPECT_EQ(invoke({"check", scene("abelian_r2.mp"), "--bogus"}).code, kInputError);
  EXPECT_EQ(invoke({}).code, kInputError);
  EXPECT_EQ(invoke({"dict", "--mode", "sideways", "--fiber", fiber("sympl2.json")}).code, kInputError);
}

TEST(Dict, Sympl2RoundTrip) {
  const Invocation r = invoke({"dict", "--mode", "roundtrip", "--fiber", fiber("sympl2.json")});
  EXPECT_EQ(r.code, kAllPass) << r.out << r.err;
}

TEST(Dict, AllModesOnExactFibers) {
  for (const char* f : {"exact_line.json", "canonical_so3.json"})
    for (const char* mode : {"qp-to-dirac", "dirac-to-qp", "roundtrip"}) {
      const Invocation r = invoke({"--json", "dict", "--mode", mode, "--fiber", fiber(f)});
      EXPECT_EQ(r.code, kAllPass) << f << " " << mode << "\n" << r.out << r.err;
    }
}

TEST(Dict, NonExactFiberReportsError) {
  const Invocation r = invoke({"--json", "dict", "--mode", "qp-to-dirac", "--fiber", fiber("sympl2.json")});
  EXPECT_EQ(r.code, kCheckFailed);
  const json j = json::parse(r.out);
  EXPECT_GT(j["summary"]["error"].get<int>(), 0);
}

TEST(FiberLoader, RejectsMalformedFiles) {
  const json good = json::parse(std::ifstream(fiber("sympl2.json")));
  EXPECT_NO_THROW(fiber_from_json(good));
  json unknown = good;
  unknown["matrices"]["bogus"] = json::array();
  EXPECT_THROW(fiber_from_json(unknown), FiberFormatError);
  json big = good;
  big["dims"]["tangent"] = 65;
  EXPECT_THROW(fiber_from_json(big), FiberFormatError);
  json zero_den = good;
  zero_den["matrices"]["pi"][0][1] = "1/0";
  EXPECT_THROW(fiber_from_json(zero_den), FiberFormatError);
  json ragged = good;
  ragged["matrices"]["pi"][1] = json::array({"0"});
  EXPECT_ANY_THROW(fiber_from_json(ragged));
}

TEST(FiberLoader, FloatsAreExact) {
  json j = json::parse(std::ifstream(fiber("sympl2.json")));
  j["matrices"]["pi"] = json::array({json::array({0.0, 0.5}), json::array({-0.5, 0.0})});
  const FiberSpec f = fiber_from_json(j);
  ASSERT_TRUE(f.quasi);
  EXPECT_EQ(f.quasi->Pi(0, 1), Rational(1, 2));
}

TEST(VerifyExample, PassesAndFailsWithTolerance) {
  EXPECT_EQ(invoke({"verify-example", "symplectic-r2", "--samples", "3"}).code, kAllPass);
  const Invocation tight = invoke({"--json", "verify-example", "quasi-poisson-so3", "--samples", "3", "--tol", "1e-300",
                            "--nested-tol", "1e-300"});
  EXPECT_EQ(tight.code, kCheckFailed);
  const json j = json::parse(tight.out);
  EXPECT_GT(j["summary"]["fail"].get<int>(), 0);
  for (const auto& c : j["checks"])
    if (c["status"] == "fail") EXPECT_FALSE(c["witness"].get<std::string>().empty());
  EXPECT_EQ(invoke({"verify-example", "no-such-example"}).code, kInputError);
}

TEST(ListExamples, NamesEveryExample) {
  const Invocation r = invoke({"list-examples"});
  EXPECT_EQ(r.code, kAllPass);
  for (const auto& e : example_registry()) EXPECT_NE(r.out.find(e.name), std::string::npos) << e.name;
}

TEST(ExitCode, AgreesWithSummary) {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"--json", "check", scene("exact_fibers.mp")},
           {"--json", "verify-example", "linear-poisson-so3dual", "--samples", "2"},
           {"--json", "verify-example", "canonical-so3", "--samples", "2", "--tol", "1e-300"},
       }) {
    const Invocation r = invoke(args);
    const json j = json::parse(r.out);
    const bool all = j["summary"]["pass"] == j["summary"]["total"];
    EXPECT_EQ(r.code, all ? kAllPass : kCheckFailed) << args[2];
  }
}

TEST(Binary, ExitCodeFromShell) {
  const std::string cmd = std::string(MANIN_CLI_PATH) + " --quiet check " + scene("abelian_r2.mp") + " > /dev/null";
  EXPECT_EQ(std::system(cmd.c_str()), 0);
  const std::string bad = std::string(MANIN_CLI_PATH) + " frobnicate > /dev/null 2>&1";
  const int status = std::system(bad.c_str());
  EXPECT_EQ(WEXITSTATUS(status), 2);
}
