#include "manin_cli/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "manin/scene.hpp"
#include "manin_cli/report.hpp"

namespace manin::cli {

namespace {

struct Options {
  bool json = false;
  bool quiet = false;
  std::string scene_path;
  std::uint64_t seed = 0;
  std::string mode;
  std::string fiber_path;
  std::string example;
  std::size_t samples = 20;
  double tol = 1e-6;
  double nested_tol = 1e-4;
  double step = 1e-4;
};

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fmt(double v) {
  if (std::isnan(v)) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

int emit(const Options& o, const std::string& command, const std::string& input_hash, std::uint64_t seed,
         const std::vector<CheckResult>& checks, std::ostream& out) {
  const auto report = make_report(command, input_hash, seed, checks);
  const Summary s = summarize(checks);
  if (o.json) {
    out << report.dump(2) << '\n';
  } else {
    for (const auto& c : report["checks"]) {
      const bool ok = c["status"] == "pass";
      if (o.quiet && ok) continue;
      std::string status = c["status"].get<std::string>();
      for (auto& ch : status) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
      out << status << "  " << c["name"].get<std::string>();
      if (!c["residual"].is_null()) out << "  residual " << fmt(c["residual"].get<double>());
      const std::string w = c["witness"].get<std::string>();
      if (!w.empty() && (!ok || !o.quiet)) out << "  [" << w << "]";
      out << '\n';
    }
    out << s.pass << "/" << s.total << " passed";
    if (s.fail) out << ", " << s.fail << " failed";
    if (s.error) out << ", " << s.error << " errors";
    out << "  (seed " << seed << ", determinism " << report["determinism_hash"].get<std::string>() << ")\n";
  }
  return s.all_pass() ? kAllPass : kCheckFailed;
}

int cmd_check(const Options& o, std::ostream& out) {
  const std::string text = read_file(o.scene_path);
  const scene::SceneIR ir = scene::parse_scene(text);
  const scene::CheckedScene checked = scene::validate_scene(ir, o.seed);
  return emit(o, "check", fnv1a_hex(text), o.seed, scene::run_plan(checked), out);
}

int cmd_dict(const Options& o, std::ostream& out) {
  const auto mode = parse_dict_mode(o.mode);
  if (!mode) throw InputError("unknown mode '" + o.mode + "' (qp-to-dirac, dirac-to-qp, roundtrip)");
  const std::string text = read_file(o.fiber_path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(o.fiber_path + ": " + e.what());
  }
  FiberSpec f;
  try {
    f = fiber_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(o.fiber_path + ": " + e.what());
  } catch (const std::exception& e) {
    throw InputError(o.fiber_path + ": " + e.what());
  }
  return emit(o, "dict " + o.mode, fnv1a_hex(text), 0, run_dictionary(f, *mode).checks, out);
}

int cmd_verify(const Options& o, std::ostream& out) {
  const ExampleInfo* info = find_example(o.example);
  if (!info) throw InputError("unknown example '" + o.example + "' (see list-examples)");
  if (o.samples == 0) throw InputError("--samples must be positive");
  for (double v : {o.tol, o.nested_tol, o.step})
    if (!(v > 0) || !std::isfinite(v)) throw InputError("tolerances and step must be positive");
  ExampleParams p;
  p.samples = o.samples;
  p.seed = o.seed;
  p.tol = o.tol;
  p.nested_tol = o.nested_tol;
  p.step = o.step;
  std::ostringstream key;
  key << info->name << ' ' << p.samples << ' ' << p.tol << ' ' << p.nested_tol << ' ' << p.step;
  return emit(o, "verify-example", fnv1a_hex(key.str()), o.seed, info->run(p), out);
}

int cmd_list(const Options& o, std::ostream& out) {
  if (o.json) {
    nlohmann::ordered_json r;
    r["schema"] = kSchema;
    r["tool_version"] = MANIN_VERSION;
    r["examples"] = nlohmann::ordered_json::array();
    for (const auto& e : example_registry()) r["examples"].push_back({{"name", e.name}, {"description", e.description}});
    out << r.dump(2) << '\n';
  } else {
    for (const auto& e : example_registry()) out << e.name << "  " << e.description << '\n';
  }
  return kAllPass;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Manin pair and Hamiltonian space checker", "manin"};
  app.set_version_flag("--version", MANIN_VERSION);
  app.add_flag("--json", o.json, "Machine-readable report on stdout");
  app.add_flag("--quiet", o.quiet, "Only print failures and the summary");
  app.require_subcommand(1);

  auto* check = app.add_subcommand("check", "Parse, validate and run a scene file");
  check->add_option("scene", o.scene_path, "Scene file (.mp)")->required();
  check->add_option("--seed", o.seed, "Seed for examples that do not set one");

  auto* dict = app.add_subcommand("dict", "Run the fiberwise dictionary on a fiber file");
  dict->add_option("--mode", o.mode, "qp-to-dirac, dirac-to-qp or roundtrip")->required();
  dict->add_option("--fiber", o.fiber_path, "Fiber JSON file")->required();

  auto* verify = app.add_subcommand("verify-example", "Run a named numeric example");
  verify->add_option("name", o.example, "Example name (see list-examples)")->required();
  verify->add_option("--samples", o.samples, "Number of sample points");
  verify->add_option("--seed", o.seed, "Random seed");
  verify->add_option("--tol", o.tol, "Tolerance for algebraic and single-difference checks");
  verify->add_option("--nested-tol", o.nested_tol, "Tolerance for checks nesting two difference layers");
  verify->add_option("--fd-step", o.step, "Finite-difference step");

  auto* list = app.add_subcommand("list-examples", "List the named numeric examples");

  for (auto* sub : {check, dict, verify, list}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code == 0) return kAllPass;
    err << app.help();
    return kInputError;
  }

  try {
    if (*check) return cmd_check(o, out);
    if (*dict) return cmd_dict(o, out);
    if (*verify) return cmd_verify(o, out);
    return cmd_list(o, out);
  } catch (const scene::ParseError& e) {
    err << o.scene_path << ":" << e.pos.line << ":" << e.pos.col << ": parse error: " << e.message;
    if (!e.token.empty()) err << " (got '" << e.token << "')";
    err << '\n';
    return kInputError;
  } catch (const scene::SemanticError& e) {
    err << o.scene_path << ":" << e.pos.line << ":" << e.pos.col << ": error in '" << e.decl << "': " << e.reason
        << '\n';
    return kInputError;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
}

}  // namespace manin::cli
