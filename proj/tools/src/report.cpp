#include "manin_cli/report.hpp"

#include <cmath>
#include <cstdio>

namespace manin::cli {

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Summary summarize(const std::vector<CheckResult>& checks) {
  Summary s;
  s.total = checks.size();
  for (const auto& c : checks) {
    if (c.status == CheckStatus::pass) ++s.pass;
    if (c.status == CheckStatus::fail) ++s.fail;
    if (c.status == CheckStatus::error) ++s.error;
  }
  return s;
}

nlohmann::ordered_json make_report(const std::string& command, const std::string& input_hash, std::uint64_t seed,
                                   const std::vector<CheckResult>& checks) {
  using nlohmann::ordered_json;
  ordered_json r;
  r["schema"] = kSchema;
  r["tool_version"] = MANIN_VERSION;
  r["command"] = command;
  r["scene_hash"] = input_hash;
  r["seed"] = seed;
  ordered_json list = ordered_json::array();
  for (const auto& c : checks) {
    ordered_json e;
    e["name"] = c.name;
    e["status"] = to_string(c.status);
    if (std::isfinite(c.residual))
      e["residual"] = c.residual;
    else
      e["residual"] = nullptr;
    e["tol"] = c.tol;
    std::string w = c.witness;
    if (c.status == CheckStatus::fail && w.empty()) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "residual %.6g >= tol %.6g", c.residual, c.tol);
      w = buf;
    }
    e["witness"] = w;
    e["elapsed_ms"] = c.elapsed_ms;
    list.push_back(std::move(e));
  }
  r["checks"] = std::move(list);
  const Summary s = summarize(checks);
  r["summary"] = {{"total", s.total}, {"pass", s.pass}, {"fail", s.fail}, {"error", s.error}};
  r["determinism_hash"] = determinism_hash(r);
  return r;
}

std::string determinism_hash(const nlohmann::ordered_json& report) {
  nlohmann::ordered_json r = report;
  r.erase("determinism_hash");
  if (r.contains("checks"))
    for (auto& c : r["checks"]) c.erase("elapsed_ms");
  return fnv1a_hex(r.dump());
}

// ---- fiber files -------------------------------------------------------------

namespace {

Rational entry(const nlohmann::json& v, const std::string& where) {
  if (v.is_string()) {
    auto q = parse_rational(v.get<std::string>());
    if (!q) throw FiberFormatError(where + ": bad rational '" + v.get<std::string>() + "'");
    return *q;
  }
  if (v.is_number_integer()) return Rational(std::to_string(v.get<long long>()));
  if (v.is_number_unsigned()) return Rational(std::to_string(v.get<unsigned long long>()));
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw FiberFormatError(where + ": non-finite entry");
    return Rational(d);
  }
  throw FiberFormatError(where + ": entries must be strings or numbers");
}

QMatrix matrix(const nlohmann::json& m, const std::string& key, std::size_t rows, std::size_t cols) {
  if (!m.is_array()) throw FiberFormatError(key + ": expected an array of rows");
  if (rows != SIZE_MAX && m.size() != rows)
    throw FiberFormatError(key + ": expected " + std::to_string(rows) + " rows, got " + std::to_string(m.size()));
  QMatrix q(m.size(), cols);
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!m[i].is_array() || m[i].size() != cols)
      throw FiberFormatError(key + ": row " + std::to_string(i) + " must have " + std::to_string(cols) + " entries");
    for (std::size_t j = 0; j < cols; ++j)
      q(i, j) = entry(m[i][j], key + "[" + std::to_string(i) + "][" + std::to_string(j) + "]");
  }
  return q;
}

std::size_t dim(const nlohmann::json& dims, const char* key, bool required) {
  if (!dims.contains(key)) {
    if (required) throw FiberFormatError(std::string("dims.") + key + " is required");
    return 0;
  }
  const auto& v = dims.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
    throw FiberFormatError(std::string("dims.") + key + " must be a non-negative integer");
  const auto d = v.get<std::size_t>();
  if (d > 64) throw FiberFormatError(std::string("dims.") + key + " is larger than 64");
  return d;
}

}  // namespace

FiberSpec fiber_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw FiberFormatError("fiber file must hold a JSON object");
  if (!j.contains("dims") || !j.contains("matrices")) throw FiberFormatError("fiber file needs dims and matrices");
  const auto& dims = j.at("dims");
  const auto& mats = j.at("matrices");
  if (!dims.is_object() || !mats.is_object()) throw FiberFormatError("dims and matrices must be objects");
  for (auto it = mats.begin(); it != mats.end(); ++it) {
    static const std::vector<std::string> known{"pairing", "A",  "anchor", "splitting", "shift", "dJ",
                                                "pi",      "action", "dirac",  "section",   "K"};
    if (std::find(known.begin(), known.end(), it.key()) == known.end())
      throw FiberFormatError("unknown matrix '" + it.key() + "'");
  }
  const std::size_t e = dim(dims, "E", true), b = dim(dims, "base", false);
  const bool canonical = j.value("canonical", false);
  const std::size_t n = canonical ? b : dim(dims, "tangent", true);
  auto get = [&](const char* key) -> const nlohmann::json* { return mats.contains(key) ? &mats.at(key) : nullptr; };
  auto need = [&](const char* key) -> const nlohmann::json& {
    if (!mats.contains(key)) throw FiberFormatError(std::string("matrices.") + key + " is required");
    return mats.at(key);
  };

  PairFiber pf;
  pf.form = SplitForm(matrix(need("pairing"), "pairing", e, e));
  if (!pf.form.gram().is_symmetric()) throw FiberFormatError("pairing is not symmetric");
  pf.a = Subspace::span(e, matrix(need("A"), "A", SIZE_MAX, e));
  pf.anchor = get("anchor") ? matrix(*get("anchor"), "anchor", b, e) : QMatrix(b, e);
  if (!pf.form.signature().split()) throw FiberFormatError("pairing is not of split signature");
  if (!is_lagrangian(pf.form, pf.a)) throw FiberFormatError("A is not Lagrangian");
  const std::size_t r = pf.rank();

  IsotropicSplitting split;
  if (get("splitting"))
    split.images = matrix(*get("splitting"), "splitting", r, e);
  else
    split = make_isotropic_splitting(pf.form, pf.a);
  if (get("shift")) split = shift_splitting(pf.a, split, matrix(*get("shift"), "shift", r, r));

  FiberSpec f;
  if (canonical) {
    f = canonical_fiber_spec(pf, split);
  } else {
    f.pair = pf;
    f.j = split;
    f.tangent_dim = n;
    f.dJ = get("dJ") ? matrix(*get("dJ"), "dJ", b, n) : QMatrix(b, n);
    if ((get("pi") != nullptr) != (get("action") != nullptr))
      throw FiberFormatError("pi and action must be given together");
    if (get("pi")) f.quasi = QuasiPoissonPointData{matrix(*get("pi"), "pi", n, n), matrix(*get("action"), "action", n, r)};
    if (get("dirac")) f.dirac = Subspace::span(2 * n, matrix(*get("dirac"), "dirac", SIZE_MAX, 2 * n));
    if (get("K")) {
      HamiltonianFiber h;
      h.tangent_dim = n;
      h.pair = pf;
      h.dJ = f.dJ;
      h.K = Subspace::span(2 * n + e, matrix(*get("K"), "K", SIZE_MAX, 2 * n + e));
      f.k = std::move(h);
    }
  }
  f.name = j.value("name", std::string("fiber"));
  if (get("section")) f.id = ExactIdentification{matrix(*get("section"), "section", e, b)};
  try {
    f.validate();
  } catch (const std::exception& ex) {
    throw FiberFormatError(ex.what());
  }
  return f;
}

}  // namespace manin::cli
