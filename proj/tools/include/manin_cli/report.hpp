#pragma once

// JSON run reports and the fiber file format of the manin tool.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "manin/fiber_spec.hpp"

namespace manin::cli {

inline constexpr int kSchema = 1;

/// 64-bit FNV-1a, lowercase hex.
std::string fnv1a_hex(std::string_view data);

struct Summary {
  std::size_t total = 0, pass = 0, fail = 0, error = 0;
  bool all_pass() const { return pass == total; }
};
Summary summarize(const std::vector<CheckResult>& checks);

/// A failing check without a witness gets "residual R >= tol T".
nlohmann::ordered_json make_report(const std::string& command, const std::string& input_hash, std::uint64_t seed,
                                   const std::vector<CheckResult>& checks);

/// Hash of the report with every elapsed_ms and the hash field removed.
std::string determinism_hash(const nlohmann::ordered_json& report);

class FiberFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// {"name", "dims": {"E", "base", "tangent"}, "canonical",
///  "matrices": {"pairing", "A", "anchor", "splitting", "shift", "dJ", "pi",
///  "action", "dirac", "section", "K"}}. Entries are "p/q" strings or
/// numbers; a float is taken at its exact binary value.
FiberSpec fiber_from_json(const nlohmann::json& j);

}  // namespace manin::cli
