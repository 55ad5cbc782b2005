#pragma once

// Named numeric examples: each builds its structures on a seeded sample and
// returns one result per check.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace manin {

enum class CheckStatus { pass, fail, error };

const char* to_string(CheckStatus s);

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::error;
  double residual = 0;  // NaN when the check has no scalar residual
  double tol = 0;
  std::string witness;  // point / item indices, or an error message
  double elapsed_ms = 0;
};

struct ExampleParams {
  std::size_t samples = 20;
  std::uint64_t seed = 0;
  double tol = 1e-6;         // algebraic and single-difference checks
  double nested_tol = 1e-4;  // checks nesting two difference layers
  double step = 1e-4;
};

struct ExampleInfo {
  std::string name;
  std::string description;
  std::function<std::vector<CheckResult>(const ExampleParams&)> run;
};

const std::vector<ExampleInfo>& example_registry();
/// nullptr for an unknown name.
const ExampleInfo* find_example(const std::string& name);

struct Outcome {
  bool pass = false;
  double residual = 0;
  std::string witness;
};
/// residual < tol.
Outcome below(double residual, double tol, std::string witness = {});

/// Run and time `body`; an escaping exception gives status error with its
/// message as witness.
CheckResult timed(const std::string& name, double tol, const std::function<Outcome()>& body);

}  // namespace manin
