#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lqu {

// One statistical property: worst residual over all trials vs its tolerance.
// Residuals are defined so that "residual <= tolerance" is the pass condition;
// bound-style properties usually sit at negative residuals (their margin).
struct PropertyResult {
  std::string suite;
  std::string name;
  int trials = 0;
  double worst_residual = 0.0;
  double tolerance = 0.0;
  std::uint64_t worst_seed = 0;  // trial seed attaining the worst residual
  bool passed = false;
  double seconds = 0.0;
  std::string note;  // first exception message, if a trial threw
};

struct VerifyOptions {
  std::uint64_t seed = 1;
  int trials = 0;       // 0 keeps each property's default count
  bool parallel = true;
  // self-test hook: pretend every tolerance is impossible so all properties
  // fail and the exit path for failures can be exercised
  bool corrupt_tolerances = false;
};

// all | skew | lqu | metrology | channels ("all" adds the linalg core checks)
std::vector<std::string> verify_suite_names();
std::vector<PropertyResult> run_verify(const std::string& suite,
                                       const VerifyOptions& options);

bool all_passed(const std::vector<PropertyResult>& results);
std::string render_verify_report(const std::vector<PropertyResult>& results,
                                 const VerifyOptions& options,
                                 double total_seconds);

}  // namespace lqu
