#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hmr/adjoint.hpp"
#include "hmr/config.hpp"
#include "hmr/rational_map.hpp"

namespace hmr {

struct SuiteResult {
  std::string name;
  int cases = 0;
  double max_err = 0.0;
  double tol = 0.0;
  bool pass = false;
  std::string note;
};

struct VerifySummary {
  std::string map_name;
  std::uint64_t seed = 0;
  int trials = 0;
  bool pass = false;
  std::vector<SuiteResult> suites;
};

// Run the cross-checking suites against one symbol: agreement of the three
// formula arrangements, agreement with the series oracle, exactness at
// z = 0, the constant-function closed form, the two-kernel identity,
// partial-fraction reconstruction, and fiber containment.  Deterministic
// for a fixed seed (sampling uses a private generator per suite).
VerifySummary run_verify(const RationalMap& phi, std::uint64_t seed, int trials,
                         const std::string& map_name = "",
                         const Tolerances& tol = default_tolerances());

}  // namespace hmr
