#pragma once

#include <string>
#include <vector>

#include "maryland/types.hpp"

namespace maryland::verify {

struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0.0;  // measured discrepancy or quantity
  double tol = 0.0;
};

// suite: "trivial" (closed-form identities, seconds) or "full" (adds the
// cross-route and oracle invariants, minutes).
std::vector<CheckResult> run_suite(const std::string& suite);

}  // namespace maryland::verify
