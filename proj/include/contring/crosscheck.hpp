#pragma once

#include <string>
#include <vector>

#include "contring/dispatch.hpp"

namespace contring {

struct PropertyResult {
  std::string name;
  std::string status;  // PASS | FAIL | SKIP
  std::string detail;  // counterexample or skip reason
};

// Runs the property suite against one ring: matrix/continuant identities,
// elementary reduction identities, unit-scaling invariance, brute-vs-DP
// agreement on every target, conservation, and the local-ring laws (skipped
// with a reason on non-local rings or when a budget rules a check out).
std::vector<PropertyResult> run_crosscheck(Session& session,
                                           const std::string& spec_text,
                                           int max_n);

}  // namespace contring
