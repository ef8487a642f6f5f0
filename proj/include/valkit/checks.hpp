#pragma once

// Randomized invariant suites shared by `valkit selftest` and the tests.

#include <cstdint>
#include <string>
#include <vector>

namespace valkit {

struct SuiteResult {
  std::string name;
  std::size_t instances = 0;
  std::size_t failures = 0;
  std::vector<std::string> messages;  // first few failures

  bool ok() const { return failures == 0 && instances > 0; }
};

std::vector<SuiteResult> run_property_suites(std::uint64_t seed, std::size_t instances = 200);

}  // namespace valkit
