#pragma once

// Built-in property suites, runnable from the CLI without the test binaries.

#include <cstdint>
#include <string>
#include <vector>

#include "holoform/qform.hpp"

namespace holoform {

struct SuiteResult {
  std::string suite;
  int checks = 0;
  int failures = 0;
};

/// Runs the arithmetic property suites: Hilbert product formula (including a
/// mutation check that a wrong 2-adic formula is caught), the sum-of-forms
/// identity, the <m,-m> ~ <1,-1> equivalence, and agreement of the two
/// projective-equivalence deciders. Deterministic in the seed.
std::vector<SuiteResult> run_selftests(std::uint64_t seed = 1);

bool all_passed(const std::vector<SuiteResult>& results);

}  // namespace holoform
