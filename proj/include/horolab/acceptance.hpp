#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "horolab/runner.hpp"

namespace horolab {

// The verification suite behind `horolab verify` and the acceptance test
// binary.  Each criterion is self-contained, pins its own tolerances and
// sample sizes, and reports one pass/fail line.
struct AcceptanceOptions {
  int workers = 0;
  std::uint64_t seed = 1;
  // Development shortcut: shrink the Monte Carlo sizes (never used by the
  // shipped test suite; the full sizes are the acceptance gate).
  bool quick = false;
};

inline constexpr int kNumCriteria = 11;

VerificationRow run_criterion(int id, const AcceptanceOptions& opts);

// identities | group | distance | mixing | full
std::vector<int> criteria_for_suite(const std::string& suite);

std::vector<VerificationRow> run_suite(const std::string& suite, const AcceptanceOptions& opts,
                                       bool print_lines);

}  // namespace horolab
