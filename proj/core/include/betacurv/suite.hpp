#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace betacurv {

enum class SuiteSize { smoke, full };

const char* to_string(SuiteSize size);

// Outcome of one verification battery. worst_ratio is the battery's headline
// margin: the largest lhs/rhs for inequality batteries, the largest relative
// deviation for agreement batteries.
struct CriterionResult {
  std::string name;
  bool pass = false;
  std::uint64_t checks = 0;
  std::uint64_t failures = 0;
  double worst_ratio = 0.0;
  std::string notes;
  double seconds = 0.0;  // wall clock; kept out of serialized reports
};

struct SuiteResult {
  std::uint64_t seed = 0;
  SuiteSize size = SuiteSize::full;
  bool pass = false;
  std::vector<CriterionResult> criteria;
};

// Runs all verification batteries in a fixed order with sub-seeds derived
// from `seed`. Apart from the timing fields the result is a pure function of
// (seed, size).
SuiteResult run_suite(std::uint64_t seed, SuiteSize size);

}  // namespace betacurv
