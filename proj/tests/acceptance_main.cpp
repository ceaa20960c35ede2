#include <cstdio>

#include "betacurv/suite.hpp"

int main() {
  const betacurv::SuiteResult result = betacurv::run_suite(20250901ULL, betacurv::SuiteSize::full);
  for (const auto& c : result.criteria) {
    std::printf("[%s] %-26s checks=%llu failures=%llu worst=%.6g (%.1fs)%s%s\n",
                c.pass ? "PASS" : "FAIL", c.name.c_str(),
                static_cast<unsigned long long>(c.checks),
                static_cast<unsigned long long>(c.failures), c.worst_ratio, c.seconds,
                c.notes.empty() ? "" : " ", c.notes.c_str());
  }
  std::printf("%s\n", result.pass ? "acceptance: all criteria passed"
                                  : "acceptance: FAILURES PRESENT");
  return result.pass ? 0 : 1;
}
