#include <doctest.h>

#include "betacurv/suite.hpp"

using namespace betacurv;

TEST_CASE("reduced suite passes end to end") {
  const SuiteResult result = run_suite(20250901ULL, SuiteSize::smoke);
  REQUIRE(result.criteria.size() == 10);
  for (const CriterionResult& criterion : result.criteria) {
    CAPTURE(criterion.name);
    CAPTURE(criterion.notes);
    CHECK(criterion.pass);
    CHECK(criterion.checks > 0);
  }
  CHECK(result.pass);
  CHECK(result.seed == 20250901ULL);
}
