#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "betacurv/beta.hpp"
#include "betacurv/suite.hpp"
#include "betacurv/verify.hpp"

namespace betacurv {

// JSON documents with sorted keys and shortest round-trip number formatting:
// identical inputs serialize to identical bytes. Non-finite values appear as
// the strings "inf", "-inf" and "nan" since JSON numbers cannot hold them.

std::string scalar_document(const std::string& command,
                            const std::vector<std::pair<std::string, double>>& values,
                            const std::vector<std::pair<std::string, std::string>>& labels = {});

std::string verification_document(const std::string& command, std::uint64_t seed,
                                  const std::vector<VerificationReport>& reports);

std::string profile_document(const ScaleProfile& profile);

// Flat interval table: r_lo,r_hi,mass,beta_numerator,exact.
std::string profile_csv(const ScaleProfile& profile);

std::string suite_document(const SuiteResult& result);

// Writes through a sibling temporary file and a rename, so readers never
// observe a partially written report.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace betacurv
