#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include <json.hpp>

#include "betacurv/beta.hpp"
#include "betacurv/report_json.hpp"
#include "betacurv/suite.hpp"
#include "betacurv/synth.hpp"
#include "betacurv/verify.hpp"

using namespace betacurv;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("scalar documents sort keys and repeat byte for byte") {
  const std::string doc =
      scalar_document("info", {{"zeta", 1.0}, {"alpha", 2.5}}, {{"mode", "exact"}});
  CHECK(doc == scalar_document("info", {{"zeta", 1.0}, {"alpha", 2.5}}, {{"mode", "exact"}}));
  CHECK(doc.find("\"alpha\"") < doc.find("\"zeta\""));
  CHECK(doc.back() == '\n');
  const auto parsed = nlohmann::json::parse(doc);
  CHECK(parsed["command"] == "info");
  CHECK(parsed["values"]["alpha"] == 2.5);
  CHECK(parsed["labels"]["mode"] == "exact");
  CHECK(parsed.contains("version"));
}

TEST_CASE("non finite values are encoded as strings, never null") {
  const std::string doc = scalar_document(
      "x", {{"hi", kInf}, {"lo", -kInf}, {"none", std::nan("")}});
  CHECK(doc.find("null") == std::string::npos);
  const auto parsed = nlohmann::json::parse(doc);
  CHECK(parsed["values"]["hi"] == "inf");
  CHECK(parsed["values"]["lo"] == "-inf");
  CHECK(parsed["values"]["none"] == "nan");
}

TEST_CASE("verification documents aggregate the pass flag") {
  VerificationReport good;
  good.name = "a";
  good.lhs = 1.0;
  good.rhs = 2.0;
  good.ratio = 0.5;
  good.pass = true;
  good.params = {{"m", 1.0}};
  good.scale_rows = {{0.5, 1.0, 2.0, 0.25, 0.125}};
  good.atom_rows = {{0, 1.0, 0.5, 0.75}};
  VerificationReport bad = good;
  bad.name = "b";
  bad.pass = false;

  const std::string doc = verification_document("verify", 42, {good, bad});
  const auto parsed = nlohmann::json::parse(doc);
  CHECK(parsed["seed"] == 42);
  CHECK(parsed["pass"] == false);
  REQUIRE(parsed["reports"].size() == 2);
  CHECK(parsed["reports"][0]["name"] == "a");
  CHECK(parsed["reports"][0]["scales"][0]["contribution"] == 0.125);
  CHECK(parsed["reports"][0]["atoms"][0]["rhs_term"] == 0.75);
  CHECK(parsed["reports"][1]["pass"] == false);

  const std::string all_good = verification_document("verify", 42, {good});
  CHECK(nlohmann::json::parse(all_good)["pass"] == true);
}

TEST_CASE("profile documents and csv share the interval table") {
  const PointCloudMeasure tri = make_triangle();
  const ScaleProfile prof =
      scale_profile(tri, Eigen::Vector2d(0.0, 0.0), 2.0, BetaParams{1, 2.0, true});

  const auto parsed = nlohmann::json::parse(profile_document(prof));
  CHECK(parsed["command"] == "profile");
  CHECK(parsed["m"] == 1);
  CHECK(parsed["centred"] == true);
  CHECK(parsed["rho"] == 2.0);
  REQUIRE(parsed["intervals"].size() == 2);
  CHECK(parsed["intervals"][0]["mass"] == 1.0);
  CHECK(parsed["intervals"][1]["mass"] == 3.0);
  CHECK(parsed["breakpoints"][0] == 1.0);

  const std::string csv = profile_csv(prof);
  std::istringstream lines(csv);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "r_lo,r_hi,mass,beta_numerator,exact");
  int rows = 0;
  std::string row;
  while (std::getline(lines, row)) ++rows;
  CHECK(rows == 2);

  // infinite rho must serialize without nulls
  const ScaleProfile open_ended =
      scale_profile(tri, Eigen::Vector2d(0.0, 0.0), kInf, BetaParams{1, 2.0, true});
  const std::string open_doc = profile_document(open_ended);
  CHECK(open_doc.find("null") == std::string::npos);
  CHECK(nlohmann::json::parse(open_doc)["rho"] == "inf");
  CHECK(profile_csv(open_ended).find("inf") != std::string::npos);
}

TEST_CASE("suite documents leave timing out") {
  SuiteResult result;
  result.seed = 9;
  result.size = SuiteSize::smoke;
  result.pass = true;
  CriterionResult criterion;
  criterion.name = "sample";
  criterion.pass = true;
  criterion.checks = 10;
  criterion.failures = 0;
  criterion.worst_ratio = 0.25;
  criterion.notes = "ok";
  criterion.seconds = 12.5;
  result.criteria.push_back(criterion);

  const std::string doc = suite_document(result);
  CHECK(doc.find("seconds") == std::string::npos);
  CHECK(doc.find("12.5") == std::string::npos);
  const auto parsed = nlohmann::json::parse(doc);
  CHECK(parsed["size"] == "smoke");
  CHECK(parsed["criteria"][0]["name"] == "sample");
  CHECK(parsed["criteria"][0]["checks"] == 10);
  CHECK(std::string(to_string(SuiteSize::full)) == "full");
  CHECK(std::string(to_string(SuiteSize::smoke)) == "smoke");
}

TEST_CASE("atomic writes replace the target and clean up") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "betacurv_reportio_test";
  fs::create_directories(dir);
  const std::string target = (dir / "out.json").string();

  write_file_atomic(target, "first\n");
  write_file_atomic(target, "second\n");
  std::ifstream in(target);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(content == "second\n");
  CHECK(!fs::exists(target + ".tmp"));
  fs::remove_all(dir);
}
