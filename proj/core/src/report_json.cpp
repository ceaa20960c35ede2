#include "betacurv/report_json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <system_error>
#include <utility>

#include "json.hpp"

#include "betacurv/errors.hpp"
#include "betacurv/version.hpp"

namespace betacurv {
namespace {

using nlohmann::json;

// json numbers cannot hold non-finite doubles; nlohmann would dump them as
// null, so encode them as strings instead.
json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0.0 ? "inf" : "-inf";
}

json kv_object(const std::vector<std::pair<std::string, double>>& values) {
  json obj = json::object();
  for (const auto& [key, value] : values) obj[key] = number(value);
  return obj;
}

std::string finish(const json& doc) { return doc.dump(2) + "\n"; }

json report_to_json(const VerificationReport& rep) {
  json j;
  j["name"] = rep.name;
  j["lhs"] = number(rep.lhs);
  j["rhs"] = number(rep.rhs);
  j["constant"] = number(rep.constant);
  j["ratio"] = number(rep.ratio);
  j["pass"] = rep.pass;
  j["params"] = kv_object(rep.params);

  json scales = json::array();
  for (const ScaleRow& row : rep.scale_rows) {
    json s;
    s["r_lo"] = number(row.r_lo);
    s["r_hi"] = number(row.r_hi);
    s["mass"] = number(row.mass);
    s["beta_numerator"] = number(row.beta_numerator);
    s["contribution"] = number(row.contribution);
    scales.push_back(std::move(s));
  }
  j["scales"] = std::move(scales);

  json atoms = json::array();
  for (const AtomRow& row : rep.atom_rows) {
    json a;
    a["atom"] = row.atom;
    a["weight"] = number(row.weight);
    a["lhs_term"] = number(row.lhs_term);
    a["rhs_term"] = number(row.rhs_term);
    atoms.push_back(std::move(a));
  }
  j["atoms"] = std::move(atoms);
  return j;
}

}  // namespace

std::string scalar_document(const std::string& command,
                            const std::vector<std::pair<std::string, double>>& values,
                            const std::vector<std::pair<std::string, std::string>>& labels) {
  json doc;
  doc["command"] = command;
  doc["version"] = kVersion;
  doc["values"] = kv_object(values);
  if (!labels.empty()) {
    json lab = json::object();
    for (const auto& [key, value] : labels) lab[key] = value;
    doc["labels"] = std::move(lab);
  }
  return finish(doc);
}

std::string verification_document(const std::string& command, std::uint64_t seed,
                                  const std::vector<VerificationReport>& reports) {
  json doc;
  doc["command"] = command;
  doc["version"] = kVersion;
  doc["seed"] = seed;
  doc["pass"] = std::all_of(reports.begin(), reports.end(),
                            [](const VerificationReport& r) { return r.pass; });
  json arr = json::array();
  for (const VerificationReport& rep : reports) arr.push_back(report_to_json(rep));
  doc["reports"] = std::move(arr);
  return finish(doc);
}

std::string profile_document(const ScaleProfile& profile) {
  json doc;
  doc["command"] = "profile";
  doc["version"] = kVersion;
  json center = json::array();
  for (Eigen::Index i = 0; i < profile.center().size(); ++i)
    center.push_back(number(profile.center()[i]));
  doc["center"] = std::move(center);
  doc["m"] = profile.params().m;
  doc["p"] = number(profile.params().p);
  doc["centred"] = profile.params().centred;
  doc["rho"] = number(profile.rho());
  json breaks = json::array();
  for (const double b : profile.breakpoints()) breaks.push_back(number(b));
  doc["breakpoints"] = std::move(breaks);
  json intervals = json::array();
  for (const ScaleInterval& iv : profile.intervals()) {
    json row;
    row["r_lo"] = number(iv.r_lo);
    row["r_hi"] = number(iv.r_hi);
    row["mass"] = number(iv.mass);
    row["beta_numerator"] = number(iv.beta_numerator);
    row["exact"] = iv.exact;
    intervals.push_back(std::move(row));
  }
  doc["intervals"] = std::move(intervals);
  return finish(doc);
}

std::string profile_csv(const ScaleProfile& profile) {
  std::string out = "r_lo,r_hi,mass,beta_numerator,exact\n";
  char line[256];
  for (const ScaleInterval& iv : profile.intervals()) {
    std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g,%d\n", iv.r_lo, iv.r_hi, iv.mass,
                  iv.beta_numerator, iv.exact ? 1 : 0);
    out += line;
  }
  return out;
}

std::string suite_document(const SuiteResult& result) {
  json doc;
  doc["command"] = "suite";
  doc["version"] = kVersion;
  doc["seed"] = result.seed;
  doc["size"] = to_string(result.size);
  doc["pass"] = result.pass;
  json arr = json::array();
  for (const CriterionResult& c : result.criteria) {
    json row;
    row["name"] = c.name;
    row["pass"] = c.pass;
    row["checks"] = c.checks;
    row["failures"] = c.failures;
    row["worst_ratio"] = number(c.worst_ratio);
    row["notes"] = c.notes;
    // seconds stay out of the document so equal seeds give equal bytes
    arr.push_back(std::move(row));
  }
  doc["criteria"] = std::move(arr);
  return finish(doc);
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw InputError("failed while writing " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw InputError("cannot move report into place at " + path + ": " + ec.message());
  }
}

}  // namespace betacurv
