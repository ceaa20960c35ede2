#include "betacurv/csv.hpp"

#include <cassert>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <vector>

#include "betacurv/errors.hpp"

namespace betacurv {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string::size_type start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(trim(line.substr(start)));
      return fields;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

[[noreturn]] void fail(int line_number, const std::string& message) {
  throw InputError("csv line " + std::to_string(line_number) + ": " + message);
}

double parse_value(const std::string& field, int line_number) {
  if (field.empty()) fail(line_number, "empty field");
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const auto result = std::from_chars(first, last, value);
  if (result.ec != std::errc{} || result.ptr != last) {
    fail(line_number, "cannot parse number '" + field + "'");
  }
  if (!std::isfinite(value)) fail(line_number, "non-finite value '" + field + "'");
  return value;
}

}  // namespace

PointCloudMeasure load_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("csv line 1: missing header");

  const auto header = split_fields(line);
  bool has_weight = !header.empty() && header.back() == "w";
  const int dim = static_cast<int>(header.size()) - (has_weight ? 1 : 0);
  if (dim < 1) fail(1, "header must list coordinate columns x0..x{n-1}");
  for (int i = 0; i < dim; ++i) {
    const std::string expected = "x" + std::to_string(i);
    if (header[static_cast<std::size_t>(i)] != expected) {
      fail(1, "expected column '" + expected + "', found '" +
                  header[static_cast<std::size_t>(i)] + "'");
    }
  }

  std::vector<double> coords;
  std::vector<double> weights;
  int line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (static_cast<int>(fields.size()) != static_cast<int>(header.size())) {
      fail(line_number, "expected " + std::to_string(header.size()) + " fields, found " +
                            std::to_string(fields.size()));
    }
    for (int i = 0; i < dim; ++i) {
      coords.push_back(parse_value(fields[static_cast<std::size_t>(i)], line_number));
    }
    if (has_weight) {
      const double w = parse_value(fields.back(), line_number);
      if (w < 0.0) fail(line_number, "negative weight");
      weights.push_back(w);
    } else {
      weights.push_back(1.0);
    }
  }

  const int count = static_cast<int>(weights.size());
  Eigen::MatrixXd positions(dim, count);
  for (int j = 0; j < count; ++j) {
    for (int i = 0; i < dim; ++i) {
      positions(i, j) = coords[static_cast<std::size_t>(j) * dim + i];
    }
  }
  Eigen::VectorXd wts = Eigen::Map<Eigen::VectorXd>(weights.data(), count);
  return PointCloudMeasure(std::move(positions), std::move(wts));
}

PointCloudMeasure load_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open input file '" + path + "'");
  return load_csv(in);
}

std::string to_csv(const PointCloudMeasure& mu) {
  std::ostringstream out;
  out.precision(17);
  for (int i = 0; i < mu.ambient_dim(); ++i) out << "x" << i << ",";
  out << "w\n";
  for (int j = 0; j < mu.atom_count(); ++j) {
    for (int i = 0; i < mu.ambient_dim(); ++i) out << mu.positions()(i, j) << ",";
    out << mu.weight(j) << "\n";
  }
  return out.str();
}

}  // namespace betacurv
