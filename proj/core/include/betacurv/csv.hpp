#pragma once

#include <iosfwd>
#include <string>

#include "betacurv/measure.hpp"

namespace betacurv {

// Reads an atom list. Header must be "x0,...,x{n-1}" optionally followed by
// ",w"; the ambient dimension is inferred from it. Without a weight column
// every atom gets weight 1. Malformed rows raise InputError with the
// offending 1-based line number (the header is line 1).
PointCloudMeasure load_csv(std::istream& in);
PointCloudMeasure load_csv_file(const std::string& path);

// Inverse of load_csv; always writes the weight column.
std::string to_csv(const PointCloudMeasure& mu);

}  // namespace betacurv
