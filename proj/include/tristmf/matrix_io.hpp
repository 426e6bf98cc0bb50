#pragma once

#include <iosfwd>
#include <string>

#include "tristmf/matrix.hpp"

// Matrix CSV: one comma-separated row per line, no header.  An empty field
// or NaN is a missing entry, "-inf" is the tropical zero.  Finite values are
// written with the shortest decimal that parses back to the same double.

namespace tristmf {

MaskedMatrix read_matrix_csv(std::istream& in);
MaskedMatrix read_matrix_csv_file(const std::string& path);

void write_matrix_csv(std::ostream& out, const MaskedMatrix& m);
void write_matrix_csv_file(const std::string& path, const MaskedMatrix& m);

/// Shortest round-trip decimal for one value (exposed for the JSON writer).
std::string format_double(double v);

}  // namespace tristmf
