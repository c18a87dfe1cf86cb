#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "bistoch/types.hpp"

namespace bistoch::csv {

// 17 significant digits, round-trip exact for binary64.
std::string format(double value);

std::vector<std::string> split(std::string_view line, char sep = ',');

double parse_double(const std::string& field);

// Dense matrix, row-major, header row c1..cn.
void write_matrix(std::ostream& out, const Matrix& m);

// Reads a dense matrix; a first row with any non-numeric field is a header.
Matrix read_matrix(std::istream& in);

}  // namespace bistoch::csv
