#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace idearel {

// Shortest decimal form that reads back to the same double.
std::string format_double(double value);

// Quotes a CSV field when it contains a comma, quote, or line break.
std::string csv_field(std::string_view field);

// Splits one CSV record, honouring double-quoted fields.
std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace idearel
