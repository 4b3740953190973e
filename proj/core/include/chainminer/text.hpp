#pragma once

#include <string>

namespace chainminer {

// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

std::string to_lower(const std::string& s);

}  // namespace chainminer
