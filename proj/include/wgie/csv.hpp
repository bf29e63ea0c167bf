#pragma once

#include <string>
#include <string_view>

namespace wgie {

/// %.10g, with "nan", "inf" and "-inf" spelled out.
std::string format_number(double x);

/// Quotes a field when it contains a comma, quote or line break.
std::string csv_field(std::string_view s);

}  // namespace wgie
