#ifndef CHTX_NUMBER_FORMAT_HPP
#define CHTX_NUMBER_FORMAT_HPP

#include <string>
#include <string_view>

namespace chtx {

/// Shortest decimal text that parses back to exactly the same double.
/// Non-finite values print as "inf", "-inf" and "nan".
std::string format_number(double value);

/// Strict parse of a full token as a double; throws std::invalid_argument.
double parse_number(std::string_view text);

}  // namespace chtx

#endif
