#ifndef QDECONV_FORMAT_H
#define QDECONV_FORMAT_H

#include <optional>
#include <string>
#include <string_view>

namespace qdeconv {

/// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);

/// Strict full-token parse; nullopt on any trailing garbage.
std::optional<double> parse_double(std::string_view token);

}  // namespace qdeconv

#endif
