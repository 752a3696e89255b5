#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace reservekit {

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

/// Parses a whole token as a double; nullopt on trailing garbage or empty input.
std::optional<double> parse_double(std::string_view token);

std::string_view trim(std::string_view s) noexcept;

std::vector<std::string_view> split(std::string_view s, char sep);

}  // namespace reservekit
