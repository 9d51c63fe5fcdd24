#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Small text helpers shared by the config, genome and CSV writers.
namespace tneat::text {

/// Shortest representation that parses back to the identical double
/// (including "-0", "inf", "-inf").
std::string format_double(double value);

/// Strict parse of a whole token; accepts "inf"/"-inf"/"nan".
std::optional<double> parse_double(std::string_view token);

std::string_view trim(std::string_view s);
std::vector<std::string_view> split_lines(std::string_view text);
std::vector<std::string_view> split_ws(std::string_view line);

}  // namespace tneat::text
