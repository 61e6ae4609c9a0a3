#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace orgaze::text {

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);
/// Fixed-point with `decimals` digits after the point.
std::string format_fixed(double value, int decimals);

/// Strict whole-field parse; rejects trailing garbage and non-finite values.
std::optional<double> parse_double(std::string_view field);
std::optional<std::uint64_t> parse_uint(std::string_view field);

bool is_valid_utf8(std::string_view bytes);

/// Splits one RFC 4180 record. Returns nullopt on an unterminated quote.
std::optional<std::vector<std::string>> split_csv_record(std::string_view line);
/// Quotes a field when it contains a comma, quote or line break.
std::string csv_escape(std::string_view field);

std::string_view trim(std::string_view s);
/// Removes a trailing carriage return (CRLF input).
std::string_view chomp(std::string_view line);

}  // namespace orgaze::text
