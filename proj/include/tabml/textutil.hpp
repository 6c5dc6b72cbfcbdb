#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace tabml {

// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

// Full-token parse; nullopt on empty input, trailing garbage, or no digits.
// Accepts whatever std::from_chars accepts (scientific notation included).
std::optional<double> parse_double(std::string_view s);

// A token can be written bare if it consists of [A-Za-z0-9_.+-] only and is
// neither empty nor the missing marker "?".
bool needs_quoting(std::string_view token);

// Single-quoted with \' \" \\ escaped.
std::string quoted(std::string_view token);

// `quoted(token)` when needs_quoting, else the token unchanged.
std::string quote_token(std::string_view token);

}  // namespace tabml
