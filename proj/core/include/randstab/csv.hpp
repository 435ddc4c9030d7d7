#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace randstab::csv {

/// Shortest decimal text that parses back to the same double ("inf", "-inf", "nan" for specials).
[[nodiscard]] std::string format_double(double value);
[[nodiscard]] std::string format_uint(std::uint64_t value);

/// Strict parsers; throw IoError on malformed fields.
[[nodiscard]] double parse_double(std::string_view field);
[[nodiscard]] std::uint64_t parse_uint(std::string_view field);
[[nodiscard]] bool parse_flag(std::string_view field);

/// Splits one line on commas; fields are never quoted in our schemas.
[[nodiscard]] std::vector<std::string_view> split(std::string_view line);

/// Reads all lines (LF or CRLF), dropping a trailing empty line.
[[nodiscard]] std::vector<std::string> read_lines(const std::string& path);

/// Writes `text` verbatim in binary mode so line endings stay LF.
void write_file(const std::string& path, std::string_view text);

}  // namespace randstab::csv
