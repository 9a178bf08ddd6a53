#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace classifly::io {

/// Splits one CSV line on commas. No quoting support: none of the formats
/// handled here quote fields, except the registry which goes through
/// split_csv_quoted.
std::vector<std::string_view> split_csv(std::string_view line);

/// RFC-4180 style split (double quotes, "" escapes) for free-text files.
std::vector<std::string> split_csv_quoted(std::string_view line);

/// Strips a trailing '\r' and surrounding blanks.
std::string_view trim(std::string_view text) noexcept;

std::optional<double> parse_double(std::string_view text) noexcept;
std::optional<long long> parse_int(std::string_view text) noexcept;

/// Shortest representation that round-trips through parse_double.
std::string format_double(double value);

/// Writes through `body` into a temporary sibling file and renames it over
/// `path` only after the body returned and the stream flushed cleanly. On any
/// failure the temporary is removed and `path` is left untouched.
void atomic_write(const std::filesystem::path& path,
                  const std::function<void(std::ostream&)>& body);

/// Opens `path` for reading or throws Error(Io).
std::ifstream open_input(const std::filesystem::path& path);

}  // namespace classifly::io
