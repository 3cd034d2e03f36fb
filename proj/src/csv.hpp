#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace hetsim::csv {

struct Row {
  std::size_t line;
  std::vector<std::string> fields;
};

/// Reads a UTF-8 CSV file. Fields may be double-quoted ("" escapes a quote).
/// Blank lines are skipped. The header row, when `expected_header` is given,
/// must match it exactly and is not returned.
std::vector<Row> read(const std::filesystem::path& path,
                      const std::vector<std::string>& expected_header);

/// Quotes a field when it contains a separator or a quote character.
std::string escape(const std::string& field);

void write_row(std::ostream& out, const std::vector<std::string>& fields);

[[noreturn]] void fail(const std::filesystem::path& path, std::size_t line, const std::string& what);

double parse_double(const std::filesystem::path& path, std::size_t line, const std::string& text);
long long parse_int(const std::filesystem::path& path, std::size_t line, const std::string& text);
unsigned long long parse_uint(const std::filesystem::path& path, std::size_t line,
                              const std::string& text);

}  // namespace hetsim::csv
