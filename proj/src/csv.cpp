#include "csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "hetsim/io.hpp"

namespace hetsim::csv {

namespace {

std::vector<std::string> split(const std::string& line, const std::filesystem::path& path,
                               std::size_t line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(ch);
      }
    } else if (ch == '"') {
      if (!cur.empty() || was_quoted) fail(path, line_no, "stray quote inside a field");
      quoted = true;
      was_quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
      was_quoted = false;
    } else {
      if (was_quoted) fail(path, line_no, "text after a closing quote");
      cur.push_back(ch);
    }
  }
  if (quoted) fail(path, line_no, "unterminated quoted field");
  fields.push_back(std::move(cur));
  return fields;
}

}  // namespace

void fail(const std::filesystem::path& path, std::size_t line, const std::string& what) {
  throw FormatError(path.string() + ":" + std::to_string(line) + ": " + what);
}

std::vector<Row> read(const std::filesystem::path& path,
                      const std::vector<std::string>& expected_header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::vector<Row> rows;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = expected_header.empty();
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (line.empty()) continue;
    auto fields = split(line, path, line_no);
    if (!header_seen) {
      if (fields != expected_header) {
        std::string want;
        for (std::size_t i = 0; i < expected_header.size(); ++i) {
          want += (i ? "," : "") + expected_header[i];
        }
        fail(path, line_no, "expected header '" + want + "'");
      }
      header_seen = true;
      continue;
    }
    if (!expected_header.empty() && fields.size() != expected_header.size()) {
      fail(path, line_no, "expected " + std::to_string(expected_header.size()) +
                              " fields, found " + std::to_string(fields.size()));
    }
    rows.push_back({line_no, std::move(fields)});
  }
  if (!header_seen) fail(path, 1, "missing header");
  return rows;
}

std::string escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << escape(fields[i]);
  }
  out << '\n';
}

double parse_double(const std::filesystem::path& path, std::size_t line, const std::string& text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) fail(path, line, "not a number: '" + text + "'");
  return v;
}

long long parse_int(const std::filesystem::path& path, std::size_t line, const std::string& text) {
  long long v = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) fail(path, line, "not an integer: '" + text + "'");
  return v;
}

unsigned long long parse_uint(const std::filesystem::path& path, std::size_t line,
                              const std::string& text) {
  unsigned long long v = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) fail(path, line, "not an unsigned integer: '" + text + "'");
  return v;
}

}  // namespace hetsim::csv
