#pragma once

#include <filesystem>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace imop::csv {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct Row {
  std::size_t line = 0;  // 1-based line in the source file
  std::vector<double> values;
};

/// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double value);

/// Strict decimal parse (optional sign, fraction, exponent); throws on junk.
double parse_double(std::string_view text);

/// Numeric rows of a comma-separated file; blank lines and '#' lines skipped.
std::vector<Row> read_numeric(const std::filesystem::path& path);

/// Same, with a fixed expected column count.
std::vector<Row> read_numeric(const std::filesystem::path& path, std::size_t columns);

void write_row(std::ostream& out, const std::vector<double>& values);

}  // namespace imop::csv
