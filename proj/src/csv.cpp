#include "imop/csv.hpp"

#include <array>
#include <charconv>
#include <fstream>

namespace imop::csv {

std::string format_double(double value) {
  std::array<char, 32> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf.data(), end);
}

namespace {

std::string_view trim(std::string_view s) {
  const auto not_space = [](char c) { return c != ' ' && c != '\t' && c != '\r'; };
  while (!s.empty() && !not_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && !not_space(s.back())) s.remove_suffix(1);
  return s;
}

}  // namespace

double parse_double(std::string_view text) {
  std::string_view s = trim(text);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) throw std::invalid_argument("empty numeric field");
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::invalid_argument("not a number: '" + std::string(s) + "'");
  }
  return value;
}

std::vector<Row> read_numeric(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<Row> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view content = trim(line);
    if (content.empty() || content.front() == '#') continue;
    Row row{lineno, {}};
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = content.find(',', start);
      const std::string_view field =
          content.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
      try {
        row.values.push_back(parse_double(field));
      } catch (const std::invalid_argument& e) {
        throw ParseError(lineno, e.what());
      }
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<Row> read_numeric(const std::filesystem::path& path, std::size_t columns) {
  std::vector<Row> rows = read_numeric(path);
  for (const Row& r : rows) {
    if (r.values.size() != columns) {
      throw ParseError(r.line, "expected " + std::to_string(columns) + " columns, found " +
                                   std::to_string(r.values.size()));
    }
  }
  return rows;
}

void write_row(std::ostream& out, const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out << ',';
    out << format_double(values[i]);
  }
  out << '\n';
}

}  // namespace imop::csv
