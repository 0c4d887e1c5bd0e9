#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace ckn {

inline constexpr const char* kVersion = "0.1.0";

using Cell = std::variant<std::monostate, double, long long, std::string>;

struct Row {
  std::vector<Cell> cells;
  std::string signature;
};

struct Table {
  std::vector<std::string> columns;
  std::vector<Row> rows;

  Row& add_row(std::string signature = {});
  /// Index of a column; throws if missing.
  std::size_t column(const std::string& name) const;
  const Cell& at(std::size_t row, const std::string& name) const;
  double number(std::size_t row, const std::string& name) const;
};

struct ReportMeta {
  std::string command;
  int N = 0;
  double S = 0.0;
  int L = 8;
  int M = 64;
  unsigned long long seed = 0;
  std::vector<std::pair<int, double>> params;  // (n, p)
};

/// Shortest round-trip decimal, independent of locale.
std::string format_number(double x);

void write_csv(std::ostream& os, const Table& t);
void write_json(std::ostream& os, const Table& t, const ReportMeta& meta);

}  // namespace ckn
