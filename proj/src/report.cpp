#include "ckn/report.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace ckn {

Row& Table::add_row(std::string signature) {
  rows.push_back({std::vector<Cell>(columns.size()), std::move(signature)});
  return rows.back();
}

std::size_t Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw std::out_of_range("no column " + name);
}

const Cell& Table::at(std::size_t row, const std::string& name) const {
  return rows.at(row).cells.at(column(name));
}

double Table::number(std::size_t row, const std::string& name) const {
  const Cell& c = at(row, name);
  if (auto d = std::get_if<double>(&c)) return *d;
  if (auto i = std::get_if<long long>(&c)) return static_cast<double>(*i);
  return std::nan("");
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string cell_text(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) return "";
        else if constexpr (std::is_same_v<T, double>) return format_number(v);
        else if constexpr (std::is_same_v<T, long long>) return std::to_string(v);
        else return csv_escape(v);
      },
      c);
}

nlohmann::json cell_json(const Cell& c) {
  return std::visit(
      [](const auto& v) -> nlohmann::json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) return nullptr;
        else if constexpr (std::is_same_v<T, double>) {
          if (std::isfinite(v)) return v;
          return format_number(v);
        } else return v;
      },
      c);
}

}  // namespace

void write_csv(std::ostream& os, const Table& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_escape(t.columns[i]);
  os << '\n';
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.cells.size(); ++i) os << (i ? "," : "") << cell_text(r.cells[i]);
    os << '\n';
  }
}

void write_json(std::ostream& os, const Table& t, const ReportMeta& meta) {
  nlohmann::json j;
  j["meta"]["version"] = kVersion;
  j["meta"]["command"] = meta.command;
  j["meta"]["seed"] = meta.seed;
  j["meta"]["grid"] = {{"N", meta.N}, {"S", meta.S}, {"L", meta.L}, {"M", meta.M}, {"fd_order", 8}};
  j["meta"]["params"] = nlohmann::json::array();
  for (auto [n, p] : meta.params) j["meta"]["params"].push_back({{"n", n}, {"p", p}});
  j["rows"] = nlohmann::json::array();
  for (const auto& r : t.rows) {
    nlohmann::json row = nlohmann::json::object();
    for (std::size_t i = 0; i < t.columns.size(); ++i) row[t.columns[i]] = cell_json(r.cells[i]);
    row["signature"] = r.signature;
    j["rows"].push_back(std::move(row));
  }
  os << j.dump(2) << '\n';
}

}  // namespace ckn
