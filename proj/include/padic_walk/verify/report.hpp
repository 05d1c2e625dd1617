#pragma once

#include <cstdint>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace padic {

using Json = nlohmann::ordered_json;

using Cell = std::variant<std::int64_t, double, bool, std::string>;

inline std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string format_cell(const Cell& c) {
  struct Visitor {
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(const std::string& v) const {
      if (v.find_first_of(",\"\n") == std::string::npos) return v;
      std::string out = "\"";
      for (char ch : v) {
        if (ch == '"') out += '"';
        out += ch;
      }
      return out + "\"";
    }
  };
  return std::visit(Visitor{}, c);
}

inline Json cell_json(const Cell& c) {
  return std::visit([](const auto& v) { return Json(v); }, c);
}

/// A named table of results plus the metadata needed to reproduce it.
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  Json meta = Json::object();

  void add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) {
      throw std::invalid_argument("Table " + name + ": row has " + std::to_string(row.size()) +
                                  " cells, expected " + std::to_string(columns.size()));
    }
    rows.push_back(std::move(row));
  }

  [[nodiscard]] const Cell& at(std::size_t row, const std::string& column) const {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (columns[c] == column) return rows.at(row).at(c);
    }
    throw std::out_of_range("Table " + name + ": no column " + column);
  }

  [[nodiscard]] double number(std::size_t row, const std::string& column) const {
    const Cell& c = at(row, column);
    if (const auto* d = std::get_if<double>(&c)) return *d;
    if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
    throw std::invalid_argument("Table " + name + ": column " + column + " is not numeric");
  }

  /// Metadata as "# key = value" lines, then a header and one line per row.
  void write_csv(std::ostream& out) const {
    out << "# table = " << name << '\n';
    for (const auto& [k, v] : meta.items()) out << "# " << k << " = " << v.dump() << '\n';
    for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c];
    out << '\n';
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_cell(row[c]);
      out << '\n';
    }
  }

  [[nodiscard]] Json to_json() const {
    Json j;
    j["table"] = name;
    j["meta"] = meta;
    j["columns"] = columns;
    Json body = Json::array();
    for (const auto& row : rows) {
      Json r = Json::array();
      for (const auto& c : row) r.push_back(cell_json(c));
      body.push_back(std::move(r));
    }
    j["rows"] = std::move(body);
    return j;
  }
};

/// Outcome of one assertion-style check.
struct CheckResult {
  std::string name;
  bool passed = true;
  std::vector<std::string> failures;
  Table table;

  void fail(std::string why) {
    passed = false;
    failures.push_back(std::move(why));
  }

  [[nodiscard]] Json to_json() const {
    Json j;
    j["check"] = name;
    j["passed"] = passed;
    j["failures"] = failures;
    j["table"] = table.to_json();
    return j;
  }
};

}  // namespace padic
