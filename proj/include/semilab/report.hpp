#pragma once

// Run reports: named tables of cells plus pass/fail flags, serialized as
// RFC 4180 CSV or a single JSON object. Output is byte-stable: numbers use
// shortest round-trip formatting and wall time is never serialized.

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "semilab/errors.hpp"

namespace semilab {

using Cell = std::variant<std::int64_t, double, std::string>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) {
    if (row.size() != columns.size())
      throw Error("table '" + name + "' row has " + std::to_string(row.size()) + " cells, expected " +
                  std::to_string(columns.size()));
    rows.push_back(std::move(row));
  }
  bool operator==(const Table&) const = default;
};

struct Flag {
  std::string name;
  bool passed = false;
  std::string detail;
  bool operator==(const Flag&) const = default;
};

struct RunReport {
  std::string scenario;
  std::uint64_t seed = 0;
  nlohmann::ordered_json config;
  std::vector<Table> tables;
  std::vector<Flag> flags;
  double wall_time_seconds = 0.0;

  bool all_passed() const {
    for (const auto& f : flags)
      if (!f.passed) return false;
    return true;
  }
  const Table& table(const std::string& name) const {
    for (const auto& t : tables)
      if (t.name == name) return t;
    throw Error("report has no table '" + name + "'");
  }
  const Flag& flag(const std::string& name) const {
    for (const auto& f : flags)
      if (f.name == name) return f;
    throw Error("report has no flag '" + name + "'");
  }
};

/// Equality of everything that is serialized (wall time excluded).
inline bool structurally_equal(const RunReport& a, const RunReport& b) {
  return a.scenario == b.scenario && a.seed == b.seed && a.config == b.config && a.tables == b.tables &&
         a.flags == b.flags;
}

inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string format_cell(const Cell& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  return std::get<std::string>(c);
}

// --- CSV -------------------------------------------------------------------

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

/// Header row then data rows, CRLF line endings.
inline std::string to_csv(const Table& t) {
  std::string out;
  auto line = [&](const auto& cells, auto fmt) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += csv_field(fmt(cells[i]));
    }
    out += "\r\n";
  };
  line(t.columns, [](const std::string& s) { return s; });
  for (const auto& row : t.rows) line(row, format_cell);
  return out;
}

inline Table flags_table(const RunReport& r) {
  Table t{"flags", {"scenario", "flag", "passed", "detail"}, {}};
  for (const auto& f : r.flags) t.add({r.scenario, f.name, std::string(f.passed ? "true" : "false"), f.detail});
  return t;
}

// --- JSON ------------------------------------------------------------------

inline nlohmann::ordered_json cell_to_json(const Cell& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
  if (const auto* d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) return format_number(*d);
    return *d;
  }
  return std::get<std::string>(c);
}

inline Cell cell_from_json(const nlohmann::ordered_json& j) {
  if (j.is_number_float()) return j.get<double>();
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "nan") return std::nan("");
    if (s == "inf") return HUGE_VAL;
    if (s == "-inf") return -HUGE_VAL;
    return s;
  }
  throw Error("unsupported JSON cell type");
}

inline nlohmann::ordered_json to_json(const RunReport& r) {
  nlohmann::ordered_json j;
  j["scenario"] = r.scenario;
  j["seed"] = r.seed;
  j["config"] = r.config;
  auto flags = nlohmann::ordered_json::array();
  for (const auto& f : r.flags) flags.push_back({{"name", f.name}, {"passed", f.passed}, {"detail", f.detail}});
  j["flags"] = flags;
  auto tables = nlohmann::ordered_json::array();
  for (const auto& t : r.tables) {
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
      auto jr = nlohmann::ordered_json::array();
      for (const auto& c : row) jr.push_back(cell_to_json(c));
      rows.push_back(jr);
    }
    tables.push_back({{"name", t.name}, {"columns", t.columns}, {"rows", rows}});
  }
  j["tables"] = tables;
  return j;
}

inline RunReport report_from_json(const nlohmann::ordered_json& j) {
  RunReport r;
  r.scenario = j.at("scenario").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.config = j.at("config");
  for (const auto& f : j.at("flags"))
    r.flags.push_back({f.at("name").get<std::string>(), f.at("passed").get<bool>(), f.at("detail").get<std::string>()});
  for (const auto& jt : j.at("tables")) {
    Table t{jt.at("name").get<std::string>(), jt.at("columns").get<std::vector<std::string>>(), {}};
    for (const auto& jr : jt.at("rows")) {
      std::vector<Cell> row;
      for (const auto& c : jr) row.push_back(cell_from_json(c));
      t.add(std::move(row));
    }
    r.tables.push_back(std::move(t));
  }
  return r;
}

inline std::string emit_json(const RunReport& r) { return to_json(r).dump(2) + "\n"; }

/// All tables, then the flags table, separated by blank lines.
inline std::string emit_csv(const RunReport& r) {
  std::string out;
  for (const auto& t : r.tables) out += to_csv(t) + "\r\n";
  return out + to_csv(flags_table(r));
}

enum class OutputFormat { csv, json };

inline OutputFormat parse_format(const std::string& s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  throw ConfigError("format", "must be \"csv\" or \"json\", got \"" + s + "\"");
}

namespace detail {
inline void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot open '" + path.string() + "' for writing");
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  f.flush();
  if (!f) throw Error("failed writing '" + path.string() + "'");
}
}  // namespace detail

/// Writes the report. JSON goes to `destination` as one file. CSV writes
/// `<stem>.<table>.csv` beside `destination` for each table and for the flags.
/// Returns the paths written.
inline std::vector<std::filesystem::path> emit(const RunReport& r, OutputFormat format,
                                               const std::filesystem::path& destination) {
  if (format == OutputFormat::json) {
    detail::write_file(destination, emit_json(r));
    return {destination};
  }
  std::vector<std::filesystem::path> written;
  const auto dir = destination.parent_path();
  const auto stem = destination.stem().string();
  auto put = [&](const Table& t) {
    const auto p = dir / (stem + "." + t.name + ".csv");
    detail::write_file(p, to_csv(t));
    written.push_back(p);
  };
  for (const auto& t : r.tables) put(t);
  put(flags_table(r));
  return written;
}

inline void emit(const RunReport& r, OutputFormat format, std::ostream& os) {
  os << (format == OutputFormat::json ? emit_json(r) : emit_csv(r));
}

}  // namespace semilab
