#include "epigrow/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "epigrow/errors.hpp"

namespace epigrow {

std::string format_sig17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void CsvTable::write(std::ostream& out) const {
  for (std::size_t c = 0; c < header.size(); ++c) {
    out << header[c] << (c + 1 < header.size() ? "," : "");
  }
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out << row[c] << (c + 1 < row.size() ? "," : "");
    }
    out << "\n";
  }
}

void CsvTable::write_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write CSV file: " + path);
  write(out);
}

CsvTable CsvTable::read(std::istream& in) {
  CsvTable t;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    if (first) {
      t.header = std::move(fields);
      first = false;
    } else {
      t.rows.push_back(std::move(fields));
    }
  }
  return t;
}

CsvTable CsvTable::read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read CSV file: " + path);
  return read(in);
}

int CsvTable::column(const std::string& name) const {
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == name) return static_cast<int>(c);
  }
  return -1;
}

const std::vector<std::string> kSteadyStateHeader = {
    "regime",  "b",       "theta",   "k",       "h",       "s",   "i",   "e",
    "l",       "c",       "m",       "A",       "lambda1", "lambda2", "lambda3",
    "lambda4", "lambda5", "nu1",     "nu2",     "nu3",     "nu4", "residual"};

std::vector<std::string> steady_state_fields(const SteadyStateSolution& sol) {
  return {
      to_string(sol.regime),
      format_sig17(sol.b),
      format_sig17(sol.theta),
      format_sig17(sol.state.k),
      format_sig17(sol.state.h),
      format_sig17(sol.state.s),
      format_sig17(sol.state.i),
      format_sig17(sol.state.e),
      format_sig17(sol.state.labor()),
      format_sig17(sol.controls.c),
      format_sig17(sol.controls.m),
      format_sig17(sol.controls.A),
      format_sig17(sol.costates.lambda1),
      format_sig17(sol.costates.lambda2),
      format_sig17(sol.costates.lambda3),
      format_sig17(sol.costates.lambda4),
      format_sig17(sol.costates.lambda5),
      format_sig17(sol.multipliers.nu1),
      format_sig17(sol.multipliers.nu2),
      format_sig17(sol.multipliers.nu3),
      format_sig17(sol.multipliers.nu4),
      format_sig17(sol.residual_norm),
  };
}

ParsedSteadyState parse_steady_state_row(const CsvTable& table, std::size_t row_index) {
  if (row_index >= table.rows.size()) throw ConfigError("CSV row index out of range");
  const auto& row = table.rows[row_index];
  auto col = [&](const std::string& name) {
    const int c = table.column(name);
    if (c < 0 || static_cast<std::size_t>(c) >= row.size()) {
      throw ConfigError("CSV is missing column: " + name);
    }
    return row[static_cast<std::size_t>(c)];
  };
  auto num = [&](const std::string& name) {
    const std::string v = col(name);
    try {
      return std::stod(v);
    } catch (const std::exception&) {
      throw ConfigError("CSV column " + name + ": not a number: '" + v + "'");
    }
  };

  ParsedSteadyState out;
  out.regime = regime_from_string(col("regime"));
  out.b = num("b");
  out.theta = num("theta");
  out.residual = num("residual");
  out.candidate.state = {num("k"), num("h"), num("s"), num("i"), num("e")};
  out.candidate.controls = {num("c"), num("m"), num("A")};
  out.candidate.costates = {num("lambda1"), num("lambda2"), num("lambda3"), num("lambda4"),
                            num("lambda5")};
  out.candidate.multipliers = {num("nu1"), num("nu2"), num("nu3"), num("nu4")};
  return out;
}

}  // namespace epigrow
