#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "epigrow/planner.hpp"

namespace epigrow {

/// Formats a double with 17 significant digits (lossless round trip).
std::string format_sig17(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void write(std::ostream& out) const;
  void write_file(const std::string& path) const;
  static CsvTable read(std::istream& in);
  static CsvTable read_file(const std::string& path);

  int column(const std::string& name) const;  ///< -1 when absent
};

/// Fixed column schema shared by steady-state reports and sweeps:
/// regime,b,theta,k,h,s,i,e,l,c,m,A,lambda1..lambda5,nu1..nu4,residual
extern const std::vector<std::string> kSteadyStateHeader;

std::vector<std::string> steady_state_fields(const SteadyStateSolution& sol);

/// Rebuilds a candidate (plus its b, theta) from a steady-state row.
struct ParsedSteadyState {
  Candidate candidate;
  Regime regime;
  double b;
  double theta;
  double residual;
};
ParsedSteadyState parse_steady_state_row(const CsvTable& table, std::size_t row_index);

}  // namespace epigrow
