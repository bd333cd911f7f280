#pragma once

// Flat-file emission helpers shared by the CLI: CSV with '.' decimal point
// and 17 significant digits, one '#' header line echoing the full run
// configuration and the library version. Output is byte-identical for a
// fixed configuration regardless of thread count.

#include <cstdio>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "fraclab/version.hpp"

namespace fraclab {

inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

inline std::string config_header(const std::string& subcommand, const ConfigEcho& cfg) {
  std::string line = "# fraclab " + std::string(version_string) + " | " + subcommand;
  for (const auto& [k, v] : cfg) line += " | " + k + "=" + v;
  return line;
}

class CsvWriter {
 public:
  CsvWriter(std::ostream& os, const std::string& subcommand, const ConfigEcho& cfg,
            const std::vector<std::string>& columns)
      : os_(os) {
    os_ << config_header(subcommand, cfg) << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i)
      os_ << columns[i] << (i + 1 < columns.size() ? "," : "");
    os_ << "\n";
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i)
      os_ << cells[i] << (i + 1 < cells.size() ? "," : "");
    os_ << "\n";
  }

 private:
  std::ostream& os_;
};

}  // namespace fraclab
