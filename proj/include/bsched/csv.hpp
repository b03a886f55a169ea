#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

#include "bsched/ode.hpp"

namespace bsched {

/// Comma-separated writer: header row, '.' decimal point, 17 significant digits.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string> header);

  CsvWriter& operator<<(double v);
  CsvWriter& operator<<(long long v);
  CsvWriter& operator<<(const std::string& v);
  void end_row();

 private:
  std::ofstream out_;
  bool first_ = true;
};

std::string format_double(double v);

/// Two columns: t, <name>.
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj,
                          const std::string& name = "value");

/// Parses a CSV written by CsvWriter into a header and numeric rows.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const;
};
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace bsched
