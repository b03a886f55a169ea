#include "bsched/csv.hpp"

#include <cstdio>
#include <sstream>

#include "bsched/error.hpp"

namespace bsched {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string> header)
    : out_(path) {
  if (!out_) {
    throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  }
  for (const auto& h : header) *this << h;
  end_row();
}

CsvWriter& CsvWriter::operator<<(const std::string& v) {
  if (!first_) out_ << ',';
  out_ << v;
  first_ = false;
  return *this;
}

CsvWriter& CsvWriter::operator<<(double v) { return *this << format_double(v); }

CsvWriter& CsvWriter::operator<<(long long v) { return *this << std::to_string(v); }

void CsvWriter::end_row() {
  out_ << '\n';
  first_ = true;
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj,
                          const std::string& name) {
  CsvWriter w(path, {"t", name});
  for (std::size_t k = 0; k < traj.grid.size(); ++k) {
    w << traj.grid.t(k) << traj[k];
    w.end_row();
  }
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw Error(ErrorKind::Io, "no column named " + name);
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  CsvTable table;
  std::string line;
  if (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) table.header.push_back(cell);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace bsched
