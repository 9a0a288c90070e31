#pragma once

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fowt {

// Fixed formatting so identical runs produce byte-identical files and values
// round-trip exactly.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot open for writing: " + path);
    path_ = path;
  }

  // Metadata lines start with '#' and precede the header.
  void comment(const std::string& text) { out_ << "# " << text << "\n"; }

  void header(const std::vector<std::string>& columns) {
    write_row_strings(columns);
  }

  void row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i > 0) out_ << ',';
      out_ << format_double(values[i]);
    }
    out_ << '\n';
  }

  void write_row_strings(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

  void close() {
    out_.close();
    if (!out_) throw std::runtime_error("write failed: " + path_);
  }

 private:
  std::ofstream out_;
  std::string path_;
};

struct CsvTable {
  std::vector<std::string> comments;  // '#' lines without the marker
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;  // raw cells

  std::size_t column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (columns[i] == name) return i;
    }
    throw std::runtime_error("csv column not found: " + name);
  }

  // Numeric view of one column; only numeric columns may be read this way.
  std::vector<double> column(const std::string& name) const {
    const std::size_t idx = column_index(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) {
      try {
        out.push_back(std::stod(r.at(idx)));
      } catch (const std::exception&) {
        throw std::runtime_error("csv column " + name + ": not a number: '" +
                                 r.at(idx) + "'");
      }
    }
    return out;
  }
};

inline CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  CsvTable table;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string c = line.substr(1);
      if (!c.empty() && c[0] == ' ') c.erase(0, 1);
      table.comments.push_back(c);
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!have_header) {
      table.columns = cells;
      have_header = true;
      continue;
    }
    if (cells.size() != table.columns.size()) {
      throw std::runtime_error("csv row width mismatch in " + path);
    }
    table.rows.push_back(std::move(cells));
  }
  if (!have_header) throw std::runtime_error("csv file has no header: " + path);
  return table;
}

}  // namespace fowt
