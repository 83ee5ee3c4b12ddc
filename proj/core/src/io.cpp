#include "meanwind/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace meanwind::io {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_int(long long v) { return std::to_string(v); }

CsvWriter::CsvWriter(std::vector<std::string> columns) : width_(columns.size()) {
  for (size_t i = 0; i < columns.size(); ++i) {
    if (i) head_ += ',';
    head_ += columns[i];
  }
  head_ += '\n';
}

void CsvWriter::comment(const std::string& line) {
  head_.insert(0, "# " + line + "\n");
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != width_)
    throw std::invalid_argument("CsvWriter: row width mismatch");
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) body_ += ',';
    body_ += cells[i];
  }
  body_ += '\n';
}

std::string CsvWriter::str() const { return head_ + body_; }

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void ensure_directory(const std::string& path) {
  std::filesystem::create_directories(path);
}

}  // namespace meanwind::io
