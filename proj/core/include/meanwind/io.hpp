#pragma once

#include <string>
#include <vector>

namespace meanwind::io {

// Fixed "%.17g" rendering; CSV bodies must be byte-identical across runs.
std::string fmt(double v);
std::string fmt_int(long long v);

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> columns);
  void comment(const std::string& line);  // "# ..." before the header
  void row(const std::vector<std::string>& cells);
  std::string str() const;

 private:
  size_t width_;
  std::string head_, body_;
};

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);
void ensure_directory(const std::string& path);

}  // namespace meanwind::io
