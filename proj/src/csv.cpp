#include "efish/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace efish {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& file, const std::string& comment)
    : os_(file) {
  if (!os_) throw std::runtime_error("cannot open " + file.string());
  if (!comment.empty()) os_ << "# " << comment << "\n";
}

CsvWriter& CsvWriter::cell(double v) { return cell(format_double(v)); }

CsvWriter& CsvWriter::cell(int v) { return cell(std::to_string(v)); }

CsvWriter& CsvWriter::cell(const std::string& v) {
  if (line_started_) os_ << ",";
  os_ << v;
  line_started_ = true;
  return *this;
}

void CsvWriter::end_row() {
  os_ << "\n";
  line_started_ = false;
}

}  // namespace efish
