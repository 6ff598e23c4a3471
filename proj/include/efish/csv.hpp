#pragma once

#include <filesystem>
#include <fstream>
#include <string>

namespace efish {

/// Deterministic CSV output: doubles are written with 17 significant digits
/// so repeated runs are byte-identical.
class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& file,
                     const std::string& comment = "");

  CsvWriter& cell(double v);
  CsvWriter& cell(int v);
  CsvWriter& cell(const std::string& v);
  void end_row();

 private:
  std::ofstream os_;
  bool line_started_ = false;
};

std::string format_double(double v);

}  // namespace efish
