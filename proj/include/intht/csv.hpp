#pragma once

// Minimal CSV writing/reading for run and sweep outputs.  Values never
// contain commas or quotes, so no escaping is done; doubles are written with
// 17 significant digits so files round-trip exactly.

#include <string>
#include <vector>

namespace intht {

std::string fmt_g17(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int col(const std::string& name) const;  // -1 if absent
};

void write_csv(const std::string& path, const CsvTable& t);
CsvTable read_csv(const std::string& path);

}  // namespace intht
