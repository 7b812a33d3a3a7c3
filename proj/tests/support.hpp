#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "glc/dataset.hpp"

namespace glc::test {

inline std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(GLC_DATA_DIR) / name;
}

inline const NormalizedDataset& iris() {
  static const NormalizedDataset dataset = normalize_dataset(load_dataset(data_path("iris.csv")));
  return dataset;
}

/// Dataset built directly from normalized rows; ids 0..n-1.
inline NormalizedDataset fixture(const std::vector<std::vector<double>>& rows,
                                 const std::vector<std::string>& labels) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < rows.front().size(); ++i) names.push_back("x" + std::to_string(i + 1));
  AttributeStats stats;
  stats.min.assign(names.size(), 0.0);
  stats.max.assign(names.size(), 1.0);
  stats.degenerate.assign(names.size(), false);
  std::vector<CaseRecord> cases;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    cases.push_back(CaseRecord{CaseId{i}, rows[i], labels[i], Provenance::real});
  }
  return NormalizedDataset(names, stats, cases, {}, rows.size());
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("glc_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace glc::test
