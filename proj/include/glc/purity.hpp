#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "glc/dataset.hpp"

namespace glc {

/// A closed interval on one coordinate together with the class mix of the
/// cases whose value falls inside it.
struct PurityRegion {
  std::size_t coordinate = 0;
  double lo = 0.0;
  double hi = 0.0;
  std::string dominant_class;
  double purity = 0.0;  // dominant count / support
  std::size_t support = 0;
  std::vector<CaseId> case_ids;

  bool pure() const noexcept { return purity == 1.0; }
  bool contains(double value) const noexcept { return value >= lo && value <= hi; }
};

struct PurityReport {
  std::uint64_t dataset_fingerprint = 0;
  std::size_t min_support = 1;
  /// Descending purity, then support; ties by coordinate then lo.
  std::vector<PurityRegion> regions;
  /// Cases covered by no purity-1 region of support >= min_support. Sorted.
  std::vector<CaseId> lp_case_ids;
};

/// Maximal runs of consecutive observed values sharing one label. A value
/// observed with more than one label ends the run and belongs to none.
std::vector<PurityRegion> find_pure_intervals(const NormalizedDataset& dataset, std::size_t coordinate);

/// Partitions every coordinate into pure runs and mixed values, folds
/// segments smaller than `min_support` into a neighbour, and ranks the
/// result.
PurityReport rank_regions_by_purity(const NormalizedDataset& dataset, std::size_t min_support = 1);

enum class VisibilityMode { hide_pure, show_all };

/// Ids of the cases that stay visible. Throws ConflictError when the report
/// was computed from another dataset version.
std::vector<CaseId> apply_visibility(const NormalizedDataset& dataset, const PurityReport& report,
                                     VisibilityMode mode);

/// The least-pure cases as a dataset of their own. Throws ValidationError
/// when nothing overlaps.
NormalizedDataset extract_overlap(const NormalizedDataset& dataset, const PurityReport& report);

/// coordinate,lo,hi,class,purity,support
std::string purity_report_csv(const PurityReport& report);

}  // namespace glc
