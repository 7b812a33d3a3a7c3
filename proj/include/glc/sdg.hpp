#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "glc/dataset.hpp"
#include "glc/purity.hpp"

namespace glc {

// Generation strategies. Every generator is a pure function of
// (dataset, parameters, seed).

/// One synthetic copy of `source` with one coordinate moved by `delta`.
struct SingleShift {
  CaseId source;
  std::size_t coordinate = 0;
  double delta = 0.0;
};

/// One synthetic copy of every real case, moved by `delta` per attribute.
struct DuplicateShift {
  std::vector<double> delta;
};

enum class InBoundsMode { uniform, proportional };

/// `count` cases inside the per-attribute bounds of `target_class`.
struct InBounds {
  std::string target_class;
  std::size_t count = 1;
  InBoundsMode mode = InBoundsMode::uniform;
};

/// `count` cases of `target_class` whose `coordinate` lies in
/// [offset_lo, offset_hi], an interval outside the class bounds.
struct OutOfBounds {
  std::string target_class;
  std::size_t coordinate = 0;
  double offset_lo = 0.0;
  double offset_hi = 0.0;
  std::size_t count = 1;
};

/// `count` cases uniform over the unit cube with uniformly drawn labels.
struct Unbounded {
  std::size_t count = 1;
};

using SdgStrategy = std::variant<SingleShift, DuplicateShift, InBounds, OutOfBounds, Unbounded>;

/// single_shift, duplicate_shift, in_bounds_uniform, in_bounds_proportional,
/// out_of_bounds, unbounded
std::string strategy_name(const SdgStrategy& strategy);

struct SdgBatch {
  std::vector<CaseRecord> cases;  // provenance synthetic, ids from dataset.next_id()
  SdgStrategy strategy;
  std::uint64_t seed = 0;
};

SdgBatch generate_single_shift(const NormalizedDataset& dataset, CaseId source, std::size_t coordinate,
                               double delta, std::uint64_t seed);
SdgBatch generate_duplicate_shift(const NormalizedDataset& dataset, const std::vector<double>& delta,
                                  std::uint64_t seed);
SdgBatch generate_in_bounds(const NormalizedDataset& dataset, const std::string& target_class,
                            std::size_t count, InBoundsMode mode, std::uint64_t seed);
SdgBatch generate_out_of_bounds(const NormalizedDataset& dataset, const std::string& target_class,
                                std::size_t coordinate, double offset_lo, double offset_hi,
                                std::size_t count, std::uint64_t seed);
SdgBatch generate_unbounded(const NormalizedDataset& dataset, std::size_t count, std::uint64_t seed);

SdgBatch generate(const NormalizedDataset& dataset, const SdgStrategy& strategy, std::uint64_t seed);

/// Appends the batch. Batch ids must not collide with the dataset's.
NormalizedDataset extend_dataset(const NormalizedDataset& dataset, const SdgBatch& batch);

struct ClassBounds {
  std::vector<double> min;
  std::vector<double> max;
};
ClassBounds class_bounds(const NormalizedDataset& dataset, const std::string& cls);

/// Label from purity-1 regions: L when every containing pure region says L
/// and at least one contains the vector, otherwise nullopt (abstain).
std::vector<std::optional<std::string>> auto_label(const PurityReport& report,
                                                   const std::vector<std::vector<double>>& unlabeled);

/// True when some purity-1 region of the report contains the vector.
bool inside_pure_region(const PurityReport& report, const std::vector<double>& values);

struct QualityMetrics {
  double alpha_precision = 0.0;
  double beta_recall = 0.0;
  double authenticity = 0.0;
};

/// Nearest-neighbour-ball approximations of alpha-precision, beta-recall
/// and authenticity (Euclidean, normalized space). The radius of a real
/// case is the distance to its k-th nearest other real case.
QualityMetrics quality_metrics(const NormalizedDataset& real, const SdgBatch& synth, std::size_t k);

}  // namespace glc
