#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace glc {

/// Stable identifier of a case inside one dataset lineage. Ids are never
/// reused: clones and synthetic cases draw from a monotonically increasing
/// counter carried by the dataset.
struct CaseId {
  std::uint64_t value = 0;
  auto operator<=>(const CaseId&) const = default;
};

enum class Provenance { real, synthetic };

std::string to_string(Provenance p);
Provenance provenance_from_string(const std::string& text);

/// Dataset as read from disk, attribute values in raw units.
struct RawDataset {
  std::vector<std::string> attribute_names;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> labels;
  /// Empty means every row is real. Filled when the file carries a
  /// "provenance" column.
  std::vector<Provenance> provenance;

  std::size_t dimension() const noexcept { return attribute_names.size(); }
  std::size_t size() const noexcept { return rows.size(); }
  void validate() const;
};

/// Per-attribute extremes retained for denormalization.
struct AttributeStats {
  std::vector<double> min;
  std::vector<double> max;
  std::vector<bool> degenerate;

  std::size_t dimension() const noexcept { return min.size(); }
};

struct CaseRecord {
  CaseId id;
  std::vector<double> values;  // each in [0, 1]
  std::string label;
  Provenance provenance = Provenance::real;
};

/// Immutable, min-max normalized dataset. Edits return new values.
class NormalizedDataset {
 public:
  NormalizedDataset() = default;

  /// Validates the invariants (shared dimensionality, values in [0,1],
  /// unique ids) and derives the class palette. Classes in `palette_hint`
  /// that are still present keep their order; new classes follow in
  /// first-appearance order.
  NormalizedDataset(std::vector<std::string> attribute_names, AttributeStats stats,
                    std::vector<CaseRecord> cases,
                    const std::vector<std::string>& palette_hint = {},
                    std::uint64_t next_id = 0);

  const std::vector<std::string>& attribute_names() const noexcept { return attribute_names_; }
  const AttributeStats& stats() const noexcept { return stats_; }
  const std::vector<CaseRecord>& cases() const noexcept { return cases_; }
  const std::vector<std::string>& class_palette() const noexcept { return palette_; }
  std::uint64_t next_id() const noexcept { return next_id_; }

  std::size_t dimension() const noexcept { return attribute_names_.size(); }
  std::size_t size() const noexcept { return cases_.size(); }
  bool empty() const noexcept { return cases_.empty(); }

  /// Index into cases(), or nullopt.
  std::optional<std::size_t> find(CaseId id) const;
  const CaseRecord& at(CaseId id) const;

  /// Content hash over ids, values, labels and provenance. Used as the
  /// dataset version token for staleness checks.
  std::uint64_t fingerprint() const;

  /// Same attributes, stats and palette order with a different case list.
  NormalizedDataset with_cases(std::vector<CaseRecord> cases,
                               std::uint64_t next_id = 0) const;
  /// Subset by id, preserving the dataset's order. Unknown ids throw.
  NormalizedDataset subset(std::span<const CaseId> ids) const;
  /// Real cases only.
  NormalizedDataset real_only() const;

 private:
  std::vector<std::string> attribute_names_;
  AttributeStats stats_;
  std::vector<CaseRecord> cases_;
  std::vector<std::string> palette_;
  std::uint64_t next_id_ = 0;
};

enum class DataFormat { csv, txt };

RawDataset load_dataset(std::istream& in, DataFormat format = DataFormat::csv);
RawDataset load_dataset(const std::filesystem::path& path);

NormalizedDataset normalize_dataset(const RawDataset& raw);
/// Map raw values through existing stats (no clipping).
std::vector<double> normalize_point(std::span<const double> raw, const AttributeStats& stats);
std::vector<double> denormalize_point(std::span<const double> values, const AttributeStats& stats);

struct ShiftCommand {
  std::vector<CaseId> ids;
  std::vector<double> delta;
};
struct CloneCommand {
  std::vector<CaseId> ids;
};
struct DeleteCommand {
  std::vector<CaseId> ids;
};
struct RelabelCommand {
  std::vector<CaseId> ids;
  std::string label;
};
using EditCommand = std::variant<ShiftCommand, CloneCommand, DeleteCommand, RelabelCommand>;

NormalizedDataset edit_cases(const NormalizedDataset& dataset, const EditCommand& command);

struct ExportOptions {
  bool denormalize = false;
  bool provenance_column = false;
};

void write_dataset_csv(std::ostream& out, const NormalizedDataset& dataset,
                       const ExportOptions& options = {});
void export_dataset(const NormalizedDataset& dataset, const std::filesystem::path& path,
                    const ExportOptions& options = {});

/// Shortest decimal form that reads back to the same double.
std::string format_double(double value);

}  // namespace glc

template <>
struct std::hash<glc::CaseId> {
  std::size_t operator()(const glc::CaseId& id) const noexcept {
    return std::hash<std::uint64_t>{}(id.value);
  }
};
