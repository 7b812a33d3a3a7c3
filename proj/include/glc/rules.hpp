#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "glc/dataset.hpp"
#include "glc/layout.hpp"

namespace glc {

/// IF x[coordinate] in [lo, hi] THEN predicted.
struct IntervalRule {
  std::size_t coordinate = 0;
  double lo = 0.0;
  double hi = 0.0;
  std::string predicted;

  bool matches(std::span<const double> values) const {
    return values[coordinate] >= lo && values[coordinate] <= hi;
  }
};

/// Classifies a case by the sign of its SPC glyph's overall slope: strictly
/// above the tolerance goes to positive_class, everything else (including
/// flat lines) to nonpositive_class.
struct SlopeRuleConfig {
  std::string positive_class;
  std::string nonpositive_class;
  double flat_tolerance = 1e-9;
  LayoutConfig pair_source;  // kind must be SPC

  void validate(std::size_t dimension) const;
};

struct RuleSet {
  std::vector<IntervalRule> chain;  // first match wins
  std::optional<SlopeRuleConfig> terminal;
  std::optional<std::string> fallback;  // nullopt = abstain
};

/// Exact fraction; keeps reported rates free of rounding.
struct Ratio {
  std::size_t numerator = 0;
  std::size_t denominator = 0;

  double value() const {
    return denominator == 0 ? 0.0 : static_cast<double>(numerator) / static_cast<double>(denominator);
  }
};

/// Rows are actual classes, columns predicted classes plus a trailing
/// abstain column.
struct ConfusionMatrix {
  std::vector<std::string> classes;
  std::vector<std::vector<std::size_t>> counts;

  std::size_t total() const;
  std::size_t abstained() const;
  std::size_t correct() const;
  /// Correct / non-abstained cases.
  Ratio accuracy() const;
  /// Correct / row total for an actual class.
  Ratio recall(std::size_t cls) const;
  /// Correct / column total for a predicted class.
  Ratio precision(std::size_t cls) const;
  std::size_t index_of(const std::string& cls) const;

  std::string to_csv() const;
};

/// Greedy induction: repeatedly emit the top-ranked qualifying purity
/// region as a rule, drop the cases it covers, and re-rank the rest.
RuleSet induce_interval_rules(const NormalizedDataset& dataset, double min_purity,
                              std::size_t min_support);

/// (y_last - y_first) / (x_last - x_first) over the SPC pair points.
double spc_slope(std::span<const double> values, const LayoutConfig& pair_source);
std::string classify_slope(std::span<const double> values, const SlopeRuleConfig& config);

/// Chain, then terminal slope rule, then fallback. nullopt = abstain.
std::optional<std::string> predict(const RuleSet& rules, std::span<const double> values);

ConfusionMatrix evaluate_ruleset(const RuleSet& rules, const NormalizedDataset& dataset);

/// One line per rule, e.g. "IF petal_length in [0, 0.1525] THEN Setosa".
std::string ruleset_text(const RuleSet& rules, const std::vector<std::string>& attribute_names);

}  // namespace glc
