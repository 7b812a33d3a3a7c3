#include "glc/rules.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_set>

#include "glc/error.hpp"
#include "glc/purity.hpp"

namespace glc {

void SlopeRuleConfig::validate(std::size_t dimension) const {
  if (positive_class.empty() || nonpositive_class.empty()) {
    throw ValidationError("slope rule needs both classes");
  }
  if (positive_class == nonpositive_class) throw ValidationError("slope rule classes must differ");
  if (!std::isfinite(flat_tolerance) || flat_tolerance < 0.0) {
    throw ValidationError("flat tolerance must be finite and >= 0");
  }
  if (pair_source.kind != GlcKind::spc) throw ValidationError("slope rule needs an SPC layout config");
  if (dimension < 4) throw ValidationError("slope rule needs at least four attributes (two pairs)");
  pair_source.validate(dimension);
}

std::size_t ConfusionMatrix::total() const {
  std::size_t sum = 0;
  for (const auto& row : counts) {
    for (std::size_t v : row) sum += v;
  }
  return sum;
}

std::size_t ConfusionMatrix::abstained() const {
  std::size_t sum = 0;
  for (const auto& row : counts) sum += row.back();
  return sum;
}

std::size_t ConfusionMatrix::correct() const {
  std::size_t sum = 0;
  for (std::size_t k = 0; k < classes.size(); ++k) sum += counts[k][k];
  return sum;
}

Ratio ConfusionMatrix::accuracy() const {
  return {correct(), total() - abstained()};
}

Ratio ConfusionMatrix::recall(std::size_t cls) const {
  std::size_t row = 0;
  for (std::size_t v : counts.at(cls)) row += v;
  return {counts[cls][cls], row};
}

Ratio ConfusionMatrix::precision(std::size_t cls) const {
  std::size_t column = 0;
  for (const auto& row : counts) column += row.at(cls);
  return {counts[cls][cls], column};
}

std::size_t ConfusionMatrix::index_of(const std::string& cls) const {
  auto it = std::find(classes.begin(), classes.end(), cls);
  if (it == classes.end()) throw NotFoundError("class '" + cls + "' not in confusion matrix");
  return static_cast<std::size_t>(it - classes.begin());
}

std::string ConfusionMatrix::to_csv() const {
  std::ostringstream out;
  out << "actual";
  for (const auto& c : classes) out << ",predicted " << c;
  out << ",abstain,recall\n";
  for (std::size_t r = 0; r < classes.size(); ++r) {
    out << classes[r];
    for (std::size_t v : counts[r]) out << ',' << v;
    auto rec = recall(r);
    out << ',' << rec.numerator << '/' << rec.denominator << '\n';
  }
  out << "precision";
  for (std::size_t c = 0; c < classes.size(); ++c) {
    auto p = precision(c);
    out << ',' << p.numerator << '/' << p.denominator;
  }
  auto acc = accuracy();
  out << ",," << acc.numerator << '/' << acc.denominator << '\n';
  return out.str();
}

RuleSet induce_interval_rules(const NormalizedDataset& dataset, double min_purity,
                              std::size_t min_support) {
  if (!(min_purity > 0.0 && min_purity <= 1.0)) throw ValidationError("min_purity must be in (0,1]");
  if (min_support < 1) throw ValidationError("min_support must be >= 1");

  RuleSet rules;
  NormalizedDataset remaining = dataset;
  while (!remaining.empty()) {
    PurityReport report = rank_regions_by_purity(remaining, min_support);
    auto pick = std::find_if(report.regions.begin(), report.regions.end(), [&](const PurityRegion& r) {
      return r.purity >= min_purity && r.support >= min_support;
    });
    if (pick == report.regions.end()) break;
    rules.chain.push_back({pick->coordinate, pick->lo, pick->hi, pick->dominant_class});

    std::unordered_set<CaseId> covered(pick->case_ids.begin(), pick->case_ids.end());
    std::vector<CaseRecord> rest;
    for (const auto& c : remaining.cases()) {
      if (!covered.count(c.id)) rest.push_back(c);
    }
    remaining = remaining.with_cases(std::move(rest));
  }
  return rules;
}

double spc_slope(std::span<const double> values, const LayoutConfig& pair_source) {
  auto points = spc_pair_points(values, pair_source);
  if (points.size() < 2) throw ValidationError("slope needs at least two SPC pair points");
  double dx = points.back().x - points.front().x;
  if (std::abs(dx) < 1e-12) {
    throw ValidationError("degenerate SPC spacing: first and last pair points share an x position");
  }
  return (points.back().y - points.front().y) / dx;
}

std::string classify_slope(std::span<const double> values, const SlopeRuleConfig& config) {
  config.validate(values.size());
  return spc_slope(values, config.pair_source) > config.flat_tolerance ? config.positive_class
                                                                        : config.nonpositive_class;
}

std::optional<std::string> predict(const RuleSet& rules, std::span<const double> values) {
  for (const auto& rule : rules.chain) {
    if (rule.coordinate >= values.size()) throw ValidationError("rule coordinate out of range");
    if (rule.matches(values)) return rule.predicted;
  }
  if (rules.terminal) return classify_slope(values, *rules.terminal);
  return rules.fallback;
}

ConfusionMatrix evaluate_ruleset(const RuleSet& rules, const NormalizedDataset& dataset) {
  ConfusionMatrix m;
  m.classes = dataset.class_palette();
  auto add_class = [&](const std::string& cls) {
    if (std::find(m.classes.begin(), m.classes.end(), cls) == m.classes.end()) m.classes.push_back(cls);
  };
  for (const auto& r : rules.chain) add_class(r.predicted);
  if (rules.terminal) {
    add_class(rules.terminal->positive_class);
    add_class(rules.terminal->nonpositive_class);
  }
  if (rules.fallback) add_class(*rules.fallback);

  const std::size_t k = m.classes.size();
  m.counts.assign(k, std::vector<std::size_t>(k + 1, 0));
  for (const auto& c : dataset.cases()) {
    std::size_t actual = m.index_of(c.label);
    auto predicted = predict(rules, c.values);
    m.counts[actual][predicted ? m.index_of(*predicted) : k]++;
  }
  return m;
}

std::string ruleset_text(const RuleSet& rules, const std::vector<std::string>& attribute_names) {
  std::ostringstream out;
  auto name = [&](std::size_t c) {
    return c < attribute_names.size() ? attribute_names[c] : "x" + std::to_string(c + 1);
  };
  for (std::size_t i = 0; i < rules.chain.size(); ++i) {
    const auto& r = rules.chain[i];
    out << (i == 0 ? "IF " : "ELSE IF ") << name(r.coordinate) << " in [" << format_double(r.lo)
        << ", " << format_double(r.hi) << "] THEN " << r.predicted << '\n';
  }
  if (rules.terminal) {
    out << (rules.chain.empty() ? "" : "ELSE ") << "IF SPC slope > "
        << format_double(rules.terminal->flat_tolerance) << " THEN " << rules.terminal->positive_class
        << " ELSE " << rules.terminal->nonpositive_class << '\n';
  } else {
    out << (rules.chain.empty() ? "" : "ELSE ") << (rules.fallback ? *rules.fallback : "ABSTAIN")
        << '\n';
  }
  return out.str();
}

}  // namespace glc
