#include "glc/sdg.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "glc/error.hpp"
#include "glc/random.hpp"

namespace glc {

namespace {

std::vector<const CaseRecord*> class_members(const NormalizedDataset& dataset, const std::string& cls) {
  std::vector<const CaseRecord*> members;
  for (const auto& c : dataset.cases()) {
    if (c.label == cls) members.push_back(&c);
  }
  if (members.empty()) throw ValidationError("class '" + cls + "' has no cases");
  return members;
}

CaseRecord synthetic(std::uint64_t& next_id, std::vector<double> values, std::string label) {
  CaseRecord c;
  c.id = CaseId{next_id++};
  c.values = std::move(values);
  c.label = std::move(label);
  c.provenance = Provenance::synthetic;
  return c;
}

// Per-attribute bootstrap with jitter of +/- half the median gap between
// consecutive distinct class values, clipped to the class bounds.
class ProportionalSampler {
 public:
  ProportionalSampler(const std::vector<const CaseRecord*>& members, std::size_t dimension)
      : members_(members), bounds_min_(dimension), bounds_max_(dimension), half_gap_(dimension, 0.0) {
    for (std::size_t a = 0; a < dimension; ++a) {
      std::set<double> distinct;
      for (const auto* m : members) distinct.insert(m->values[a]);
      bounds_min_[a] = *distinct.begin();
      bounds_max_[a] = *distinct.rbegin();
      std::vector<double> gaps;
      for (auto it = std::next(distinct.begin()); it != distinct.end(); ++it) {
        gaps.push_back(*it - *std::prev(it));
      }
      if (!gaps.empty()) {
        std::sort(gaps.begin(), gaps.end());
        std::size_t mid = gaps.size() / 2;
        double median = gaps.size() % 2 ? gaps[mid] : 0.5 * (gaps[mid - 1] + gaps[mid]);
        half_gap_[a] = 0.5 * median;
      }
    }
  }

  double sample(Rng& rng, std::size_t attribute) const {
    double base = members_[rng.index(members_.size())]->values[attribute];
    double jitter = half_gap_[attribute] > 0.0 ? rng.uniform(-half_gap_[attribute], half_gap_[attribute])
                                               : 0.0;
    return std::clamp(base + jitter, bounds_min_[attribute], bounds_max_[attribute]);
  }

 private:
  const std::vector<const CaseRecord*>& members_;
  std::vector<double> bounds_min_;
  std::vector<double> bounds_max_;
  std::vector<double> half_gap_;
};

void require_count(std::size_t count) {
  if (count < 1) throw ValidationError("count must be >= 1");
}

}  // namespace

std::string strategy_name(const SdgStrategy& strategy) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SingleShift>) return "single_shift";
        if constexpr (std::is_same_v<T, DuplicateShift>) return "duplicate_shift";
        if constexpr (std::is_same_v<T, InBounds>) {
          return s.mode == InBoundsMode::uniform ? "in_bounds_uniform" : "in_bounds_proportional";
        }
        if constexpr (std::is_same_v<T, OutOfBounds>) return "out_of_bounds";
        return "unbounded";
      },
      strategy);
}

ClassBounds class_bounds(const NormalizedDataset& dataset, const std::string& cls) {
  auto members = class_members(dataset, cls);
  ClassBounds b{members.front()->values, members.front()->values};
  for (const auto* m : members) {
    for (std::size_t a = 0; a < dataset.dimension(); ++a) {
      b.min[a] = std::min(b.min[a], m->values[a]);
      b.max[a] = std::max(b.max[a], m->values[a]);
    }
  }
  return b;
}

SdgBatch generate_single_shift(const NormalizedDataset& dataset, CaseId source, std::size_t coordinate,
                               double delta, std::uint64_t seed) {
  const CaseRecord& base = dataset.at(source);
  if (coordinate >= dataset.dimension()) throw ValidationError("coordinate out of range");
  if (!std::isfinite(delta)) throw ValidationError("delta must be finite");
  SdgBatch batch{{}, SingleShift{source, coordinate, delta}, seed};
  std::uint64_t next = dataset.next_id();
  auto values = base.values;
  values[coordinate] = std::clamp(values[coordinate] + delta, 0.0, 1.0);
  batch.cases.push_back(synthetic(next, std::move(values), base.label));
  return batch;
}

SdgBatch generate_duplicate_shift(const NormalizedDataset& dataset, const std::vector<double>& delta,
                                  std::uint64_t seed) {
  if (delta.size() != dataset.dimension()) throw ValidationError("delta dimension mismatch");
  for (double d : delta) {
    if (!std::isfinite(d)) throw ValidationError("delta must be finite");
  }
  SdgBatch batch{{}, DuplicateShift{delta}, seed};
  std::uint64_t next = dataset.next_id();
  for (const auto& c : dataset.cases()) {
    if (c.provenance != Provenance::real) continue;
    auto values = c.values;
    for (std::size_t a = 0; a < values.size(); ++a) values[a] = std::clamp(values[a] + delta[a], 0.0, 1.0);
    batch.cases.push_back(synthetic(next, std::move(values), c.label));
  }
  return batch;
}

SdgBatch generate_in_bounds(const NormalizedDataset& dataset, const std::string& target_class,
                            std::size_t count, InBoundsMode mode, std::uint64_t seed) {
  require_count(count);
  auto members = class_members(dataset, target_class);
  SdgBatch batch{{}, InBounds{target_class, count, mode}, seed};
  Rng rng(seed);
  std::uint64_t next = dataset.next_id();
  const std::size_t n = dataset.dimension();
  if (mode == InBoundsMode::uniform) {
    auto bounds = class_bounds(dataset, target_class);
    for (std::size_t i = 0; i < count; ++i) {
      std::vector<double> values(n);
      for (std::size_t a = 0; a < n; ++a) values[a] = rng.uniform(bounds.min[a], bounds.max[a]);
      batch.cases.push_back(synthetic(next, std::move(values), target_class));
    }
  } else {
    ProportionalSampler sampler(members, n);
    for (std::size_t i = 0; i < count; ++i) {
      std::vector<double> values(n);
      for (std::size_t a = 0; a < n; ++a) values[a] = sampler.sample(rng, a);
      batch.cases.push_back(synthetic(next, std::move(values), target_class));
    }
  }
  return batch;
}

SdgBatch generate_out_of_bounds(const NormalizedDataset& dataset, const std::string& target_class,
                                std::size_t coordinate, double offset_lo, double offset_hi,
                                std::size_t count, std::uint64_t seed) {
  require_count(count);
  if (coordinate >= dataset.dimension()) throw ValidationError("coordinate out of range");
  if (!std::isfinite(offset_lo) || !std::isfinite(offset_hi) || offset_lo > offset_hi) {
    throw ValidationError("offset interval must be finite with lo <= hi");
  }
  double lo = std::clamp(offset_lo, 0.0, 1.0);
  double hi = std::clamp(offset_hi, 0.0, 1.0);
  auto bounds = class_bounds(dataset, target_class);
  if (!(hi < bounds.min[coordinate] || lo > bounds.max[coordinate])) {
    throw ValidationError("offset interval intersects the class bounds [" +
                          format_double(bounds.min[coordinate]) + ", " +
                          format_double(bounds.max[coordinate]) + "] on coordinate " +
                          std::to_string(coordinate));
  }
  auto members = class_members(dataset, target_class);
  ProportionalSampler sampler(members, dataset.dimension());
  SdgBatch batch{{}, OutOfBounds{target_class, coordinate, offset_lo, offset_hi, count}, seed};
  Rng rng(seed);
  std::uint64_t next = dataset.next_id();
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<double> values(dataset.dimension());
    for (std::size_t a = 0; a < values.size(); ++a) {
      values[a] = a == coordinate ? rng.uniform(lo, hi) : sampler.sample(rng, a);
    }
    batch.cases.push_back(synthetic(next, std::move(values), target_class));
  }
  return batch;
}

SdgBatch generate_unbounded(const NormalizedDataset& dataset, std::size_t count, std::uint64_t seed) {
  require_count(count);
  const auto& palette = dataset.class_palette();
  if (palette.empty()) throw ValidationError("dataset has no classes to draw labels from");
  SdgBatch batch{{}, Unbounded{count}, seed};
  Rng rng(seed);
  std::uint64_t next = dataset.next_id();
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<double> values(dataset.dimension());
    for (double& v : values) v = rng.uniform(0.0, 1.0);
    batch.cases.push_back(synthetic(next, std::move(values), palette[rng.index(palette.size())]));
  }
  return batch;
}

SdgBatch generate(const NormalizedDataset& dataset, const SdgStrategy& strategy, std::uint64_t seed) {
  return std::visit(
      [&](const auto& s) -> SdgBatch {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SingleShift>) {
          return generate_single_shift(dataset, s.source, s.coordinate, s.delta, seed);
        } else if constexpr (std::is_same_v<T, DuplicateShift>) {
          return generate_duplicate_shift(dataset, s.delta, seed);
        } else if constexpr (std::is_same_v<T, InBounds>) {
          return generate_in_bounds(dataset, s.target_class, s.count, s.mode, seed);
        } else if constexpr (std::is_same_v<T, OutOfBounds>) {
          return generate_out_of_bounds(dataset, s.target_class, s.coordinate, s.offset_lo, s.offset_hi,
                                        s.count, seed);
        } else {
          return generate_unbounded(dataset, s.count, seed);
        }
      },
      strategy);
}

NormalizedDataset extend_dataset(const NormalizedDataset& dataset, const SdgBatch& batch) {
  auto cases = dataset.cases();
  std::uint64_t next = dataset.next_id();
  for (const auto& c : batch.cases) {
    if (dataset.find(c.id)) {
      throw ValidationError("batch case id " + std::to_string(c.id.value) + " already in dataset");
    }
    cases.push_back(c);
    next = std::max(next, c.id.value + 1);
  }
  return dataset.with_cases(std::move(cases), next);
}

std::vector<std::optional<std::string>> auto_label(const PurityReport& report,
                                                   const std::vector<std::vector<double>>& unlabeled) {
  std::vector<std::optional<std::string>> labels;
  labels.reserve(unlabeled.size());
  for (const auto& v : unlabeled) {
    std::optional<std::string> label;
    bool conflict = false;
    for (const auto& r : report.regions) {
      if (!r.pure() || r.coordinate >= v.size() || !r.contains(v[r.coordinate])) continue;
      if (!label) {
        label = r.dominant_class;
      } else if (*label != r.dominant_class) {
        conflict = true;
        break;
      }
    }
    labels.push_back(conflict ? std::nullopt : label);
  }
  return labels;
}

bool inside_pure_region(const PurityReport& report, const std::vector<double>& values) {
  return std::any_of(report.regions.begin(), report.regions.end(), [&](const PurityRegion& r) {
    return r.pure() && r.coordinate < values.size() && r.contains(values[r.coordinate]);
  });
}

}  // namespace glc
