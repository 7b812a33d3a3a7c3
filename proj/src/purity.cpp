#include "glc/purity.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "glc/error.hpp"

namespace glc {

namespace {

// One stretch of sorted values on a coordinate.
struct Segment {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::size_t> class_counts;  // by palette index
  std::vector<CaseId> ids;

  std::size_t support() const { return ids.size(); }

  std::size_t dominant() const {
    return static_cast<std::size_t>(
        std::max_element(class_counts.begin(), class_counts.end()) - class_counts.begin());
  }

  double purity() const {
    return ids.empty() ? 0.0
                       : static_cast<double>(class_counts[dominant()]) / static_cast<double>(support());
  }

  bool pure() const { return !ids.empty() && class_counts[dominant()] == support(); }

  void absorb(const Segment& other) {
    lo = std::min(lo, other.lo);
    hi = std::max(hi, other.hi);
    for (std::size_t k = 0; k < class_counts.size(); ++k) class_counts[k] += other.class_counts[k];
    ids.insert(ids.end(), other.ids.begin(), other.ids.end());
  }
};

std::size_t palette_index(const NormalizedDataset& dataset, const std::string& label) {
  const auto& palette = dataset.class_palette();
  return static_cast<std::size_t>(std::find(palette.begin(), palette.end(), label) - palette.begin());
}

// Groups cases by exact value, then merges consecutive single-label groups
// of the same label into runs. Mixed groups stay separate segments.
std::vector<Segment> segment_coordinate(const NormalizedDataset& dataset, std::size_t coordinate) {
  const auto& cases = dataset.cases();
  const std::size_t classes = dataset.class_palette().size();
  std::vector<std::size_t> order(cases.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return cases[a].values[coordinate] < cases[b].values[coordinate];
  });

  std::vector<Segment> groups;
  for (std::size_t idx : order) {
    double v = cases[idx].values[coordinate];
    if (groups.empty() || groups.back().lo != v) {
      Segment s;
      s.lo = s.hi = v;
      s.class_counts.assign(classes, 0);
      groups.push_back(std::move(s));
    }
    groups.back().class_counts[palette_index(dataset, cases[idx].label)]++;
    groups.back().ids.push_back(cases[idx].id);
  }

  std::vector<Segment> segments;
  for (auto& g : groups) {
    if (!segments.empty() && g.pure() && segments.back().pure() &&
        segments.back().dominant() == g.dominant()) {
      segments.back().absorb(g);
    } else {
      segments.push_back(std::move(g));
    }
  }
  return segments;
}

PurityRegion to_region(const NormalizedDataset& dataset, std::size_t coordinate, Segment s) {
  PurityRegion r;
  r.coordinate = coordinate;
  r.lo = s.lo;
  r.hi = s.hi;
  r.dominant_class = dataset.class_palette()[s.dominant()];
  r.purity = s.pure() ? 1.0 : s.purity();
  r.support = s.support();
  std::sort(s.ids.begin(), s.ids.end());
  r.case_ids = std::move(s.ids);
  return r;
}

// Folds every segment below min_support into a neighbour until none is left
// (or only one segment remains). The smallest segment goes first; it joins
// the less pure neighbour so large pure runs are not diluted, then the
// smaller one, then the left one.
void merge_small(std::vector<Segment>& segments, std::size_t min_support) {
  while (segments.size() > 1) {
    std::size_t victim = segments.size();
    for (std::size_t i = 0; i < segments.size(); ++i) {
      if (segments[i].support() >= min_support) continue;
      if (victim == segments.size() || segments[i].support() < segments[victim].support()) victim = i;
    }
    if (victim == segments.size()) return;

    std::size_t target;
    if (victim == 0) {
      target = 1;
    } else if (victim + 1 == segments.size()) {
      target = victim - 1;
    } else {
      const Segment& left = segments[victim - 1];
      const Segment& right = segments[victim + 1];
      if (left.purity() != right.purity()) {
        target = left.purity() < right.purity() ? victim - 1 : victim + 1;
      } else if (left.support() != right.support()) {
        target = left.support() < right.support() ? victim - 1 : victim + 1;
      } else {
        target = victim - 1;
      }
    }
    segments[target].absorb(segments[victim]);
    segments.erase(segments.begin() + static_cast<std::ptrdiff_t>(victim));
  }
}

void require_current(const NormalizedDataset& dataset, const PurityReport& report) {
  if (report.dataset_fingerprint != dataset.fingerprint()) {
    throw ConflictError("purity report is stale: it was computed from another dataset version");
  }
}

}  // namespace

std::vector<PurityRegion> find_pure_intervals(const NormalizedDataset& dataset, std::size_t coordinate) {
  if (coordinate >= dataset.dimension()) {
    throw ValidationError("coordinate " + std::to_string(coordinate) + " out of range");
  }
  std::vector<PurityRegion> regions;
  for (auto& s : segment_coordinate(dataset, coordinate)) {
    if (s.pure()) regions.push_back(to_region(dataset, coordinate, std::move(s)));
  }
  return regions;
}

PurityReport rank_regions_by_purity(const NormalizedDataset& dataset, std::size_t min_support) {
  if (min_support < 1) throw ValidationError("min_support must be >= 1");
  PurityReport report;
  report.dataset_fingerprint = dataset.fingerprint();
  report.min_support = min_support;
  if (dataset.empty()) return report;

  for (std::size_t c = 0; c < dataset.dimension(); ++c) {
    auto segments = segment_coordinate(dataset, c);
    merge_small(segments, min_support);
    for (auto& s : segments) {
      // A coordinate with fewer cases than min_support cannot host a region.
      if (s.support() >= min_support) report.regions.push_back(to_region(dataset, c, std::move(s)));
    }
  }
  std::sort(report.regions.begin(), report.regions.end(),
            [](const PurityRegion& a, const PurityRegion& b) {
              if (a.purity != b.purity) return a.purity > b.purity;
              if (a.support != b.support) return a.support > b.support;
              if (a.coordinate != b.coordinate) return a.coordinate < b.coordinate;
              return a.lo < b.lo;
            });

  std::unordered_set<CaseId> covered;
  for (const auto& r : report.regions) {
    if (r.pure()) covered.insert(r.case_ids.begin(), r.case_ids.end());
  }
  for (const auto& c : dataset.cases()) {
    if (!covered.count(c.id)) report.lp_case_ids.push_back(c.id);
  }
  std::sort(report.lp_case_ids.begin(), report.lp_case_ids.end());
  return report;
}

std::vector<CaseId> apply_visibility(const NormalizedDataset& dataset, const PurityReport& report,
                                     VisibilityMode mode) {
  require_current(dataset, report);
  if (mode == VisibilityMode::hide_pure) return report.lp_case_ids;
  std::vector<CaseId> all;
  all.reserve(dataset.size());
  for (const auto& c : dataset.cases()) all.push_back(c.id);
  return all;
}

NormalizedDataset extract_overlap(const NormalizedDataset& dataset, const PurityReport& report) {
  require_current(dataset, report);
  if (report.lp_case_ids.empty()) {
    throw ValidationError("no overlap: every case lies in a pure region");
  }
  return dataset.subset(report.lp_case_ids);
}

std::string purity_report_csv(const PurityReport& report) {
  std::ostringstream out;
  out << "coordinate,lo,hi,class,purity,support\n";
  for (const auto& r : report.regions) {
    out << r.coordinate << ',' << format_double(r.lo) << ',' << format_double(r.hi) << ','
        << r.dominant_class << ',' << format_double(r.purity) << ',' << r.support << '\n';
  }
  return out.str();
}

}  // namespace glc
