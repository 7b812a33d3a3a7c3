#include <algorithm>
#include <cmath>
#include <limits>

#include "glc/error.hpp"
#include "glc/sdg.hpp"

namespace glc {

namespace {

double distance(const std::vector<double>& a, const std::vector<double>& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

}  // namespace

QualityMetrics quality_metrics(const NormalizedDataset& real, const SdgBatch& synth, std::size_t k) {
  if (k < 1) throw ValidationError("k must be >= 1");
  if (synth.cases.empty()) throw ValidationError("synthetic batch is empty");
  const auto& reals = real.cases();
  if (reals.size() < k + 1) {
    throw ValidationError("quality metrics need at least k+1 = " + std::to_string(k + 1) +
                          " real cases");
  }
  for (const auto& s : synth.cases) {
    if (s.values.size() != real.dimension()) throw ValidationError("batch dimension mismatch");
  }

  std::vector<double> radius(reals.size());
  std::vector<double> dists;
  for (std::size_t i = 0; i < reals.size(); ++i) {
    dists.clear();
    for (std::size_t j = 0; j < reals.size(); ++j) {
      if (j != i) dists.push_back(distance(reals[i].values, reals[j].values));
    }
    std::nth_element(dists.begin(), dists.begin() + static_cast<std::ptrdiff_t>(k - 1), dists.end());
    radius[i] = dists[k - 1];
  }

  std::size_t precise = 0;
  std::size_t authentic = 0;
  for (const auto& s : synth.cases) {
    std::size_t nearest = 0;
    double best = std::numeric_limits<double>::max();
    bool duplicate = false;
    for (std::size_t j = 0; j < reals.size(); ++j) {
      double d = distance(s.values, reals[j].values);
      if (d < best) {
        best = d;
        nearest = j;
      }
      if (s.values == reals[j].values) duplicate = true;
    }
    if (best <= radius[nearest]) ++precise;
    if (!duplicate) ++authentic;
  }

  std::size_t recalled = 0;
  for (std::size_t i = 0; i < reals.size(); ++i) {
    double best = std::numeric_limits<double>::max();
    for (const auto& s : synth.cases) best = std::min(best, distance(reals[i].values, s.values));
    if (best <= radius[i]) ++recalled;
  }

  const double synth_n = static_cast<double>(synth.cases.size());
  return {static_cast<double>(precise) / synth_n,
          static_cast<double>(recalled) / static_cast<double>(reals.size()),
          static_cast<double>(authentic) / synth_n};
}

}  // namespace glc
