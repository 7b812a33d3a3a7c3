#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "glc/evaluation.hpp"
#include "glc/layout.hpp"
#include "glc/purity.hpp"
#include "glc/sdg.hpp"

namespace glc {

// The SDG-ADL loop:
//   1 layout, 2-5 purity analysis, 6 generate + label in most-pure areas,
//   7 evaluate, 8 review, 9 generate outside least-pure areas,
//   11 switch GLC and restart.
// Step 10 (re-evaluate) is the 9 -> 7 edge and is not logged separately.

enum class ReviewDecision { accept, modify, escalate };

std::string to_string(ReviewDecision decision);
ReviewDecision review_decision_from_string(const std::string& text);

/// Snapshot handed to a decision source.
struct DecisionContext {
  int step = 0;
  GlcKind glc = GlcKind::pc;
  std::size_t evaluations = 0;
  const NormalizedDataset* current = nullptr;
  const PurityReport* report = nullptr;
  const EvalReport* benchmark = nullptr;
  const EvalReport* candidate = nullptr;  // set at Step 8
  std::size_t candidate_added = 0;        // set at Step 8
};

class DecisionSource {
 public:
  virtual ~DecisionSource() = default;
  /// Step 6.
  virtual std::vector<SdgStrategy> choose_generation(const DecisionContext& context) = 0;
  /// Step 8.
  virtual ReviewDecision review(const DecisionContext& context) = 0;
  /// Step 9.
  virtual std::vector<SdgStrategy> choose_outside_lp(const DecisionContext& context) = 0;
  /// Step 11. nullopt ends the run.
  virtual std::optional<GlcKind> choose_next_glc(const DecisionContext& context) = 0;
};

struct AutomaticPolicyConfig {
  InBoundsMode mode = InBoundsMode::proportional;
  std::size_t count_per_class = 10;
  /// Largest tolerated drop in any classifier's exploration mean.
  double tolerance = 0.01;
  std::vector<GlcKind> rotation{GlcKind::pc, GlcKind::scc, GlcKind::spc, GlcKind::dcc};

  void validate() const;
};

/// In-bounds generation for every class; accepts a candidate when no
/// exploration mean falls more than `tolerance` below the benchmark, and
/// otherwise alternates between Step 9 and Step 6.
class AutomaticPolicy final : public DecisionSource {
 public:
  explicit AutomaticPolicy(AutomaticPolicyConfig config = {});

  std::vector<SdgStrategy> choose_generation(const DecisionContext& context) override;
  ReviewDecision review(const DecisionContext& context) override;
  std::vector<SdgStrategy> choose_outside_lp(const DecisionContext& context) override;
  std::optional<GlcKind> choose_next_glc(const DecisionContext& context) override;

  static bool acceptable(const EvalReport& benchmark, const EvalReport& candidate, double tolerance);

 private:
  std::vector<SdgStrategy> per_class(const NormalizedDataset& dataset) const;

  AutomaticPolicyConfig config_;
  std::size_t rejections_ = 0;
};

struct PipelineConfig {
  EvalConfig eval{.cycles = 10, .folds = 10, .master_seed = 0};
  std::vector<ClassifierKind> classifiers = default_ensemble();
  std::uint64_t seed = 0;
  std::size_t max_iterations = 10;  // bound on Step-7 evaluations
  std::size_t min_support = 1;
  GlcKind initial_glc = GlcKind::pc;

  void validate() const;
};

struct StepRecord {
  int step = 0;
  GlcKind glc = GlcKind::pc;
  std::size_t dataset_version = 0;
  std::string summary;
  std::optional<std::string> decision;
  std::optional<EvalReport> evaluation;
};

struct SessionLog {
  /// Append-only; version 0 is the input.
  std::vector<NormalizedDataset> versions;
  std::vector<StepRecord> steps;
  std::vector<GlcKind> glc_sequence;
  EvalReport benchmark;
  std::size_t final_version = 0;
  std::string termination;

  const NormalizedDataset& final_dataset() const { return versions.at(final_version); }
  /// Last Step-7 report of an accepted candidate, else the benchmark.
  const EvalReport& final_evaluation() const;
};

/// True when `to` may follow `from` in the log. 0 stands for the end.
bool step_transition_allowed(int from, int to);

SessionLog run_sdg_adl(const NormalizedDataset& dataset, DecisionSource& policy,
                       const PipelineConfig& config, const ProgressFn& progress = {});

/// One line per step.
std::string session_log_transcript(const SessionLog& log);

}  // namespace glc
