#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "glc/classifiers.hpp"
#include "glc/dataset.hpp"

namespace glc {

struct EvalConfig {
  std::size_t cycles = 100;
  std::size_t folds = 10;
  std::uint64_t master_seed = 0;
  std::string train_name = "train";
  std::string exploration_name = "exploration";
  /// Worker threads for independent cycles; 0 picks the hardware count.
  std::size_t threads = 1;

  void validate() const;
};

struct EvalRow {
  ClassifierKind kind;
  double cv_mean = 0.0;
  double cv_std = 0.0;
  double exp_mean = 0.0;
  double exp_std = 0.0;
  double best_auc = 0.0;
  double worst_auc = 0.0;
  /// Exploration accuracy differed between cycles.
  bool exploration_varies = false;
  /// LDA fell back to a ridge-regularized scatter in some fit.
  bool regularized_fallback = false;
  /// Classes absent from the exploration labels, skipped in the AUC.
  std::vector<std::string> auc_skipped_classes;
};

struct EvalReport {
  std::string train_name;
  std::string exploration_name;
  std::size_t cycles = 0;
  std::size_t folds = 0;
  std::uint64_t master_seed = 0;
  std::vector<std::string> classes;
  std::vector<EvalRow> rows;

  /// Row by table abbreviation ("LDA") or variant key ("lda").
  const EvalRow& row(const std::string& model) const;
};

using ProgressFn = std::function<void(double fraction)>;

/// Repeated stratified k-fold CV on `train`, plus per-cycle scoring of a
/// model refit on all of `train` against `exploration`.
EvalReport monte_carlo_cv(const EvalConfig& config, const NormalizedDataset& train,
                          const NormalizedDataset& exploration, const std::vector<ClassifierKind>& kinds,
                          const ProgressFn& progress = {});

/// Fold index per row. Each class is shuffled and dealt round-robin, the
/// dealing offset carrying over from one class to the next.
std::vector<std::size_t> stratified_folds(std::span<const std::size_t> labels, std::size_t num_classes,
                                          std::size_t folds, std::uint64_t seed);

struct AucResult {
  double value = 0.0;
  std::vector<std::size_t> skipped_classes;
};

/// Macro one-vs-rest rank AUC; ties count one half. Classes with no
/// positive or no negative example are skipped.
AucResult compute_auc(const std::vector<Eigen::VectorXd>& scores, std::span<const std::size_t> labels,
                      std::size_t num_classes);

enum class ReportFormat { text, csv, structured };

ReportFormat report_format_from_string(const std::string& text);
std::string render_report(const EvalReport& report, ReportFormat format);
/// Inverse of the structured form.
EvalReport parse_report(const std::string& structured);

}  // namespace glc
