#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "glc/dataset.hpp"

namespace glc {

enum class ClassifierVariant { decision_tree, knn, gaussian_nb, lda, logistic_regression, ridge };

/// A classifier family plus its hyperparameters. Only the fields relevant
/// to the variant are read.
struct ClassifierKind {
  ClassifierVariant variant = ClassifierVariant::decision_tree;
  std::size_t max_depth = 8;       // decision_tree
  std::size_t min_leaf = 1;        // decision_tree
  std::size_t neighbors = 5;       // knn
  double regularization = 1.0;     // ridge alpha; logistic L2 strength
  std::size_t iterations = 500;    // logistic
  double learning_rate = 10.0;     // logistic

  static ClassifierKind defaults(ClassifierVariant variant);
  /// Table abbreviation: DT, KNN, NB, LDA, LR, Ridge.
  std::string name() const;
  void validate() const;
};

/// Accepts the table abbreviation or the snake_case variant name.
ClassifierVariant classifier_variant_from_string(const std::string& text);
std::string variant_key(ClassifierVariant variant);

/// DT, KNN, LDA, LR, Ridge, NB with default hyperparameters.
std::vector<ClassifierKind> default_ensemble();

/// Feature matrix (one row per case) with labels as indices into `classes`.
struct LabeledData {
  std::string name;
  Eigen::MatrixXd features;
  std::vector<std::size_t> labels;
  std::vector<std::string> classes;

  std::size_t size() const noexcept { return labels.size(); }
};

/// Classes follow the dataset palette.
LabeledData labeled_data(const NormalizedDataset& dataset, std::string name);
/// Labels mapped onto an existing class list; unknown labels throw.
LabeledData labeled_data(const NormalizedDataset& dataset, std::string name,
                         const std::vector<std::string>& classes);

class TrainedModel {
 public:
  explicit TrainedModel(std::size_t num_classes) : num_classes_(num_classes) {}
  virtual ~TrainedModel() = default;

  /// Per-class scores, non-negative and summing to 1.
  virtual Eigen::VectorXd score(const Eigen::VectorXd& x) const = 0;
  /// argmax of score(); ties go to the earlier class.
  std::size_t predict(const Eigen::VectorXd& x) const;

  std::size_t num_classes() const noexcept { return num_classes_; }
  /// Set when LDA had to regularize a singular within-class scatter.
  bool regularized_fallback() const noexcept { return regularized_fallback_; }

 protected:
  std::size_t num_classes_;
  bool regularized_fallback_ = false;
};

/// Deterministic fit; labels[i] is the class index of features.row(i).
std::unique_ptr<TrainedModel> train_classifier(const ClassifierKind& kind, const Eigen::MatrixXd& features,
                                               std::span<const std::size_t> labels,
                                               std::size_t num_classes);
std::unique_ptr<TrainedModel> train_classifier(const ClassifierKind& kind, const LabeledData& data);

/// Positive per-attribute DCC coefficients from the leading LDA direction,
/// scaled to mean 1 (with a floor so every coefficient stays > 0).
std::vector<double> lda_dcc_coefficients(const NormalizedDataset& dataset);

}  // namespace glc
