#include "glc/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "glc/error.hpp"

namespace glc {

namespace {

Eigen::VectorXd softmax(const Eigen::VectorXd& logits) {
  Eigen::VectorXd e = (logits.array() - logits.maxCoeff()).exp();
  return e / e.sum();
}

std::vector<std::size_t> class_counts(std::span<const std::size_t> labels, std::size_t k) {
  std::vector<std::size_t> counts(k, 0);
  for (std::size_t y : labels) counts.at(y)++;
  return counts;
}

// ---------------------------------------------------------------------------
// CART with Gini impurity.

class DecisionTree final : public TrainedModel {
 public:
  DecisionTree(const ClassifierKind& kind, const Eigen::MatrixXd& x, std::span<const std::size_t> y,
               std::size_t k)
      : TrainedModel(k), max_depth_(kind.max_depth), min_leaf_(std::max<std::size_t>(1, kind.min_leaf)) {
    std::vector<std::size_t> rows(y.size());
    std::iota(rows.begin(), rows.end(), 0);
    build(x, y, rows, 0);
  }

  Eigen::VectorXd score(const Eigen::VectorXd& x) const override {
    std::size_t node = 0;
    while (nodes_[node].feature >= 0) {
      const auto& n = nodes_[node];
      node = x(n.feature) <= n.threshold ? n.left : n.right;
    }
    return nodes_[node].distribution;
  }

 private:
  struct Node {
    int feature = -1;
    double threshold = 0.0;
    std::size_t left = 0;
    std::size_t right = 0;
    Eigen::VectorXd distribution;
  };

  static double gini(const std::vector<double>& counts, double total) {
    if (total <= 0.0) return 0.0;
    double sum = 0.0;
    for (double c : counts) sum += (c / total) * (c / total);
    return 1.0 - sum;
  }

  std::size_t build(const Eigen::MatrixXd& x, std::span<const std::size_t> y,
                    std::vector<std::size_t>& rows, std::size_t depth) {
    const std::size_t k = num_classes_;
    std::vector<double> counts(k, 0.0);
    for (std::size_t r : rows) counts[y[r]] += 1.0;
    const double total = static_cast<double>(rows.size());

    std::size_t id = nodes_.size();
    nodes_.push_back({});
    nodes_[id].distribution = Eigen::Map<Eigen::VectorXd>(counts.data(), static_cast<Eigen::Index>(k)) / total;

    const double parent = gini(counts, total);
    if (depth >= max_depth_ || parent <= 1e-12 || rows.size() < 2 * min_leaf_) return id;

    int best_feature = -1;
    double best_threshold = 0.0;
    double best_impurity = parent - 1e-12;
    std::vector<std::size_t> sorted = rows;
    for (Eigen::Index f = 0; f < x.cols(); ++f) {
      std::stable_sort(sorted.begin(), sorted.end(),
                       [&](std::size_t a, std::size_t b) { return x(a, f) < x(b, f); });
      std::vector<double> left(k, 0.0);
      std::vector<double> right = counts;
      for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
        left[y[sorted[i]]] += 1.0;
        right[y[sorted[i]]] -= 1.0;
        double v = x(sorted[i], f);
        double next = x(sorted[i + 1], f);
        if (v == next) continue;
        std::size_t nl = i + 1;
        std::size_t nr = sorted.size() - nl;
        if (nl < min_leaf_ || nr < min_leaf_) continue;
        double impurity = (static_cast<double>(nl) * gini(left, static_cast<double>(nl)) +
                           static_cast<double>(nr) * gini(right, static_cast<double>(nr))) /
                          total;
        if (impurity < best_impurity) {
          best_impurity = impurity;
          best_feature = static_cast<int>(f);
          best_threshold = 0.5 * (v + next);
        }
      }
    }
    if (best_feature < 0) return id;

    std::vector<std::size_t> left_rows;
    std::vector<std::size_t> right_rows;
    for (std::size_t r : rows) {
      (x(r, best_feature) <= best_threshold ? left_rows : right_rows).push_back(r);
    }
    nodes_[id].feature = best_feature;
    nodes_[id].threshold = best_threshold;
    std::size_t l = build(x, y, left_rows, depth + 1);
    std::size_t r = build(x, y, right_rows, depth + 1);
    nodes_[id].left = l;
    nodes_[id].right = r;
    return id;
  }

  std::size_t max_depth_;
  std::size_t min_leaf_;
  std::vector<Node> nodes_;
};

// ---------------------------------------------------------------------------

class NearestNeighbors final : public TrainedModel {
 public:
  NearestNeighbors(const ClassifierKind& kind, const Eigen::MatrixXd& x, std::span<const std::size_t> y,
                   std::size_t k)
      : TrainedModel(k), x_(x), y_(y.begin(), y.end()), neighbors_(std::max<std::size_t>(1, kind.neighbors)) {}

  Eigen::VectorXd score(const Eigen::VectorXd& q) const override {
    const std::size_t n = y_.size();
    std::vector<std::pair<double, std::size_t>> dist(n);
    for (std::size_t i = 0; i < n; ++i) dist[i] = {(x_.row(static_cast<Eigen::Index>(i)).transpose() - q).squaredNorm(), i};
    const std::size_t m = std::min(neighbors_, n);
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(m), dist.end());
    Eigen::VectorXd votes = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(num_classes_));
    for (std::size_t i = 0; i < m; ++i) votes(static_cast<Eigen::Index>(y_[dist[i].second])) += 1.0;
    return votes / static_cast<double>(m);
  }

 private:
  Eigen::MatrixXd x_;
  std::vector<std::size_t> y_;
  std::size_t neighbors_;
};

// ---------------------------------------------------------------------------

class GaussianNaiveBayes final : public TrainedModel {
 public:
  GaussianNaiveBayes(const Eigen::MatrixXd& x, std::span<const std::size_t> y, std::size_t k)
      : TrainedModel(k) {
    const Eigen::Index d = x.cols();
    auto counts = class_counts(y, k);
    means_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), d);
    vars_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), d);
    log_prior_ = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(k), -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < y.size(); ++i) means_.row(static_cast<Eigen::Index>(y[i])) += x.row(static_cast<Eigen::Index>(i));
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] > 0) means_.row(static_cast<Eigen::Index>(c)) /= static_cast<double>(counts[c]);
    }
    for (std::size_t i = 0; i < y.size(); ++i) {
      auto diff = x.row(static_cast<Eigen::Index>(i)) - means_.row(static_cast<Eigen::Index>(y[i]));
      vars_.row(static_cast<Eigen::Index>(y[i])) += diff.cwiseProduct(diff);
    }
    // Variance floor relative to the widest feature.
    double widest = 0.0;
    for (Eigen::Index f = 0; f < d; ++f) {
      Eigen::VectorXd col = x.col(f);
      double mean = col.mean();
      widest = std::max(widest, (col.array() - mean).square().mean());
    }
    const double floor = 1e-9 * std::max(widest, 1.0e-12);
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;
      vars_.row(static_cast<Eigen::Index>(c)) /= static_cast<double>(counts[c]);
      vars_.row(static_cast<Eigen::Index>(c)).array() += floor;
      log_prior_(static_cast<Eigen::Index>(c)) = std::log(static_cast<double>(counts[c]) / static_cast<double>(y.size()));
    }
  }

  Eigen::VectorXd score(const Eigen::VectorXd& q) const override {
    Eigen::VectorXd logp = log_prior_;
    for (Eigen::Index c = 0; c < logp.size(); ++c) {
      if (!std::isfinite(logp(c))) continue;
      auto var = vars_.row(c).transpose().array();
      auto diff = q.array() - means_.row(c).transpose().array();
      logp(c) += (-0.5 * (2.0 * std::numbers::pi * var).log() - 0.5 * diff.square() / var).sum();
    }
    return softmax(logp);
  }

 private:
  Eigen::MatrixXd means_;
  Eigen::MatrixXd vars_;
  Eigen::VectorXd log_prior_;
};

// ---------------------------------------------------------------------------

struct ScatterFit {
  Eigen::MatrixXd means;       // k x d
  Eigen::MatrixXd within;      // d x d pooled covariance
  std::vector<std::size_t> counts;
};

ScatterFit within_class_scatter(const Eigen::MatrixXd& x, std::span<const std::size_t> y, std::size_t k) {
  ScatterFit fit;
  const Eigen::Index d = x.cols();
  fit.counts = class_counts(y, k);
  fit.means = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), d);
  for (std::size_t i = 0; i < y.size(); ++i) fit.means.row(static_cast<Eigen::Index>(y[i])) += x.row(static_cast<Eigen::Index>(i));
  std::size_t present = 0;
  for (std::size_t c = 0; c < k; ++c) {
    if (fit.counts[c] == 0) continue;
    ++present;
    fit.means.row(static_cast<Eigen::Index>(c)) /= static_cast<double>(fit.counts[c]);
  }
  fit.within = Eigen::MatrixXd::Zero(d, d);
  for (std::size_t i = 0; i < y.size(); ++i) {
    Eigen::RowVectorXd diff = x.row(static_cast<Eigen::Index>(i)) - fit.means.row(static_cast<Eigen::Index>(y[i]));
    fit.within += diff.transpose() * diff;
  }
  double dof = static_cast<double>(y.size()) - static_cast<double>(present);
  fit.within /= std::max(dof, 1.0);
  return fit;
}

class LinearDiscriminant final : public TrainedModel {
 public:
  LinearDiscriminant(const Eigen::MatrixXd& x, std::span<const std::size_t> y, std::size_t k)
      : TrainedModel(k) {
    auto fit = within_class_scatter(x, y, k);
    const Eigen::Index d = x.cols();
    Eigen::LDLT<Eigen::MatrixXd> ldlt(fit.within);
    const Eigen::VectorXd pivots = ldlt.vectorD();
    const double largest = pivots.cwiseAbs().maxCoeff();
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || !(pivots.minCoeff() > 1e-12 * std::max(largest, 1e-300))) {
      double shrink = 1e-6 * std::max(fit.within.trace() / static_cast<double>(d), 1.0);
      ldlt.compute(fit.within + shrink * Eigen::MatrixXd::Identity(d, d));
      regularized_fallback_ = true;
    }
    weights_ = ldlt.solve(fit.means.transpose());  // d x k
    bias_ = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(k), -std::numeric_limits<double>::infinity());
    for (std::size_t c = 0; c < k; ++c) {
      if (fit.counts[c] == 0) continue;
      auto ci = static_cast<Eigen::Index>(c);
      bias_(ci) = -0.5 * fit.means.row(ci).dot(weights_.col(ci)) +
                  std::log(static_cast<double>(fit.counts[c]) / static_cast<double>(y.size()));
    }
  }

  Eigen::VectorXd score(const Eigen::VectorXd& q) const override {
    Eigen::VectorXd logits = weights_.transpose() * q + bias_;
    return softmax(logits);
  }

 private:
  Eigen::MatrixXd weights_;
  Eigen::VectorXd bias_;
};

// ---------------------------------------------------------------------------

// Multinomial logistic regression, full-batch gradient descent from zero.
class LogisticRegression final : public TrainedModel {
 public:
  LogisticRegression(const ClassifierKind& kind, const Eigen::MatrixXd& x, std::span<const std::size_t> y,
                     std::size_t k)
      : TrainedModel(k) {
    const Eigen::Index n = x.rows();
    const Eigen::Index d = x.cols();
    const auto kk = static_cast<Eigen::Index>(k);
    Eigen::MatrixXd onehot = Eigen::MatrixXd::Zero(n, kk);
    for (Eigen::Index i = 0; i < n; ++i) onehot(i, static_cast<Eigen::Index>(y[static_cast<std::size_t>(i)])) = 1.0;
    weights_ = Eigen::MatrixXd::Zero(d, kk);
    bias_ = Eigen::RowVectorXd::Zero(kk);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t it = 0; it < kind.iterations; ++it) {
      Eigen::MatrixXd logits = (x * weights_).rowwise() + bias_;
      Eigen::VectorXd row_max = logits.rowwise().maxCoeff();
      Eigen::MatrixXd p = (logits.colwise() - row_max).array().exp();
      p.array().colwise() /= p.rowwise().sum().array();
      Eigen::MatrixXd residual = p - onehot;
      Eigen::MatrixXd grad_w = x.transpose() * residual * inv_n + kind.regularization * inv_n * weights_;
      Eigen::RowVectorXd grad_b = residual.colwise().sum() * inv_n;
      weights_ -= kind.learning_rate * grad_w;
      bias_ -= kind.learning_rate * grad_b;
    }
  }

  Eigen::VectorXd score(const Eigen::VectorXd& q) const override {
    Eigen::VectorXd logits = weights_.transpose() * q + bias_.transpose();
    return softmax(logits);
  }

 private:
  Eigen::MatrixXd weights_;
  Eigen::RowVectorXd bias_;
};

// ---------------------------------------------------------------------------

// One-vs-rest least squares on {-1, +1} targets with an unpenalized
// intercept. Scores are the softmax of the decision values.
class RidgeClassifier final : public TrainedModel {
 public:
  RidgeClassifier(const ClassifierKind& kind, const Eigen::MatrixXd& x, std::span<const std::size_t> y,
                  std::size_t k)
      : TrainedModel(k) {
    const Eigen::Index n = x.rows();
    const Eigen::Index d = x.cols();
    const auto kk = static_cast<Eigen::Index>(k);
    Eigen::MatrixXd targets = Eigen::MatrixXd::Constant(n, kk, -1.0);
    for (Eigen::Index i = 0; i < n; ++i) targets(i, static_cast<Eigen::Index>(y[static_cast<std::size_t>(i)])) = 1.0;
    Eigen::RowVectorXd x_mean = x.colwise().mean();
    Eigen::RowVectorXd t_mean = targets.colwise().mean();
    Eigen::MatrixXd xc = x.rowwise() - x_mean;
    Eigen::MatrixXd tc = targets.rowwise() - t_mean;
    Eigen::MatrixXd gram = xc.transpose() * xc + kind.regularization * Eigen::MatrixXd::Identity(d, d);
    weights_ = gram.ldlt().solve(xc.transpose() * tc);
    bias_ = t_mean - x_mean * weights_;
  }

  Eigen::VectorXd score(const Eigen::VectorXd& q) const override {
    Eigen::VectorXd decision = weights_.transpose() * q + bias_.transpose();
    return softmax(decision);
  }

 private:
  Eigen::MatrixXd weights_;
  Eigen::RowVectorXd bias_;
};

}  // namespace

ClassifierKind ClassifierKind::defaults(ClassifierVariant variant) {
  ClassifierKind kind;
  kind.variant = variant;
  if (variant == ClassifierVariant::logistic_regression) kind.regularization = 0.01;
  return kind;
}

std::string ClassifierKind::name() const {
  switch (variant) {
    case ClassifierVariant::decision_tree: return "DT";
    case ClassifierVariant::knn: return "KNN";
    case ClassifierVariant::gaussian_nb: return "NB";
    case ClassifierVariant::lda: return "LDA";
    case ClassifierVariant::logistic_regression: return "LR";
    case ClassifierVariant::ridge: return "Ridge";
  }
  return "?";
}

void ClassifierKind::validate() const {
  if (variant == ClassifierVariant::decision_tree && (max_depth < 1 || min_leaf < 1)) {
    throw ValidationError("decision tree needs max_depth >= 1 and min_leaf >= 1");
  }
  if (variant == ClassifierVariant::knn && neighbors < 1) throw ValidationError("knn needs k >= 1");
  if ((variant == ClassifierVariant::ridge || variant == ClassifierVariant::logistic_regression) &&
      (!std::isfinite(regularization) || regularization < 0.0)) {
    throw ValidationError("regularization must be finite and >= 0");
  }
  if (variant == ClassifierVariant::logistic_regression &&
      (iterations < 1 || !(learning_rate > 0.0) || !std::isfinite(learning_rate))) {
    throw ValidationError("logistic regression needs iterations >= 1 and a positive learning rate");
  }
}

std::string variant_key(ClassifierVariant variant) {
  switch (variant) {
    case ClassifierVariant::decision_tree: return "decision_tree";
    case ClassifierVariant::knn: return "knn";
    case ClassifierVariant::gaussian_nb: return "gaussian_nb";
    case ClassifierVariant::lda: return "lda";
    case ClassifierVariant::logistic_regression: return "logistic_regression";
    case ClassifierVariant::ridge: return "ridge";
  }
  return "decision_tree";
}

ClassifierVariant classifier_variant_from_string(const std::string& text) {
  std::string t = text;
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "dt" || t == "decision_tree") return ClassifierVariant::decision_tree;
  if (t == "knn") return ClassifierVariant::knn;
  if (t == "nb" || t == "gaussian_nb") return ClassifierVariant::gaussian_nb;
  if (t == "lda") return ClassifierVariant::lda;
  if (t == "lr" || t == "logistic_regression") return ClassifierVariant::logistic_regression;
  if (t == "ridge") return ClassifierVariant::ridge;
  throw ValidationError("unknown classifier '" + text + "'");
}

std::vector<ClassifierKind> default_ensemble() {
  std::vector<ClassifierKind> kinds;
  for (auto v : {ClassifierVariant::decision_tree, ClassifierVariant::knn, ClassifierVariant::lda,
                 ClassifierVariant::logistic_regression, ClassifierVariant::ridge,
                 ClassifierVariant::gaussian_nb}) {
    kinds.push_back(ClassifierKind::defaults(v));
  }
  return kinds;
}

LabeledData labeled_data(const NormalizedDataset& dataset, std::string name) {
  return labeled_data(dataset, std::move(name), dataset.class_palette());
}

LabeledData labeled_data(const NormalizedDataset& dataset, std::string name,
                         const std::vector<std::string>& classes) {
  LabeledData data;
  data.name = std::move(name);
  data.classes = classes;
  data.features.resize(static_cast<Eigen::Index>(dataset.size()), static_cast<Eigen::Index>(dataset.dimension()));
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto& c = dataset.cases()[i];
    for (std::size_t a = 0; a < c.values.size(); ++a) {
      data.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a)) = c.values[a];
    }
    auto it = std::find(classes.begin(), classes.end(), c.label);
    if (it == classes.end()) {
      throw ValidationError("label '" + c.label + "' of dataset '" + data.name +
                            "' is not one of the training classes");
    }
    data.labels.push_back(static_cast<std::size_t>(it - classes.begin()));
  }
  return data;
}

std::size_t TrainedModel::predict(const Eigen::VectorXd& x) const {
  Eigen::VectorXd s = score(x);
  std::size_t best = 0;
  for (Eigen::Index c = 1; c < s.size(); ++c) {
    if (s(c) > s(static_cast<Eigen::Index>(best))) best = static_cast<std::size_t>(c);
  }
  return best;
}

std::unique_ptr<TrainedModel> train_classifier(const ClassifierKind& kind, const Eigen::MatrixXd& features,
                                               std::span<const std::size_t> labels,
                                               std::size_t num_classes) {
  kind.validate();
  if (static_cast<std::size_t>(features.rows()) != labels.size()) {
    throw ValidationError("feature rows and labels differ in length");
  }
  auto counts = class_counts(labels, num_classes);
  std::size_t present = static_cast<std::size_t>(std::count_if(counts.begin(), counts.end(),
                                                               [](std::size_t c) { return c > 0; }));
  if (present < 2) throw ValidationError("training needs at least two classes present");
  if (kind.variant == ClassifierVariant::lda || kind.variant == ClassifierVariant::gaussian_nb) {
    for (std::size_t c : counts) {
      if (c == 1) throw ValidationError(kind.name() + " needs at least two cases per class");
    }
  }
  switch (kind.variant) {
    case ClassifierVariant::decision_tree:
      return std::make_unique<DecisionTree>(kind, features, labels, num_classes);
    case ClassifierVariant::knn:
      return std::make_unique<NearestNeighbors>(kind, features, labels, num_classes);
    case ClassifierVariant::gaussian_nb:
      return std::make_unique<GaussianNaiveBayes>(features, labels, num_classes);
    case ClassifierVariant::lda:
      return std::make_unique<LinearDiscriminant>(features, labels, num_classes);
    case ClassifierVariant::logistic_regression:
      return std::make_unique<LogisticRegression>(kind, features, labels, num_classes);
    case ClassifierVariant::ridge:
      return std::make_unique<RidgeClassifier>(kind, features, labels, num_classes);
  }
  throw ValidationError("unknown classifier variant");
}

std::unique_ptr<TrainedModel> train_classifier(const ClassifierKind& kind, const LabeledData& data) {
  return train_classifier(kind, data.features, data.labels, data.classes.size());
}

std::vector<double> lda_dcc_coefficients(const NormalizedDataset& dataset) {
  auto data = labeled_data(dataset, "lda");
  const std::size_t k = data.classes.size();
  if (k < 2) throw ValidationError("LDA coefficients need at least two classes");
  auto fit = within_class_scatter(data.features, data.labels, k);
  const Eigen::Index d = data.features.cols();

  Eigen::RowVectorXd grand = data.features.colwise().mean();
  Eigen::MatrixXd between = Eigen::MatrixXd::Zero(d, d);
  for (std::size_t c = 0; c < k; ++c) {
    Eigen::RowVectorXd diff = fit.means.row(static_cast<Eigen::Index>(c)) - grand;
    between += static_cast<double>(fit.counts[c]) * diff.transpose() * diff;
  }
  Eigen::MatrixXd within = fit.within + 1e-9 * Eigen::MatrixXd::Identity(d, d);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(between, within);
  Eigen::VectorXd direction = solver.eigenvectors().col(d - 1);

  Eigen::VectorXd magnitude = direction.cwiseAbs();
  double mean = magnitude.mean();
  std::vector<double> coefficients(static_cast<std::size_t>(d), 1.0);
  if (mean <= 0.0 || !std::isfinite(mean)) return coefficients;
  for (Eigen::Index a = 0; a < d; ++a) {
    coefficients[static_cast<std::size_t>(a)] = std::max(magnitude(a) / mean, 0.05);
  }
  return coefficients;
}

}  // namespace glc
