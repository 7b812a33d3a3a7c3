#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "glc/error.hpp"
#include "glc/evaluation.hpp"
#include "glc/random.hpp"
#include "support.hpp"

using namespace glc;
using glc::test::fixture;
using glc::test::iris;

namespace {

// Pairwise count over (positive, negative) pairs; ties count one half.
double mann_whitney(const std::vector<double>& score, const std::vector<bool>& positive) {
  double wins = 0.0;
  double pairs = 0.0;
  for (std::size_t i = 0; i < score.size(); ++i) {
    for (std::size_t j = 0; j < score.size(); ++j) {
      if (!positive[i] || positive[j]) continue;
      pairs += 1.0;
      if (score[i] > score[j]) wins += 1.0;
      if (score[i] == score[j]) wins += 0.5;
    }
  }
  return wins / pairs;
}

std::vector<Eigen::VectorXd> rows_of(const std::vector<std::vector<double>>& rows) {
  std::vector<Eigen::VectorXd> out;
  for (const auto& r : rows) out.push_back(Eigen::Map<const Eigen::VectorXd>(r.data(), static_cast<Eigen::Index>(r.size())));
  return out;
}

NormalizedDataset separable() {
  std::vector<std::vector<double>> rows;
  std::vector<std::string> labels;
  Rng rng(4);
  for (int i = 0; i < 60; ++i) {
    int cls = i % 3;
    double cx = cls == 1 ? 0.9 : 0.1;
    double cy = cls == 2 ? 0.9 : 0.1;
    rows.push_back({cx + rng.uniform(0.0, 0.05), cy + rng.uniform(0.0, 0.05)});
    labels.push_back(std::string(1, static_cast<char>('A' + cls)));
  }
  return fixture(rows, labels);
}

EvalConfig quick(std::size_t cycles, std::uint64_t seed) {
  EvalConfig c;
  c.cycles = cycles;
  c.folds = 10;
  c.master_seed = seed;
  return c;
}

}  // namespace

TEST_CASE("auc forced values") {
  std::vector<std::size_t> labels{0, 0, 1, 1, 2, 2};
  auto perfect = rows_of({{0.9, 0.05, 0.05}, {0.8, 0.1, 0.1}, {0.1, 0.8, 0.1},
                          {0.05, 0.9, 0.05}, {0.1, 0.1, 0.8}, {0.05, 0.05, 0.9}});
  CHECK(compute_auc(perfect, labels, 3).value == 1.0);
  std::vector<Eigen::VectorXd> flat(6, Eigen::VectorXd::Constant(3, 1.0 / 3.0));
  CHECK(compute_auc(flat, labels, 3).value == 0.5);
}

TEST_CASE("auc matches the pair-counting oracle") {
  Rng rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::size_t> labels{0, 1, 2, 0, 1, 2};
    rng.shuffle(std::span(labels));
    std::vector<std::vector<double>> raw(6, std::vector<double>(3));
    for (auto& r : raw) {
      // Coarse values so ties occur.
      for (double& v : r) v = std::round(rng.uniform() * 4.0) / 4.0 + 0.01;
      double s = r[0] + r[1] + r[2];
      for (double& v : r) v /= s;
    }
    double expect = 0.0;
    for (std::size_t c = 0; c < 3; ++c) {
      std::vector<double> col;
      std::vector<bool> pos;
      for (std::size_t i = 0; i < 6; ++i) {
        col.push_back(raw[i][c]);
        pos.push_back(labels[i] == c);
      }
      expect += mann_whitney(col, pos) / 3.0;
    }
    CHECK(compute_auc(rows_of(raw), labels, 3).value == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("auc is invariant under monotone transforms") {
  Rng rng(13);
  std::vector<std::size_t> labels;
  std::vector<std::vector<double>> raw;
  for (int i = 0; i < 40; ++i) {
    labels.push_back(static_cast<std::size_t>(i % 2));
    raw.push_back({rng.uniform(), rng.uniform()});
  }
  double base = compute_auc(rows_of(raw), labels, 2).value;
  for (auto& r : raw) {
    for (double& v : r) v = std::exp(3.0 * v) + 7.0;
  }
  CHECK(compute_auc(rows_of(raw), labels, 2).value == base);
}

TEST_CASE("auc skips absent classes") {
  std::vector<std::size_t> labels{0, 1, 0, 1};
  auto scores = rows_of({{0.7, 0.2, 0.1}, {0.2, 0.7, 0.1}, {0.6, 0.3, 0.1}, {0.1, 0.8, 0.1}});
  AucResult r = compute_auc(scores, labels, 3);
  CHECK(r.value == 1.0);
  CHECK(r.skipped_classes == std::vector<std::size_t>{2});
}

TEST_CASE("stratified folds keep class proportions") {
  LabeledData data = labeled_data(iris(), "iris");
  for (std::uint64_t seed : {0u, 1u, 99u}) {
    for (std::size_t folds : {3u, 7u, 10u}) {
      auto assignment = stratified_folds(data.labels, 3, folds, seed);
      REQUIRE(assignment.size() == 150);
      for (std::size_t cls = 0; cls < 3; ++cls) {
        for (std::size_t f = 0; f < folds; ++f) {
          double count = 0.0;
          for (std::size_t i = 0; i < 150; ++i) {
            if (data.labels[i] == cls && assignment[i] == f) count += 1.0;
          }
          CHECK(std::abs(count - 50.0 / double(folds)) <= 1.0);
        }
      }
    }
  }
  auto a = stratified_folds(data.labels, 3, 10, 5);
  CHECK(a == stratified_folds(data.labels, 3, 10, 5));
  CHECK(a != stratified_folds(data.labels, 3, 10, 6));
}

TEST_CASE("separable data scores perfectly") {
  NormalizedDataset d = separable();
  EvalReport r = monte_carlo_cv(quick(3, 1), d, d, default_ensemble());
  REQUIRE(r.rows.size() == 6);
  for (const auto& row : r.rows) {
    INFO(row.kind.name());
    CHECK(row.cv_mean == doctest::Approx(1.0));
    CHECK(row.cv_std == doctest::Approx(0.0));
    CHECK(row.exp_mean == doctest::Approx(1.0));
    CHECK(row.best_auc == 1.0);
    CHECK(row.worst_auc == 1.0);
  }
}

TEST_CASE("one cycle has zero spread and values stay in range") {
  EvalReport r = monte_carlo_cv(quick(1, 3), iris(), iris(), default_ensemble());
  for (const auto& row : r.rows) {
    CHECK(row.cv_std == 0.0);
    CHECK(row.exp_std == 0.0);
    for (double v : {row.cv_mean, row.exp_mean, row.best_auc, row.worst_auc}) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
    CHECK(row.best_auc == row.worst_auc);
  }
}

TEST_CASE("reports are reproducible and thread-count independent") {
  EvalConfig c = quick(6, 42);
  std::string a = render_report(monte_carlo_cv(c, iris(), iris(), default_ensemble()), ReportFormat::structured);
  std::string b = render_report(monte_carlo_cv(c, iris(), iris(), default_ensemble()), ReportFormat::structured);
  c.threads = 3;
  std::string t = render_report(monte_carlo_cv(c, iris(), iris(), default_ensemble()), ReportFormat::structured);
  CHECK(a == b);
  CHECK(a == t);
}

TEST_CASE("progress reaches completion") {
  std::vector<double> seen;
  monte_carlo_cv(quick(4, 0), iris(), iris(), {ClassifierKind::defaults(ClassifierVariant::knn)},
                 [&](double f) { seen.push_back(f); });
  REQUIRE(!seen.empty());
  CHECK(seen.back() == doctest::Approx(1.0));
  CHECK(std::is_sorted(seen.begin(), seen.end()));
}

TEST_CASE("harness preconditions") {
  NormalizedDataset small = fixture({{0.1}, {0.2}, {0.3}, {0.7}, {0.8}, {0.9}}, {"A", "A", "A", "B", "B", "B"});
  CHECK_THROWS_AS(monte_carlo_cv(quick(1, 0), small, small, default_ensemble()), ValidationError);
  EvalConfig c = quick(1, 0);
  c.folds = 3;
  CHECK_NOTHROW(monte_carlo_cv(c, small, small, {ClassifierKind::defaults(ClassifierVariant::knn)}));
  CHECK_THROWS_AS(monte_carlo_cv(c, small, small.with_cases({}), default_ensemble()), ValidationError);
  c.cycles = 0;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  NormalizedDataset stranger = fixture({{0.5}}, {"Z"});
  c.cycles = 1;
  CHECK_THROWS_AS(monte_carlo_cv(c, small, stranger, default_ensemble()), ValidationError);
}

TEST_CASE("exploration missing a class flags it as skipped in the auc") {
  NormalizedDataset d = iris();
  std::vector<CaseRecord> two;
  for (const auto& c : d.cases()) {
    if (c.label != "Virginica") two.push_back(c);
  }
  EvalReport r = monte_carlo_cv(quick(1, 0), d, d.with_cases(two),
                                {ClassifierKind::defaults(ClassifierVariant::lda)});
  CHECK(r.rows[0].auc_skipped_classes == std::vector<std::string>{"Virginica"});
}

TEST_CASE("text table layout") {
  EvalReport r = monte_carlo_cv(quick(2, 0), iris(), iris(), default_ensemble());
  r.train_name = "iris.csv";
  r.exploration_name = "iris-real.csv";
  std::string text = render_report(r, ReportFormat::text);
  CHECK(text.find("Model Performance over 2 independent cycles with 10-Fold Cross-Validation") != std::string::npos);
  CHECK(text.find("Training Dataset: iris.csv") != std::string::npos);
  CHECK(text.find("Exploration Dataset: iris-real.csv") != std::string::npos);
  CHECK(text.find("Model | CV Mean Acc. | CV STD of Acc. | Exp. Mean Acc. | Exp. STD of Acc. | Best AUC | Worst AUC") !=
        std::string::npos);
  CHECK(text.find("LDA ") != std::string::npos);

  EvalReport empty = r;
  empty.rows.clear();
  std::string header_only = render_report(empty, ReportFormat::text);
  CHECK(header_only.find("Worst AUC") != std::string::npos);
  CHECK(header_only.find("LDA") == std::string::npos);
}

TEST_CASE("structured and csv forms") {
  EvalReport r = monte_carlo_cv(quick(3, 8), iris(), iris(), default_ensemble());
  EvalReport back = parse_report(render_report(r, ReportFormat::structured));
  REQUIRE(back.rows.size() == r.rows.size());
  CHECK(back.cycles == r.cycles);
  CHECK(back.master_seed == r.master_seed);
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    CHECK(back.rows[i].kind.name() == r.rows[i].kind.name());
    CHECK(back.rows[i].cv_mean == r.rows[i].cv_mean);
    CHECK(back.rows[i].cv_std == r.rows[i].cv_std);
    CHECK(back.rows[i].exp_mean == r.rows[i].exp_mean);
    CHECK(back.rows[i].worst_auc == r.rows[i].worst_auc);
  }
  CHECK(render_report(back, ReportFormat::structured) == render_report(r, ReportFormat::structured));

  std::string csv = render_report(r, ReportFormat::csv);
  CHECK(csv.find("# cycles=3,folds=10,master_seed=8") != std::string::npos);
  CHECK(csv.find("Model,CV Mean Acc.,CV STD of Acc.,Exp. Mean Acc.,Exp. STD of Acc.,Best AUC,Worst AUC") !=
        std::string::npos);
  CHECK(csv.find(format_double(r.row("LDA").cv_mean)) != std::string::npos);

  CHECK(report_format_from_string("json") == ReportFormat::structured);
  CHECK_THROWS_AS(report_format_from_string("xml"), ValidationError);
  CHECK(&r.row("lda") == &r.row("LDA"));
  CHECK_THROWS_AS(r.row("SVM"), NotFoundError);
}
