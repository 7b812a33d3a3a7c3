#include "glc/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "glc/error.hpp"
#include "glc/json_io.hpp"
#include "glc/random.hpp"

namespace glc {

namespace {

struct CycleResult {
  std::vector<double> cv;   // per classifier
  std::vector<double> exp;
  std::vector<double> auc;
  std::vector<bool> fallback;
};

double mean(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Population standard deviation.
double stddev(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double m = mean(v);
  double sum = 0.0;
  for (double x : v) sum += (x - m) * (x - m);
  return std::sqrt(sum / static_cast<double>(v.size()));
}

Eigen::MatrixXd take_rows(const Eigen::MatrixXd& m, const std::vector<std::size_t>& rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = m.row(static_cast<Eigen::Index>(rows[i]));
  return out;
}

double accuracy(const TrainedModel& model, const Eigen::MatrixXd& x, std::span<const std::size_t> y) {
  std::size_t hits = 0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    if (model.predict(x.row(i).transpose()) == y[static_cast<std::size_t>(i)]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(x.rows());
}

CycleResult run_cycle(const EvalConfig& config, std::size_t cycle, const LabeledData& train,
                      const LabeledData& exploration, const std::vector<ClassifierKind>& kinds) {
  const std::size_t k = train.classes.size();
  auto fold_of = stratified_folds(train.labels, k, config.folds, derive_seed(config.master_seed, cycle));

  CycleResult result;
  result.cv.assign(kinds.size(), 0.0);
  result.fallback.assign(kinds.size(), false);
  for (std::size_t f = 0; f < config.folds; ++f) {
    std::vector<std::size_t> fit_rows;
    std::vector<std::size_t> held_rows;
    for (std::size_t i = 0; i < fold_of.size(); ++i) (fold_of[i] == f ? held_rows : fit_rows).push_back(i);
    Eigen::MatrixXd fit_x = take_rows(train.features, fit_rows);
    Eigen::MatrixXd held_x = take_rows(train.features, held_rows);
    std::vector<std::size_t> fit_y;
    std::vector<std::size_t> held_y;
    for (std::size_t r : fit_rows) fit_y.push_back(train.labels[r]);
    for (std::size_t r : held_rows) held_y.push_back(train.labels[r]);
    for (std::size_t c = 0; c < kinds.size(); ++c) {
      auto model = train_classifier(kinds[c], fit_x, fit_y, k);
      result.cv[c] += accuracy(*model, held_x, held_y) / static_cast<double>(config.folds);
      result.fallback[c] = result.fallback[c] || model->regularized_fallback();
    }
  }

  for (const auto& kind : kinds) {
    auto model = train_classifier(kind, train);
    result.exp.push_back(accuracy(*model, exploration.features, exploration.labels));
    std::vector<Eigen::VectorXd> scores;
    scores.reserve(exploration.size());
    for (Eigen::Index i = 0; i < exploration.features.rows(); ++i) {
      scores.push_back(model->score(exploration.features.row(i).transpose()));
    }
    result.auc.push_back(compute_auc(scores, exploration.labels, k).value);
    std::size_t c = result.exp.size() - 1;
    result.fallback[c] = result.fallback[c] || model->regularized_fallback();
  }
  return result;
}

std::string fixed2(double v) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(2) << v;
  return out.str();
}

const std::vector<std::string>& columns() {
  static const std::vector<std::string> names = {"Model",           "CV Mean Acc.",    "CV STD of Acc.",
                                                 "Exp. Mean Acc.",  "Exp. STD of Acc.", "Best AUC",
                                                 "Worst AUC"};
  return names;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

void EvalConfig::validate() const {
  if (cycles < 1) throw ValidationError("cycles must be >= 1");
  if (folds < 2) throw ValidationError("folds must be >= 2");
}

const EvalRow& EvalReport::row(const std::string& model) const {
  for (const auto& r : rows) {
    if (r.kind.name() == model || variant_key(r.kind.variant) == model) return r;
  }
  throw NotFoundError("no report row for model '" + model + "'");
}

std::vector<std::size_t> stratified_folds(std::span<const std::size_t> labels, std::size_t num_classes,
                                          std::size_t folds, std::uint64_t seed) {
  if (folds < 1) throw ValidationError("folds must be >= 1");
  Rng rng(seed);
  std::vector<std::vector<std::size_t>> by_class(num_classes);
  for (std::size_t i = 0; i < labels.size(); ++i) by_class.at(labels[i]).push_back(i);
  std::vector<std::size_t> fold_of(labels.size(), 0);
  std::size_t offset = 0;
  for (auto& members : by_class) {
    rng.shuffle(std::span<std::size_t>(members));
    for (std::size_t i : members) fold_of[i] = offset++ % folds;
  }
  return fold_of;
}

AucResult compute_auc(const std::vector<Eigen::VectorXd>& scores, std::span<const std::size_t> labels,
                      std::size_t num_classes) {
  if (num_classes < 2) throw ValidationError("AUC needs at least two classes");
  if (scores.size() != labels.size()) throw ValidationError("scores and labels differ in length");
  AucResult result;
  double sum = 0.0;
  std::size_t used = 0;
  const std::size_t n = labels.size();
  std::vector<std::size_t> order(n);
  std::vector<double> ranks(n);
  for (std::size_t c = 0; c < num_classes; ++c) {
    std::size_t positives = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), c));
    std::size_t negatives = n - positives;
    if (positives == 0 || negatives == 0) {
      result.skipped_classes.push_back(c);
      continue;
    }
    auto s = [&](std::size_t i) { return scores[i](static_cast<Eigen::Index>(c)); };
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return s(a) < s(b); });
    // Midranks for ties.
    for (std::size_t i = 0; i < n;) {
      std::size_t j = i;
      while (j + 1 < n && s(order[j + 1]) == s(order[i])) ++j;
      double rank = 0.5 * static_cast<double>(i + j) + 1.0;
      for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = rank;
      i = j + 1;
    }
    double rank_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (labels[i] == c) rank_sum += ranks[i];
    }
    double p = static_cast<double>(positives);
    double u = rank_sum - p * (p + 1.0) / 2.0;
    sum += u / (p * static_cast<double>(negatives));
    ++used;
  }
  if (used == 0) throw ValidationError("AUC undefined: no class has both positive and negative examples");
  result.value = sum / static_cast<double>(used);
  return result;
}

EvalReport monte_carlo_cv(const EvalConfig& config, const NormalizedDataset& train,
                          const NormalizedDataset& exploration, const std::vector<ClassifierKind>& kinds,
                          const ProgressFn& progress) {
  config.validate();
  for (const auto& kind : kinds) kind.validate();
  if (exploration.empty()) throw ValidationError("exploration dataset is empty");
  if (train.dimension() != exploration.dimension()) {
    throw ValidationError("training and exploration datasets differ in dimension");
  }
  LabeledData train_data = labeled_data(train, config.train_name);
  LabeledData explore_data = labeled_data(exploration, config.exploration_name, train_data.classes);
  const std::size_t k = train_data.classes.size();
  if (k < 2) throw ValidationError("training dataset needs at least two classes");
  std::vector<std::size_t> counts(k, 0);
  for (std::size_t y : train_data.labels) counts[y]++;
  std::size_t smallest = *std::min_element(counts.begin(), counts.end());
  if (config.folds > smallest) {
    throw ValidationError("stratification infeasible: " + std::to_string(config.folds) +
                          " folds but the smallest class has " + std::to_string(smallest) + " cases");
  }

  std::vector<CycleResult> cycles(config.cycles);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> finished{0};
  std::mutex progress_mutex;
  std::exception_ptr failure;
  auto worker = [&] {
    for (std::size_t c = next++; c < config.cycles; c = next++) {
      try {
        cycles[c] = run_cycle(config, c, train_data, explore_data, kinds);
      } catch (...) {
        std::lock_guard lock(progress_mutex);
        if (!failure) failure = std::current_exception();
        next = config.cycles;
        return;
      }
      std::size_t done = ++finished;
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(static_cast<double>(done) / static_cast<double>(config.cycles));
      }
    }
  };
  std::size_t threads = config.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : config.threads;
  threads = std::min(threads, config.cycles);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  EvalReport report;
  report.train_name = config.train_name;
  report.exploration_name = config.exploration_name;
  report.cycles = config.cycles;
  report.folds = config.folds;
  report.master_seed = config.master_seed;
  report.classes = train_data.classes;

  std::vector<std::string> skipped;
  {
    std::vector<std::size_t> present(k, 0);
    for (std::size_t y : explore_data.labels) present[y]++;
    for (std::size_t c = 0; c < k; ++c) {
      if (present[c] == 0 || present[c] == explore_data.size()) skipped.push_back(train_data.classes[c]);
    }
  }
  for (std::size_t m = 0; m < kinds.size(); ++m) {
    std::vector<double> cv;
    std::vector<double> exp;
    std::vector<double> auc;
    bool fallback = false;
    for (const auto& cycle : cycles) {
      cv.push_back(cycle.cv[m]);
      exp.push_back(cycle.exp[m]);
      auc.push_back(cycle.auc[m]);
      fallback = fallback || cycle.fallback[m];
    }
    EvalRow row;
    row.kind = kinds[m];
    row.cv_mean = mean(cv);
    row.cv_std = stddev(cv);
    row.exp_mean = mean(exp);
    row.exp_std = stddev(exp);
    row.best_auc = *std::max_element(auc.begin(), auc.end());
    row.worst_auc = *std::min_element(auc.begin(), auc.end());
    row.exploration_varies = std::any_of(exp.begin(), exp.end(), [&](double v) { return v != exp.front(); });
    row.regularized_fallback = fallback;
    row.auc_skipped_classes = skipped;
    report.rows.push_back(std::move(row));
  }
  return report;
}

ReportFormat report_format_from_string(const std::string& text) {
  if (text == "text" || text == "txt") return ReportFormat::text;
  if (text == "csv") return ReportFormat::csv;
  if (text == "structured" || text == "json") return ReportFormat::structured;
  throw ValidationError("unknown report format '" + text + "'");
}

std::string render_report(const EvalReport& report, ReportFormat format) {
  std::ostringstream out;
  switch (format) {
    case ReportFormat::text: {
      out << "Model Performance over " << report.cycles << " independent cycles with " << report.folds
          << "-Fold Cross-Validation\n";
      out << "Training Dataset: " << report.train_name << '\n';
      out << "Exploration Dataset: " << report.exploration_name << '\n';
      std::vector<std::vector<std::string>> table{columns()};
      for (const auto& r : report.rows) {
        table.push_back({r.kind.name(), fixed2(r.cv_mean), fixed2(r.cv_std), fixed2(r.exp_mean),
                         fixed2(r.exp_std), fixed2(r.best_auc), fixed2(r.worst_auc)});
      }
      std::vector<std::size_t> width(columns().size(), 0);
      for (const auto& line : table) {
        for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
      }
      for (std::size_t l = 0; l < table.size(); ++l) {
        std::string line;
        for (std::size_t c = 0; c < table[l].size(); ++c) {
          if (c > 0) line += " | ";
          std::string cell = table[l][c];
          line += c == 0 ? cell + std::string(width[c] - cell.size(), ' ')
                         : std::string(width[c] - cell.size(), ' ') + cell;
        }
        out << line << '\n';
        if (l == 0) {
          std::string rule;
          for (std::size_t c = 0; c < width.size(); ++c) {
            if (c > 0) rule += "-+-";
            rule += std::string(width[c], '-');
          }
          out << rule << '\n';
        }
      }
      for (const auto& r : report.rows) {
        if (r.exploration_varies) out << "note: " << r.kind.name() << " exploration accuracy varies across cycles\n";
        if (r.regularized_fallback) out << "note: " << r.kind.name() << " used a regularized scatter fallback\n";
      }
      break;
    }
    case ReportFormat::csv: {
      out << "# training=" << csv_field(report.train_name) << '\n';
      out << "# exploration=" << csv_field(report.exploration_name) << '\n';
      out << "# cycles=" << report.cycles << ",folds=" << report.folds << ",master_seed=" << report.master_seed
          << '\n';
      for (const auto& r : report.rows) out << "# " << r.kind.name() << ' ' << to_json_string(r.kind) << '\n';
      for (std::size_t c = 0; c < columns().size(); ++c) out << (c ? "," : "") << columns()[c];
      out << '\n';
      for (const auto& r : report.rows) {
        out << r.kind.name() << ',' << format_double(r.cv_mean) << ',' << format_double(r.cv_std) << ','
            << format_double(r.exp_mean) << ',' << format_double(r.exp_std) << ','
            << format_double(r.best_auc) << ',' << format_double(r.worst_auc) << '\n';
      }
      break;
    }
    case ReportFormat::structured: {
      nlohmann::json doc = report;
      out << doc.dump(2) << '\n';
      break;
    }
  }
  return out.str();
}

EvalReport parse_report(const std::string& structured) {
  try {
    return nlohmann::json::parse(structured).get<EvalReport>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed report document: ") + e.what());
  }
}

}  // namespace glc
