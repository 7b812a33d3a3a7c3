#include "glc/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "glc/error.hpp"
#include "glc/random.hpp"

namespace glc {

std::string to_string(ReviewDecision decision) {
  switch (decision) {
    case ReviewDecision::accept: return "accept";
    case ReviewDecision::modify: return "modify";
    case ReviewDecision::escalate: return "escalate";
  }
  return "accept";
}

ReviewDecision review_decision_from_string(const std::string& text) {
  if (text == "accept") return ReviewDecision::accept;
  if (text == "modify") return ReviewDecision::modify;
  if (text == "escalate") return ReviewDecision::escalate;
  throw ValidationError("unknown review decision '" + text + "'");
}

void AutomaticPolicyConfig::validate() const {
  if (count_per_class < 1) throw ValidationError("count_per_class must be >= 1");
  if (!(tolerance >= 0.0)) throw ValidationError("tolerance must be >= 0");
  if (rotation.empty()) throw ValidationError("GLC rotation is empty");
}

AutomaticPolicy::AutomaticPolicy(AutomaticPolicyConfig config) : config_(std::move(config)) {
  config_.validate();
}

std::vector<SdgStrategy> AutomaticPolicy::per_class(const NormalizedDataset& dataset) const {
  std::vector<SdgStrategy> strategies;
  for (const auto& cls : dataset.class_palette()) {
    strategies.push_back(InBounds{cls, config_.count_per_class, config_.mode});
  }
  return strategies;
}

std::vector<SdgStrategy> AutomaticPolicy::choose_generation(const DecisionContext& context) {
  return per_class(*context.current);
}

std::vector<SdgStrategy> AutomaticPolicy::choose_outside_lp(const DecisionContext& context) {
  return per_class(*context.current);
}

bool AutomaticPolicy::acceptable(const EvalReport& benchmark, const EvalReport& candidate, double tolerance) {
  for (const auto& row : candidate.rows) {
    const auto& base = benchmark.row(row.kind.name());
    if (row.exp_mean < base.exp_mean - tolerance) return false;
  }
  return true;
}

ReviewDecision AutomaticPolicy::review(const DecisionContext& context) {
  if (acceptable(*context.benchmark, *context.candidate, config_.tolerance)) {
    rejections_ = 0;
    return ReviewDecision::accept;
  }
  return rejections_++ % 2 == 0 ? ReviewDecision::escalate : ReviewDecision::modify;
}

std::optional<GlcKind> AutomaticPolicy::choose_next_glc(const DecisionContext& context) {
  auto it = std::find(config_.rotation.begin(), config_.rotation.end(), context.glc);
  if (it == config_.rotation.end() || std::next(it) == config_.rotation.end()) return std::nullopt;
  return *std::next(it);
}

void PipelineConfig::validate() const {
  eval.validate();
  if (classifiers.empty()) throw ValidationError("pipeline needs at least one classifier");
  for (const auto& k : classifiers) k.validate();
  if (max_iterations < 1) throw ValidationError("max_iterations must be >= 1");
  if (min_support < 1) throw ValidationError("min_support must be >= 1");
}

const EvalReport& SessionLog::final_evaluation() const {
  const EvalReport* last = &benchmark;
  const EvalReport* pending = nullptr;
  for (const auto& s : steps) {
    if (s.step == 7 && s.evaluation) pending = &*s.evaluation;
    if (s.step == 8 && s.decision == "accept" && pending) last = pending;
  }
  return *last;
}

bool step_transition_allowed(int from, int to) {
  switch (from) {
    case 1: case 2: case 3: case 4: case 5: return to == from + 1;
    case 6: return to == 7;
    case 7: return to == 8;
    case 8: return to == 6 || to == 9 || to == 11 || to == 0;
    case 9: return to == 7;
    case 11: return to == 1 || to == 0;
    default: return false;
  }
}

namespace {

class Runner {
 public:
  Runner(const NormalizedDataset& dataset, DecisionSource& policy, const PipelineConfig& config,
         const ProgressFn& progress)
      : policy_(policy), config_(config), progress_(progress), exploration_(dataset.real_only()) {
    log_.versions.push_back(dataset);
  }

  SessionLog run() {
    log_.benchmark = evaluate(log_.versions.front());
    GlcKind glc = config_.initial_glc;
    while (true) {
      log_.glc_sequence.push_back(glc);
      const NormalizedDataset current = log_.versions[log_.final_version];

      Layout layout = compute_layout(current, LayoutConfig::defaults(glc, current.dimension()));
      record(1, glc, log_.final_version, std::to_string(layout.glyphs.size()) + " glyphs in " + to_string(glc));

      PurityReport report = rank_regions_by_purity(current, config_.min_support);
      std::size_t pure = static_cast<std::size_t>(
          std::count_if(report.regions.begin(), report.regions.end(), [](const auto& r) { return r.pure(); }));
      record(2, glc, log_.final_version, std::to_string(report.regions.size()) + " regions over " +
                                              std::to_string(current.dimension()) + " coordinates");
      record(3, glc, log_.final_version, "ranked by purity then support");
      record(4, glc, log_.final_version, std::to_string(pure) + " most-pure regions");
      record(5, glc, log_.final_version, std::to_string(report.lp_case_ids.size()) + " least-pure cases");

      DecisionContext context;
      context.glc = glc;
      context.current = &current;
      context.report = &report;
      context.benchmark = &log_.benchmark;

      int next = 6;
      bool accepted = false;
      while (!accepted) {
        context.step = next;
        context.evaluations = evaluations_;
        context.candidate = nullptr;
        auto strategies = next == 6 ? policy_.choose_generation(context) : policy_.choose_outside_lp(context);
        auto [candidate, added, dropped] = generate(current, report, strategies, next == 6);
        log_.versions.push_back(std::move(candidate));
        std::size_t candidate_version = log_.versions.size() - 1;
        std::ostringstream summary;
        summary << added << " synthetic cases kept, " << dropped << " dropped";
        if (next == 9) summary << "; labels kept from the generating class";
        record(next, glc, candidate_version, summary.str(), join_names(strategies));

        EvalReport evaluation = evaluate(log_.versions[candidate_version]);
        ++evaluations_;
        record(7, glc, candidate_version, eval_summary(evaluation));
        log_.steps.back().evaluation = evaluation;

        context.step = 8;
        context.evaluations = evaluations_;
        context.candidate = &evaluation;
        context.candidate_added = added;
        ReviewDecision decision = policy_.review(context);
        record(8, glc, candidate_version, "review of version " + std::to_string(candidate_version),
               to_string(decision));

        if (decision == ReviewDecision::accept) {
          log_.final_version = candidate_version;
          accepted = true;
        } else if (evaluations_ >= config_.max_iterations) {
          log_.termination = "iteration bound reached";
          return std::move(log_);
        } else {
          next = decision == ReviewDecision::modify ? 6 : 9;
        }
      }

      const NormalizedDataset& accepted_version = log_.versions[log_.final_version];
      context.step = 11;
      context.current = &accepted_version;
      context.candidate = nullptr;
      auto next_glc = policy_.choose_next_glc(context);
      record(11, glc, log_.final_version, next_glc ? "switch to " + to_string(*next_glc) : "finish",
             next_glc ? to_string(*next_glc) : "end");
      if (!next_glc) {
        log_.termination = "policy finished";
        return std::move(log_);
      }
      if (evaluations_ >= config_.max_iterations) {
        log_.termination = "iteration bound reached";
        return std::move(log_);
      }
      glc = *next_glc;
    }
  }

 private:
  struct Generated {
    NormalizedDataset dataset;
    std::size_t added = 0;
    std::size_t dropped = 0;
  };

  Generated generate(const NormalizedDataset& current, const PurityReport& report,
                     const std::vector<SdgStrategy>& strategies, bool label_in_pure_areas) {
    NormalizedDataset extended = current;
    std::size_t added = 0;
    std::size_t dropped = 0;
    for (const auto& strategy : strategies) {
      SdgBatch batch = glc::generate(extended, strategy, derive_seed(config_.seed, draws_++));
      std::vector<CaseRecord> kept;
      if (label_in_pure_areas) {
        std::vector<std::vector<double>> vectors;
        for (const auto& c : batch.cases) vectors.push_back(c.values);
        auto labels = auto_label(report, vectors);
        for (std::size_t i = 0; i < batch.cases.size(); ++i) {
          if (!labels[i]) continue;
          CaseRecord c = batch.cases[i];
          c.label = *labels[i];
          kept.push_back(std::move(c));
        }
      } else {
        for (const auto& c : batch.cases) {
          if (inside_pure_region(report, c.values)) kept.push_back(c);
        }
      }
      dropped += batch.cases.size() - kept.size();
      added += kept.size();
      batch.cases = std::move(kept);
      extended = extend_dataset(extended, batch);
    }
    return {std::move(extended), added, dropped};
  }

  EvalReport evaluate(const NormalizedDataset& train) {
    EvalConfig eval = config_.eval;
    eval.train_name = "version " + std::to_string(&train - log_.versions.data());
    eval.exploration_name = "real cases of version 0";
    auto report = monte_carlo_cv(eval, train, exploration_, config_.classifiers);
    if (progress_) progress_(std::min(1.0, static_cast<double>(evaluations_ + 1) /
                                               static_cast<double>(config_.max_iterations + 1)));
    return report;
  }

  void record(int step, GlcKind glc, std::size_t version, std::string summary,
              std::optional<std::string> decision = std::nullopt) {
    if (!log_.steps.empty() && !step_transition_allowed(log_.steps.back().step, step)) {
      throw Error("internal: step " + std::to_string(log_.steps.back().step) + " -> " + std::to_string(step));
    }
    log_.steps.push_back({step, glc, version, std::move(summary), std::move(decision), std::nullopt});
  }

  static std::string join_names(const std::vector<SdgStrategy>& strategies) {
    std::string out;
    for (const auto& s : strategies) {
      if (!out.empty()) out += ",";
      out += strategy_name(s);
    }
    return out.empty() ? "none" : out;
  }

  static std::string eval_summary(const EvalReport& report) {
    std::ostringstream out;
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
      if (i) out << ' ';
      out << report.rows[i].kind.name() << '=' << format_double(std::round(report.rows[i].exp_mean * 1e4) / 1e4);
    }
    return out.str();
  }

  DecisionSource& policy_;
  const PipelineConfig& config_;
  const ProgressFn& progress_;
  NormalizedDataset exploration_;
  SessionLog log_;
  std::size_t evaluations_ = 0;
  std::uint64_t draws_ = 0;
};

}  // namespace

SessionLog run_sdg_adl(const NormalizedDataset& dataset, DecisionSource& policy, const PipelineConfig& config,
                       const ProgressFn& progress) {
  config.validate();
  if (dataset.empty()) throw ValidationError("pipeline needs a non-empty dataset");
  return Runner(dataset, policy, config, progress).run();
}

std::string session_log_transcript(const SessionLog& log) {
  std::ostringstream out;
  for (const auto& s : log.steps) {
    out << "step " << s.step << " [" << to_string(s.glc) << "] v" << s.dataset_version << ": " << s.summary;
    if (s.decision) out << " -> " << *s.decision;
    out << '\n';
  }
  out << "GLC sequence:";
  for (auto g : log.glc_sequence) out << ' ' << to_string(g);
  out << "\nfinal version " << log.final_version << " (" << log.final_dataset().size() << " cases): "
      << log.termination << '\n';
  return out.str();
}

}  // namespace glc
