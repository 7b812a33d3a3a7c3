#include "glc/json_io.hpp"

#include <charconv>

namespace glc {

namespace {

std::uint64_t parse_u64(const std::string& text) {
  std::uint64_t v = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size() || text.empty()) {
    throw ValidationError("'" + text + "' is not an unsigned integer");
  }
  return v;
}

template <class T>
void read_opt(const json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end() && !it->is_null()) out = it->template get<T>();
}

template <class T>
void write_opt(json& j, const char* key, const std::optional<T>& v) {
  j[key] = v ? json(*v) : json(nullptr);
}

template <class T>
void read_optional(const json& j, const char* key, std::optional<T>& out) {
  if (auto it = j.find(key); it != j.end() && !it->is_null()) {
    out = it->template get<T>();
  } else {
    out.reset();
  }
}

}  // namespace

// ---- core data ------------------------------------------------------------

void to_json(json& j, const CaseId& v) { j = v.value; }
void from_json(const json& j, CaseId& v) { v.value = j.get<std::uint64_t>(); }

void to_json(json& j, const Provenance& v) { j = to_string(v); }
void from_json(const json& j, Provenance& v) { v = provenance_from_string(j.get<std::string>()); }

void to_json(json& j, const CaseRecord& v) {
  j = json{{"id", v.id}, {"values", v.values}, {"label", v.label}, {"provenance", v.provenance}};
}
void from_json(const json& j, CaseRecord& v) {
  j.at("id").get_to(v.id);
  j.at("values").get_to(v.values);
  j.at("label").get_to(v.label);
  v.provenance = Provenance::real;
  read_opt(j, "provenance", v.provenance);
}

void to_json(json& j, const AttributeStats& v) {
  j = json{{"min", v.min}, {"max", v.max}, {"degenerate", v.degenerate}};
}
void from_json(const json& j, AttributeStats& v) {
  j.at("min").get_to(v.min);
  j.at("max").get_to(v.max);
  v.degenerate.assign(v.min.size(), false);
  read_opt(j, "degenerate", v.degenerate);
}

void to_json(json& j, const NormalizedDataset& v) {
  j = json{{"attributes", v.attribute_names()}, {"stats", v.stats()},     {"palette", v.class_palette()},
           {"next_id", v.next_id()},            {"cases", v.cases()}};
}
void from_json(const json& j, NormalizedDataset& v) {
  std::vector<std::string> palette;
  std::uint64_t next_id = 0;
  read_opt(j, "palette", palette);
  read_opt(j, "next_id", next_id);
  v = NormalizedDataset(j.at("attributes").get<std::vector<std::string>>(), j.at("stats").get<AttributeStats>(),
                        j.at("cases").get<std::vector<CaseRecord>>(), palette, next_id);
}

void to_json(json& j, const EditCommand& v) {
  std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        j = json{{"ids", c.ids}};
        if constexpr (std::is_same_v<T, ShiftCommand>) {
          j["command"] = "shift";
          j["delta"] = c.delta;
        } else if constexpr (std::is_same_v<T, CloneCommand>) {
          j["command"] = "clone";
        } else if constexpr (std::is_same_v<T, DeleteCommand>) {
          j["command"] = "delete";
        } else {
          j["command"] = "relabel";
          j["label"] = c.label;
        }
      },
      v);
}
void from_json(const json& j, EditCommand& v) {
  auto command = j.at("command").get<std::string>();
  auto ids = j.at("ids").get<std::vector<CaseId>>();
  if (command == "shift") {
    v = ShiftCommand{ids, j.at("delta").get<std::vector<double>>()};
  } else if (command == "clone") {
    v = CloneCommand{ids};
  } else if (command == "delete") {
    v = DeleteCommand{ids};
  } else if (command == "relabel") {
    v = RelabelCommand{ids, j.at("label").get<std::string>()};
  } else {
    throw ValidationError("unknown edit command '" + command + "'");
  }
}

// ---- layout ---------------------------------------------------------------

void to_json(json& j, const GlcKind& v) { j = to_string(v); }
void from_json(const json& j, GlcKind& v) { v = glc_kind_from_string(j.get<std::string>()); }

void to_json(json& j, const Point2& v) { j = json::array({v.x, v.y}); }
void from_json(const json& j, Point2& v) {
  if (!j.is_array() || j.size() != 2) throw ValidationError("point must be a two-element array");
  v.x = j[0].get<double>();
  v.y = j[1].get<double>();
}

void to_json(json& j, const Segment2& v) { j = json{{"from", v.from}, {"to", v.to}}; }
void from_json(const json& j, Segment2& v) {
  j.at("from").get_to(v.from);
  j.at("to").get_to(v.to);
}

void to_json(json& j, const LayoutConfig& v) {
  j = json{{"kind", v.kind},           {"attribute_order", v.attribute_order},
           {"inverted", v.inverted},   {"radius", v.radius},
           {"coefficients", v.coefficients}, {"curvature", v.curvature},
           {"pair_gap", v.pair_gap}};
}
void from_json(const json& j, LayoutConfig& v) {
  LayoutConfig out;
  j.at("kind").get_to(out.kind);
  read_opt(j, "attribute_order", out.attribute_order);
  read_opt(j, "inverted", out.inverted);
  read_opt(j, "radius", out.radius);
  read_opt(j, "coefficients", out.coefficients);
  read_opt(j, "curvature", out.curvature);
  read_opt(j, "pair_gap", out.pair_gap);
  v = std::move(out);
}

void to_json(json& j, const CaseGlyph& v) {
  j = json{{"id", v.id},         {"class", v.label},        {"provenance", v.provenance},
           {"vertices", v.vertices}, {"controls", v.controls}, {"arc_params", v.arc_params}};
}
void from_json(const json& j, CaseGlyph& v) {
  j.at("id").get_to(v.id);
  j.at("class").get_to(v.label);
  j.at("provenance").get_to(v.provenance);
  j.at("vertices").get_to(v.vertices);
  v.controls.clear();
  v.arc_params.clear();
  read_opt(j, "controls", v.controls);
  read_opt(j, "arc_params", v.arc_params);
}

void to_json(json& j, const LayoutFrame& v) {
  j = json{{"axes", v.axes},
           {"square_origins", v.square_origins},
           {"sector_angles", v.sector_angles},
           {"radius", v.radius}};
}
void from_json(const json& j, LayoutFrame& v) {
  v = LayoutFrame{};
  read_opt(j, "axes", v.axes);
  read_opt(j, "square_origins", v.square_origins);
  read_opt(j, "sector_angles", v.sector_angles);
  read_opt(j, "radius", v.radius);
}

void to_json(json& j, const Layout& v) {
  j = json{{"kind", v.kind},
           {"config", v.config},
           {"dimension", v.dimension},
           {"attribute_names", v.attribute_names},
           {"class_palette", v.class_palette},
           {"frame", v.frame},
           {"glyphs", v.glyphs}};
}
void from_json(const json& j, Layout& v) {
  j.at("kind").get_to(v.kind);
  j.at("config").get_to(v.config);
  j.at("dimension").get_to(v.dimension);
  j.at("attribute_names").get_to(v.attribute_names);
  j.at("class_palette").get_to(v.class_palette);
  j.at("frame").get_to(v.frame);
  j.at("glyphs").get_to(v.glyphs);
}

// ---- purity and rules -----------------------------------------------------

void to_json(json& j, const PurityRegion& v) {
  j = json{{"coordinate", v.coordinate}, {"lo", v.lo},           {"hi", v.hi},
           {"class", v.dominant_class},  {"purity", v.purity},   {"support", v.support},
           {"case_ids", v.case_ids}};
}
void from_json(const json& j, PurityRegion& v) {
  j.at("coordinate").get_to(v.coordinate);
  j.at("lo").get_to(v.lo);
  j.at("hi").get_to(v.hi);
  j.at("class").get_to(v.dominant_class);
  j.at("purity").get_to(v.purity);
  j.at("support").get_to(v.support);
  v.case_ids.clear();
  read_opt(j, "case_ids", v.case_ids);
}

void to_json(json& j, const PurityReport& v) {
  // Fingerprint as a string: 64-bit values exceed what many JSON readers keep exactly.
  j = json{{"dataset_fingerprint", std::to_string(v.dataset_fingerprint)},
           {"min_support", v.min_support},
           {"regions", v.regions},
           {"lp_case_ids", v.lp_case_ids}};
}
void from_json(const json& j, PurityReport& v) {
  v.dataset_fingerprint = parse_u64(j.at("dataset_fingerprint").get<std::string>());
  j.at("min_support").get_to(v.min_support);
  j.at("regions").get_to(v.regions);
  j.at("lp_case_ids").get_to(v.lp_case_ids);
}

void to_json(json& j, const IntervalRule& v) {
  j = json{{"coordinate", v.coordinate}, {"lo", v.lo}, {"hi", v.hi}, {"predicted", v.predicted}};
}
void from_json(const json& j, IntervalRule& v) {
  j.at("coordinate").get_to(v.coordinate);
  j.at("lo").get_to(v.lo);
  j.at("hi").get_to(v.hi);
  j.at("predicted").get_to(v.predicted);
}

void to_json(json& j, const SlopeRuleConfig& v) {
  j = json{{"positive_class", v.positive_class},
           {"nonpositive_class", v.nonpositive_class},
           {"flat_tolerance", v.flat_tolerance},
           {"pair_source", v.pair_source}};
}
void from_json(const json& j, SlopeRuleConfig& v) {
  j.at("positive_class").get_to(v.positive_class);
  j.at("nonpositive_class").get_to(v.nonpositive_class);
  read_opt(j, "flat_tolerance", v.flat_tolerance);
  j.at("pair_source").get_to(v.pair_source);
}

void to_json(json& j, const RuleSet& v) {
  j = json{{"chain", v.chain}};
  write_opt(j, "terminal", v.terminal);
  write_opt(j, "fallback", v.fallback);
}
void from_json(const json& j, RuleSet& v) {
  v.chain.clear();
  read_opt(j, "chain", v.chain);
  read_optional(j, "terminal", v.terminal);
  read_optional(j, "fallback", v.fallback);
}

void to_json(json& j, const ConfusionMatrix& v) {
  auto ratio = [](const Ratio& r) { return json{{"numerator", r.numerator}, {"denominator", r.denominator}}; };
  json recalls = json::array();
  json precisions = json::array();
  for (std::size_t c = 0; c < v.classes.size(); ++c) {
    recalls.push_back(ratio(v.recall(c)));
    precisions.push_back(ratio(v.precision(c)));
  }
  j = json{{"classes", v.classes},   {"counts", v.counts},         {"recall", recalls},
           {"precision", precisions}, {"accuracy", ratio(v.accuracy())}};
}

// ---- sdg ------------------------------------------------------------------

void to_json(json& j, const SdgStrategy& v) {
  j = json{{"strategy", strategy_name(v)}};
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SingleShift>) {
          j["source"] = s.source;
          j["coordinate"] = s.coordinate;
          j["delta"] = s.delta;
        } else if constexpr (std::is_same_v<T, DuplicateShift>) {
          j["delta"] = s.delta;
        } else if constexpr (std::is_same_v<T, InBounds>) {
          j["target_class"] = s.target_class;
          j["count"] = s.count;
        } else if constexpr (std::is_same_v<T, OutOfBounds>) {
          j["target_class"] = s.target_class;
          j["coordinate"] = s.coordinate;
          j["offset_lo"] = s.offset_lo;
          j["offset_hi"] = s.offset_hi;
          j["count"] = s.count;
        } else {
          j["count"] = s.count;
        }
      },
      v);
}
void from_json(const json& j, SdgStrategy& v) {
  auto name = j.at("strategy").get<std::string>();
  if (name == "single_shift") {
    v = SingleShift{j.at("source").get<CaseId>(), j.at("coordinate").get<std::size_t>(),
                    j.at("delta").get<double>()};
  } else if (name == "duplicate_shift") {
    json delta = j.at("delta");
    v = DuplicateShift{delta.get<std::vector<double>>()};
  } else if (name == "in_bounds_uniform" || name == "in_bounds_proportional" || name == "in_bounds") {
    InBounds s;
    j.at("target_class").get_to(s.target_class);
    read_opt(j, "count", s.count);
    s.mode = name == "in_bounds_uniform" ? InBoundsMode::uniform : InBoundsMode::proportional;
    if (name == "in_bounds") {
      std::string mode = "uniform";
      read_opt(j, "mode", mode);
      if (mode != "uniform" && mode != "proportional") throw ValidationError("unknown in-bounds mode '" + mode + "'");
      s.mode = mode == "uniform" ? InBoundsMode::uniform : InBoundsMode::proportional;
    }
    v = s;
  } else if (name == "out_of_bounds") {
    OutOfBounds s;
    j.at("target_class").get_to(s.target_class);
    j.at("coordinate").get_to(s.coordinate);
    j.at("offset_lo").get_to(s.offset_lo);
    j.at("offset_hi").get_to(s.offset_hi);
    read_opt(j, "count", s.count);
    v = s;
  } else if (name == "unbounded") {
    Unbounded s;
    read_opt(j, "count", s.count);
    v = s;
  } else {
    throw ValidationError("unknown strategy '" + name + "'");
  }
}

void to_json(json& j, const SdgBatch& v) {
  j = json{{"strategy", v.strategy}, {"seed", std::to_string(v.seed)}, {"cases", v.cases}};
}
void from_json(const json& j, SdgBatch& v) {
  j.at("strategy").get_to(v.strategy);
  v.seed = parse_u64(j.at("seed").get<std::string>());
  j.at("cases").get_to(v.cases);
}

void to_json(json& j, const QualityMetrics& v) {
  j = json{{"alpha_precision", v.alpha_precision}, {"beta_recall", v.beta_recall}, {"authenticity", v.authenticity}};
}

// ---- eval -----------------------------------------------------------------

void to_json(json& j, const ClassifierKind& v) {
  j = json{{"variant", variant_key(v.variant)}, {"name", v.name()}};
  switch (v.variant) {
    case ClassifierVariant::decision_tree:
      j["max_depth"] = v.max_depth;
      j["min_leaf"] = v.min_leaf;
      break;
    case ClassifierVariant::knn: j["neighbors"] = v.neighbors; break;
    case ClassifierVariant::ridge: j["regularization"] = v.regularization; break;
    case ClassifierVariant::logistic_regression:
      j["regularization"] = v.regularization;
      j["iterations"] = v.iterations;
      j["learning_rate"] = v.learning_rate;
      break;
    case ClassifierVariant::gaussian_nb:
    case ClassifierVariant::lda: break;
  }
}
void from_json(const json& j, ClassifierKind& v) {
  v = ClassifierKind::defaults(classifier_variant_from_string(j.at("variant").get<std::string>()));
  read_opt(j, "max_depth", v.max_depth);
  read_opt(j, "min_leaf", v.min_leaf);
  read_opt(j, "neighbors", v.neighbors);
  read_opt(j, "regularization", v.regularization);
  read_opt(j, "iterations", v.iterations);
  read_opt(j, "learning_rate", v.learning_rate);
}

void to_json(json& j, const EvalConfig& v) {
  j = json{{"cycles", v.cycles},
           {"folds", v.folds},
           {"master_seed", std::to_string(v.master_seed)},
           {"train_name", v.train_name},
           {"exploration_name", v.exploration_name},
           {"threads", v.threads}};
}
void from_json(const json& j, EvalConfig& v) {
  read_opt(j, "cycles", v.cycles);
  read_opt(j, "folds", v.folds);
  if (auto it = j.find("master_seed"); it != j.end()) {
    v.master_seed = it->is_string() ? parse_u64(it->get<std::string>()) : it->get<std::uint64_t>();
  }
  read_opt(j, "train_name", v.train_name);
  read_opt(j, "exploration_name", v.exploration_name);
  read_opt(j, "threads", v.threads);
}

void to_json(json& j, const EvalRow& v) {
  j = json{{"model", v.kind.name()},
           {"classifier", v.kind},
           {"cv_mean_acc", v.cv_mean},
           {"cv_std_acc", v.cv_std},
           {"exp_mean_acc", v.exp_mean},
           {"exp_std_acc", v.exp_std},
           {"best_auc", v.best_auc},
           {"worst_auc", v.worst_auc},
           {"exploration_varies", v.exploration_varies},
           {"regularized_fallback", v.regularized_fallback},
           {"auc_skipped_classes", v.auc_skipped_classes}};
}
void from_json(const json& j, EvalRow& v) {
  j.at("classifier").get_to(v.kind);
  j.at("cv_mean_acc").get_to(v.cv_mean);
  j.at("cv_std_acc").get_to(v.cv_std);
  j.at("exp_mean_acc").get_to(v.exp_mean);
  j.at("exp_std_acc").get_to(v.exp_std);
  j.at("best_auc").get_to(v.best_auc);
  j.at("worst_auc").get_to(v.worst_auc);
  read_opt(j, "exploration_varies", v.exploration_varies);
  read_opt(j, "regularized_fallback", v.regularized_fallback);
  read_opt(j, "auc_skipped_classes", v.auc_skipped_classes);
}

void to_json(json& j, const EvalReport& v) {
  j = json{{"training_dataset", v.train_name},
           {"exploration_dataset", v.exploration_name},
           {"cycles", v.cycles},
           {"folds", v.folds},
           {"master_seed", std::to_string(v.master_seed)},
           {"classes", v.classes},
           {"rows", v.rows}};
}
void from_json(const json& j, EvalReport& v) {
  j.at("training_dataset").get_to(v.train_name);
  j.at("exploration_dataset").get_to(v.exploration_name);
  j.at("cycles").get_to(v.cycles);
  j.at("folds").get_to(v.folds);
  v.master_seed = parse_u64(j.at("master_seed").get<std::string>());
  read_opt(j, "classes", v.classes);
  j.at("rows").get_to(v.rows);
}

// ---- pipeline -------------------------------------------------------------

void to_json(json& j, const AutomaticPolicyConfig& v) {
  j = json{{"mode", v.mode == InBoundsMode::uniform ? "uniform" : "proportional"},
           {"count_per_class", v.count_per_class},
           {"tolerance", v.tolerance},
           {"rotation", v.rotation}};
}
void from_json(const json& j, AutomaticPolicyConfig& v) {
  std::string mode = v.mode == InBoundsMode::uniform ? "uniform" : "proportional";
  read_opt(j, "mode", mode);
  if (mode != "uniform" && mode != "proportional") throw ValidationError("unknown in-bounds mode '" + mode + "'");
  v.mode = mode == "uniform" ? InBoundsMode::uniform : InBoundsMode::proportional;
  read_opt(j, "count_per_class", v.count_per_class);
  read_opt(j, "tolerance", v.tolerance);
  read_opt(j, "rotation", v.rotation);
}

void to_json(json& j, const PipelineConfig& v) {
  j = json{{"eval", v.eval},
           {"classifiers", v.classifiers},
           {"seed", std::to_string(v.seed)},
           {"max_iterations", v.max_iterations},
           {"min_support", v.min_support},
           {"initial_glc", v.initial_glc}};
}
void from_json(const json& j, PipelineConfig& v) {
  read_opt(j, "eval", v.eval);
  read_opt(j, "classifiers", v.classifiers);
  if (auto it = j.find("seed"); it != j.end()) {
    v.seed = it->is_string() ? parse_u64(it->get<std::string>()) : it->get<std::uint64_t>();
  }
  read_opt(j, "max_iterations", v.max_iterations);
  read_opt(j, "min_support", v.min_support);
  read_opt(j, "initial_glc", v.initial_glc);
}

void to_json(json& j, const StepRecord& v) {
  j = json{{"step", v.step}, {"glc", v.glc}, {"dataset_version", v.dataset_version}, {"summary", v.summary}};
  write_opt(j, "decision", v.decision);
  write_opt(j, "evaluation", v.evaluation);
}
void from_json(const json& j, StepRecord& v) {
  j.at("step").get_to(v.step);
  j.at("glc").get_to(v.glc);
  j.at("dataset_version").get_to(v.dataset_version);
  j.at("summary").get_to(v.summary);
  read_optional(j, "decision", v.decision);
  read_optional(j, "evaluation", v.evaluation);
}

void to_json(json& j, const SessionLog& v) {
  j = json{{"versions", v.versions},   {"steps", v.steps},
           {"glc_sequence", v.glc_sequence}, {"benchmark", v.benchmark},
           {"final_version", v.final_version}, {"termination", v.termination}};
}
void from_json(const json& j, SessionLog& v) {
  j.at("versions").get_to(v.versions);
  j.at("steps").get_to(v.steps);
  j.at("glc_sequence").get_to(v.glc_sequence);
  j.at("benchmark").get_to(v.benchmark);
  j.at("final_version").get_to(v.final_version);
  j.at("termination").get_to(v.termination);
}

}  // namespace glc
