#include "cli_commands.hpp"

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "glc/error.hpp"
#include "glc/evaluation.hpp"
#include "glc/geometry_export.hpp"
#include "glc/http_service.hpp"
#include "glc/json_io.hpp"
#include "glc/pipeline.hpp"
#include "glc/request_parsing.hpp"
#include "glc/rules.hpp"
#include "glc/sdg.hpp"

namespace glc::cli {

namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

NormalizedDataset load_normalized(const fs::path& path) { return normalize_dataset(load_dataset(path)); }

/// Rows of `raw` mapped through `stats` and clipped into [0,1].
NormalizedDataset normalize_with(const RawDataset& raw, const NormalizedDataset& reference) {
  raw.validate();
  if (raw.dimension() != reference.dimension()) {
    throw ValidationError("dataset has " + std::to_string(raw.dimension()) + " attributes, expected " +
                          std::to_string(reference.dimension()));
  }
  std::vector<CaseRecord> cases;
  for (std::size_t r = 0; r < raw.size(); ++r) {
    auto values = normalize_point(raw.rows[r], reference.stats());
    for (double& v : values) v = std::clamp(v, 0.0, 1.0);
    cases.push_back({CaseId{r}, std::move(values), raw.labels[r],
                     raw.provenance.empty() ? Provenance::real : raw.provenance[r]});
  }
  return NormalizedDataset(raw.attribute_names, reference.stats(), std::move(cases), reference.class_palette());
}

struct LayoutArgs {
  std::string input;
  std::string kind = "pc";
  std::string svg;
  std::string geometry;
  std::string order;
  std::string invert;
  std::string coeff;
};

struct PurityArgs {
  std::string input;
  std::size_t min_support = 1;
  std::string json_out;
};

struct RulesArgs {
  std::string input;
  std::size_t min_support = 1;
  std::string positive;
  std::string negative;
};

struct SdgArgs {
  std::string input;
  std::string strategy;
  std::string target_class;
  std::size_t count = 1;
  std::size_t coordinate = 0;
  std::string delta;
  std::uint64_t case_id = 0;
  std::string offset;
  std::string seed = "0";
  std::string out;
  bool batch_only = false;
};

struct EvalArgs {
  std::string train;
  std::string explore;
  std::size_t cycles = 100;
  std::size_t folds = 10;
  std::string seed = "0";
  std::string report;
  std::string format;
  std::string classifiers;
  std::size_t threads = 1;
};

struct ServeArgs {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string store = "glc-sessions";
  std::size_t workers = 2;
};

void cmd_normalize(const std::string& in, const std::string& out_path) {
  export_dataset(load_normalized(in), out_path);
}

void cmd_layout(const LayoutArgs& a, std::ostream& out) {
  auto dataset = load_normalized(a.input);
  GlcKind kind = glc_kind_from_string(a.kind);
  LayoutConfig config = apply_overrides(LayoutConfig::defaults(kind, dataset.dimension()),
                                        {a.order, a.invert, a.coeff}, dataset);
  Layout layout = compute_layout(dataset, config);
  if (!a.svg.empty()) write_file(a.svg, export_svg(layout));
  if (!a.geometry.empty()) write_file(a.geometry, export_geometry(layout, GeometryFormat::geometry_json));
  if (a.svg.empty() && a.geometry.empty()) out << export_geometry(layout, GeometryFormat::geometry_json) << '\n';
}

void cmd_purity(const PurityArgs& a, std::ostream& out) {
  if (a.min_support < 1) throw ValidationError("min_support must be >= 1");
  auto dataset = load_normalized(a.input);
  auto report = rank_regions_by_purity(dataset, a.min_support);
  out << purity_report_csv(report);
  if (!a.json_out.empty()) write_file(a.json_out, json(report).dump(2));
}

void cmd_rules(const RulesArgs& a, std::ostream& out) {
  auto dataset = load_normalized(a.input);
  RuleSet rules = induce_interval_rules(dataset, 1.0, a.min_support);
  if (!a.positive.empty() || !a.negative.empty()) {
    SlopeRuleConfig slope;
    slope.positive_class = a.positive;
    slope.nonpositive_class = a.negative;
    slope.pair_source = LayoutConfig::defaults(GlcKind::spc, dataset.dimension());
    slope.validate(dataset.dimension());
    rules.terminal = slope;
  }
  out << ruleset_text(rules, dataset.attribute_names()) << '\n' << evaluate_ruleset(rules, dataset).to_csv();
}

SdgStrategy strategy_from(const SdgArgs& a, const NormalizedDataset& dataset) {
  const std::string& s = a.strategy;
  if (s == "single_shift") {
    auto delta = parse_number_list(a.delta);
    if (delta.size() != 1) throw ValidationError("single_shift needs one --delta value");
    if (a.case_id >= dataset.size()) throw NotFoundError("no case with id " + std::to_string(a.case_id));
    return SingleShift{CaseId{a.case_id}, a.coordinate, delta[0]};
  }
  if (s == "duplicate_shift") {
    auto delta = parse_number_list(a.delta);
    if (delta.size() == 1) delta.assign(dataset.dimension(), delta[0]);
    return DuplicateShift{delta};
  }
  if (s == "in_bounds_uniform" || s == "in_bounds_proportional") {
    if (a.target_class.empty()) throw ValidationError(s + " needs --class");
    return InBounds{a.target_class, a.count,
                    s == "in_bounds_uniform" ? InBoundsMode::uniform : InBoundsMode::proportional};
  }
  if (s == "out_of_bounds") {
    if (a.target_class.empty()) throw ValidationError("out_of_bounds needs --class");
    auto offset = parse_number_list(a.offset);
    if (offset.size() != 2) throw ValidationError("out_of_bounds needs --offset lo,hi");
    return OutOfBounds{a.target_class, a.coordinate, offset[0], offset[1], a.count};
  }
  if (s == "unbounded") return Unbounded{a.count};
  throw ValidationError("unknown strategy '" + s + "'");
}

void cmd_sdg(const SdgArgs& a, std::ostream& out) {
  auto dataset = load_normalized(a.input);
  SdgBatch batch = generate(dataset, strategy_from(a, dataset), parse_seed(a.seed));
  NormalizedDataset written = a.batch_only ? dataset.with_cases(batch.cases) : extend_dataset(dataset, batch);
  export_dataset(written, a.out, {.denormalize = true, .provenance_column = true});
  out << batch.cases.size() << " synthetic cases (" << strategy_name(batch.strategy) << "), " << written.size()
      << " rows written to " << a.out << '\n';
}

void cmd_eval(const EvalArgs& a, std::ostream& out) {
  RawDataset train_raw = load_dataset(a.train);
  NormalizedDataset train = normalize_dataset(train_raw);
  NormalizedDataset explore = normalize_with(load_dataset(a.explore), train);
  EvalConfig config;
  config.cycles = a.cycles;
  config.folds = a.folds;
  config.master_seed = parse_seed(a.seed);
  config.train_name = a.train;
  config.exploration_name = a.explore;
  config.threads = a.threads;
  std::vector<ClassifierKind> kinds;
  if (a.classifiers.empty()) {
    kinds = default_ensemble();
  } else {
    std::stringstream list(a.classifiers);
    for (std::string name; std::getline(list, name, ',');) {
      kinds.push_back(ClassifierKind::defaults(classifier_variant_from_string(name)));
    }
  }
  EvalReport report = monte_carlo_cv(config, train, explore, kinds);
  out << render_report(report, ReportFormat::text);
  if (!a.report.empty()) {
    std::string format = a.format;
    if (format.empty()) {
      auto ext = fs::path(a.report).extension().string();
      format = ext == ".json" ? "structured" : ext == ".csv" ? "csv" : "text";
    }
    write_file(a.report, render_report(report, report_format_from_string(format)));
  }
}

void cmd_pipeline(const std::string& config_path, std::ostream& out) {
  json doc;
  try {
    doc = json::parse(read_file(config_path));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed pipeline config: ") + e.what());
  }
  fs::path base = fs::path(config_path).parent_path();
  auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base / p; };
  try {
    auto dataset = load_normalized(resolve(doc.at("dataset").get<std::string>()));
    PipelineConfig config;
    if (doc.contains("pipeline")) doc.at("pipeline").get_to(config);
    AutomaticPolicyConfig policy_config;
    if (doc.contains("automatic")) doc.at("automatic").get_to(policy_config);
    AutomaticPolicy policy(policy_config);
    SessionLog log = run_sdg_adl(dataset, policy, config);
    std::string transcript = session_log_transcript(log);
    out << transcript;
    if (doc.contains("log")) write_file(resolve(doc.at("log").get<std::string>()), json(log).dump(1));
    if (doc.contains("transcript")) write_file(resolve(doc.at("transcript").get<std::string>()), transcript);
    if (doc.contains("out")) {
      export_dataset(log.final_dataset(), resolve(doc.at("out").get<std::string>()),
                     {.denormalize = true, .provenance_column = true});
    }
    out << render_report(log.final_evaluation(), ReportFormat::text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("invalid pipeline config: ") + e.what());
  }
}

HttpService* active_service = nullptr;

void cmd_serve(const ServeArgs& a, std::ostream& out) {
  SessionStore store(a.store);
  JobManager jobs(a.workers);
  HttpService service(store, jobs);
  int port = service.bind(a.host, a.port);
  out << "listening on " << a.host << ':' << port << " (store " << a.store << ")" << std::endl;
  active_service = &service;
  std::signal(SIGINT, [](int) {
    if (active_service) active_service->stop();
  });
  std::signal(SIGTERM, [](int) {
    if (active_service) active_service->stop();
  });
  service.run();
  active_service = nullptr;
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"General Line Coordinates workbench"};
  app.require_subcommand(1);

  std::string normalize_in;
  std::string normalize_out;
  auto* normalize = app.add_subcommand("normalize", "Min-max normalize a dataset");
  normalize->add_option("input", normalize_in, "Input CSV or TXT")->required();
  normalize->add_option("output", normalize_out, "Output CSV")->required();

  LayoutArgs layout_args;
  auto* layout = app.add_subcommand("layout", "Lay out a dataset in one GLC");
  layout->add_option("input", layout_args.input, "Input dataset")->required();
  layout->add_option("--kind", layout_args.kind, "pc, spc, scc or dcc")->capture_default_str();
  layout->add_option("--svg", layout_args.svg, "SVG output path");
  layout->add_option("--geometry", layout_args.geometry, "Geometry document output path");
  layout->add_option("--order", layout_args.order, "Attribute order, 0-based, comma separated");
  layout->add_option("--invert", layout_args.invert, "Attributes to invert, 0-based");
  layout->add_option("--coeff", layout_args.coeff, "DCC coefficients, comma separated, or 'lda'");

  PurityArgs purity_args;
  auto* purity = app.add_subcommand("purity", "Rank coordinate intervals by purity");
  purity->add_option("input", purity_args.input, "Input dataset")->required();
  purity->add_option("--min-support", purity_args.min_support, "Smallest region support")->capture_default_str();
  purity->add_option("--json", purity_args.json_out, "Write the report document here");

  RulesArgs rules_args;
  auto* rules = app.add_subcommand("rules", "Induce interval rules and score them");
  rules->add_option("input", rules_args.input, "Input dataset")->required();
  rules->add_option("--min-support", rules_args.min_support, "Smallest rule support")->capture_default_str();
  rules->add_option("--slope-positive", rules_args.positive, "Class for a rising SPC glyph");
  rules->add_option("--slope-negative", rules_args.negative, "Class for a flat or falling SPC glyph");

  SdgArgs sdg_args;
  auto* sdg = app.add_subcommand("sdg", "Generate synthetic cases");
  sdg->add_option("input", sdg_args.input, "Input dataset")->required();
  sdg->add_option("--strategy", sdg_args.strategy,
                  "single_shift, duplicate_shift, in_bounds_uniform, in_bounds_proportional, out_of_bounds, "
                  "unbounded")
      ->required();
  sdg->add_option("--class", sdg_args.target_class, "Target class");
  sdg->add_option("--count", sdg_args.count, "Number of cases")->capture_default_str();
  sdg->add_option("--coordinate", sdg_args.coordinate, "Attribute index, 0-based")->capture_default_str();
  sdg->add_option("--delta", sdg_args.delta, "Shift (one value, or one per attribute)");
  sdg->add_option("--case-id", sdg_args.case_id, "Source case (row index, 0-based)");
  sdg->add_option("--offset", sdg_args.offset, "Out-of-bounds interval lo,hi");
  sdg->add_option("--seed", sdg_args.seed, "Random seed")->required();
  sdg->add_option("--out", sdg_args.out, "Output CSV")->required();
  sdg->add_flag("--batch-only", sdg_args.batch_only, "Write only the generated cases");

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "Monte-Carlo cross-validation over the classifier ensemble");
  eval->add_option("--train", eval_args.train, "Training dataset")->required();
  eval->add_option("--explore", eval_args.explore, "Exploration dataset")->required();
  eval->add_option("--cycles", eval_args.cycles, "Independent cycles")->capture_default_str();
  eval->add_option("--folds", eval_args.folds, "Folds per cycle")->capture_default_str();
  eval->add_option("--seed", eval_args.seed, "Master seed")->capture_default_str();
  eval->add_option("--report", eval_args.report, "Report output path");
  eval->add_option("--format", eval_args.format, "text, csv or structured (default: from extension)");
  eval->add_option("--classifiers", eval_args.classifiers, "Subset, e.g. DT,KNN,LDA");
  eval->add_option("--threads", eval_args.threads, "Worker threads, 0 = all cores")->capture_default_str();

  std::string pipeline_config;
  auto* pipeline = app.add_subcommand("pipeline", "Run the SDG-ADL loop with the automatic policy");
  pipeline->add_option("--config", pipeline_config, "Pipeline config document")->required();

  ServeArgs serve_args;
  auto* serve = app.add_subcommand("serve", "Run the HTTP session service");
  serve->add_option("--host", serve_args.host)->capture_default_str();
  serve->add_option("--port", serve_args.port)->capture_default_str();
  serve->add_option("--store", serve_args.store, "Session directory")->capture_default_str();
  serve->add_option("--workers", serve_args.workers, "Job worker threads")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (*normalize) cmd_normalize(normalize_in, normalize_out);
    if (*layout) cmd_layout(layout_args, out);
    if (*purity) cmd_purity(purity_args, out);
    if (*rules) cmd_rules(rules_args, out);
    if (*sdg) cmd_sdg(sdg_args, out);
    if (*eval) cmd_eval(eval_args, out);
    if (*pipeline) cmd_pipeline(pipeline_config, out);
    if (*serve) cmd_serve(serve_args, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const NotFoundError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace glc::cli
