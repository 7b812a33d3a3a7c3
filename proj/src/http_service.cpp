#include "glc/http_service.hpp"

#include <sstream>

#include <httplib.h>

#include "glc/error.hpp"
#include "glc/evaluation.hpp"
#include "glc/geometry_export.hpp"
#include "glc/json_io.hpp"
#include "glc/request_parsing.hpp"

namespace glc {

// ---- interactive policy -----------------------------------------------------

namespace {

std::vector<SdgStrategy> parse_strategies(const json& decision, const NormalizedDataset& dataset) {
  auto strategies = decision.at("strategies").get<std::vector<SdgStrategy>>();
  const auto& palette = dataset.class_palette();
  for (const auto& s : strategies) {
    const std::string* cls = nullptr;
    if (auto* in = std::get_if<InBounds>(&s)) cls = &in->target_class;
    if (auto* out = std::get_if<OutOfBounds>(&s)) cls = &out->target_class;
    if (cls && std::find(palette.begin(), palette.end(), *cls) == palette.end()) {
      throw ValidationError("unknown class '" + *cls + "'");
    }
  }
  return strategies;
}

template <class F>
auto guarded(F&& f) {
  return [f = std::forward<F>(f)](const json& decision) {
    try {
      f(decision);
    } catch (const json::exception& e) {
      throw ValidationError(std::string("malformed decision: ") + e.what());
    }
  };
}

json rows_summary(const EvalReport& report) {
  json rows = json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"model", r.kind.name()}, {"cv_mean_acc", r.cv_mean}, {"exp_mean_acc", r.exp_mean}});
  }
  return rows;
}

}  // namespace

std::vector<SdgStrategy> InteractivePolicy::strategies(const DecisionContext& context) {
  json prompt{{"step", context.step},
              {"glc", context.glc},
              {"expects", "strategies"},
              {"classes", context.current->class_palette()},
              {"pure_regions", std::count_if(context.report->regions.begin(), context.report->regions.end(),
                                             [](const PurityRegion& r) { return r.pure(); })},
              {"least_pure_cases", context.report->lp_case_ids.size()}};
  const NormalizedDataset& dataset = *context.current;
  auto validate = guarded([&dataset](const json& d) { parse_strategies(d, dataset); });
  json decision = context_.await_decision(prompt, validate);
  return parse_strategies(decision, dataset);
}

std::vector<SdgStrategy> InteractivePolicy::choose_generation(const DecisionContext& context) {
  return strategies(context);
}

std::vector<SdgStrategy> InteractivePolicy::choose_outside_lp(const DecisionContext& context) {
  return strategies(context);
}

ReviewDecision InteractivePolicy::review(const DecisionContext& context) {
  json prompt{{"step", 8},
              {"glc", context.glc},
              {"expects", "decision"},
              {"options", {"accept", "modify", "escalate"}},
              {"added", context.candidate_added},
              {"benchmark", rows_summary(*context.benchmark)},
              {"candidate", rows_summary(*context.candidate)}};
  auto validate = guarded([](const json& d) { review_decision_from_string(d.at("decision").get<std::string>()); });
  json decision = context_.await_decision(prompt, validate);
  return review_decision_from_string(decision.at("decision").get<std::string>());
}

std::optional<GlcKind> InteractivePolicy::choose_next_glc(const DecisionContext& context) {
  json prompt{{"step", 11}, {"glc", context.glc}, {"expects", "glc"}, {"options", {"pc", "spc", "scc", "dcc", nullptr}}};
  auto validate = guarded([](const json& d) {
    const auto& g = d.at("glc");
    if (!g.is_null()) glc_kind_from_string(g.get<std::string>());
  });
  json decision = context_.await_decision(prompt, validate);
  const auto& g = decision.at("glc");
  if (g.is_null()) return std::nullopt;
  return glc_kind_from_string(g.get<std::string>());
}

// ---- HTTP -------------------------------------------------------------------

struct HttpService::Impl {
  SessionStore& store;
  JobManager& jobs;
  httplib::Server server;

  Impl(SessionStore& s, JobManager& j) : store(s), jobs(j) { routes(); }

  static void send_json(httplib::Response& res, const json& body, int status = 200) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  }

  template <class Handler>
  static httplib::Server::Handler wrap(Handler handler) {
    return [handler](const httplib::Request& req, httplib::Response& res) {
      auto fail = [&](int status, const std::string& message) { send_json(res, {{"error", message}}, status); };
      try {
        handler(req, res);
      } catch (const ConflictError& e) {
        fail(409, e.what());
      } catch (const NotFoundError& e) {
        fail(404, e.what());
      } catch (const ValidationError& e) {
        fail(400, e.what());
      } catch (const json::exception& e) {
        fail(400, std::string("malformed request document: ") + e.what());
      } catch (const std::exception& e) {
        fail(500, e.what());
      }
    };
  }

  static json body_json(const httplib::Request& req) {
    if (req.body.empty()) return json::object();
    try {
      return json::parse(req.body);
    } catch (const json::exception& e) {
      throw ValidationError(std::string("request body is not a JSON document: ") + e.what());
    }
  }

  static std::size_t expected_version(const json& body) {
    if (!body.contains("expected_version")) throw ValidationError("expected_version is required");
    return body.at("expected_version").get<std::size_t>();
  }

  static std::uint64_t seed_of(const json& body) {
    auto it = body.find("seed");
    if (it == body.end()) throw ValidationError("seed is required");
    return it->is_string() ? parse_seed(it->get<std::string>()) : it->get<std::uint64_t>();
  }

  static std::string param(const httplib::Request& req, const std::string& key, const std::string& fallback = "") {
    return req.has_param(key) ? req.get_param_value(key) : fallback;
  }

  json summary(const SessionHead& head) const {
    return {{"id", head.id},
            {"version", head.version},
            {"versions", store.version_count(head.id)},
            {"size", head.dataset.size()},
            {"attributes", head.dataset.attribute_names()},
            {"classes", head.dataset.class_palette()},
            {"next_id", head.dataset.next_id()},
            {"origins", store.origins(head.id)}};
  }

  NormalizedDataset version_or_head(const httplib::Request& req, const std::string& id) const {
    if (!req.has_param("version")) return store.head(id).dataset;
    return store.version(id, parse_index_list(req.get_param_value("version")).at(0));
  }

  void routes() {
    server.Post("/sessions", wrap([this](const httplib::Request& req, httplib::Response& res) {
      std::string content = req.body;
      DataFormat format = DataFormat::csv;
      if (req.is_multipart_form_data()) {
        if (!req.has_file("dataset")) throw ValidationError("multipart upload needs a 'dataset' part");
        auto file = req.get_file_value("dataset");
        content = file.content;
        if (file.filename.size() > 4 && file.filename.substr(file.filename.size() - 4) == ".txt") {
          format = DataFormat::txt;
        }
      }
      if (param(req, "format") == "txt") format = DataFormat::txt;
      std::istringstream in(content);
      auto dataset = normalize_dataset(load_dataset(in, format));
      auto id = store.create(dataset);
      send_json(res, summary(store.head(id)), 201);
    }));

    server.Get("/sessions", wrap([this](const httplib::Request&, httplib::Response& res) {
      send_json(res, {{"sessions", store.ids()}});
    }));

    server.Get("/sessions/:id", wrap([this](const httplib::Request& req, httplib::Response& res) {
      send_json(res, summary(store.head(req.path_params.at("id"))));
    }));

    server.Get("/sessions/:id/layout", wrap([this](const httplib::Request& req, httplib::Response& res) {
      const auto& id = req.path_params.at("id");
      auto dataset = version_or_head(req, id);
      GlcKind kind = glc_kind_from_string(param(req, "kind", "pc"));
      LayoutOverrides overrides{param(req, "order"), param(req, "invert"), param(req, "coeff")};
      LayoutConfig config = apply_overrides(store.layout_config(id, kind), overrides, dataset);
      Layout layout = compute_layout(dataset, config);
      if (param(req, "format", "json") == "svg") {
        res.set_content(export_svg(layout), "image/svg+xml");
      } else {
        res.set_content(export_geometry(layout, GeometryFormat::geometry_json), "application/json");
      }
    }));

    server.Put("/sessions/:id/layout_config", wrap([this](const httplib::Request& req, httplib::Response& res) {
      auto config = body_json(req).get<LayoutConfig>();
      store.set_layout_config(req.path_params.at("id"), config);
      send_json(res, config);
    }));

    server.Get("/sessions/:id/purity", wrap([this](const httplib::Request& req, httplib::Response& res) {
      std::size_t min_support = req.has_param("min_support")
                                    ? parse_index_list(req.get_param_value("min_support")).at(0)
                                    : 1;
      if (min_support < 1) throw ValidationError("min_support must be >= 1");
      send_json(res, store.purity(req.path_params.at("id"), min_support));
    }));

    server.Post("/sessions/:id/edits", wrap([this](const httplib::Request& req, httplib::Response& res) {
      json body = body_json(req);
      auto command = body.at("command").get<EditCommand>();
      auto head = store.commit(
          req.path_params.at("id"), expected_version(body),
          [&](const NormalizedDataset& d) { return edit_cases(d, command); },
          "edit " + body.at("command").at("command").get<std::string>());
      send_json(res, summary(head));
    }));

    server.Post("/sessions/:id/sdg", wrap([this](const httplib::Request& req, httplib::Response& res) {
      const auto& id = req.path_params.at("id");
      json body = body_json(req);
      auto strategy = body.at("strategy").get<SdgStrategy>();
      std::uint64_t seed = seed_of(body);
      bool commit = body.value("commit", true);
      json out;
      auto describe = [&](const NormalizedDataset& base, const SdgBatch& batch) {
        out["batch"] = batch;
        NormalizedDataset real = base.real_only();
        if (real.size() >= 6) out["quality"] = quality_metrics(real, batch, 5);
      };
      if (commit) {
        auto head = store.commit(
            id, expected_version(body),
            [&](const NormalizedDataset& d) {
              SdgBatch batch = generate(d, strategy, seed);
              describe(d, batch);
              return extend_dataset(d, batch);
            },
            "sdg " + strategy_name(strategy));
        out["session"] = summary(head);
      } else {
        auto head = store.head(id);
        describe(head.dataset, generate(head.dataset, strategy, seed));
        out["session"] = summary(head);
      }
      send_json(res, out);
    }));

    server.Post("/sessions/:id/activate", wrap([this](const httplib::Request& req, httplib::Response& res) {
      json body = body_json(req);
      auto head = store.activate(req.path_params.at("id"), body.at("version").get<std::size_t>(),
                                 expected_version(body));
      send_json(res, summary(head));
    }));

    server.Get("/sessions/:id/export", wrap([this](const httplib::Request& req, httplib::Response& res) {
      auto dataset = version_or_head(req, req.path_params.at("id"));
      std::ostringstream out;
      write_dataset_csv(out, dataset,
                        {.denormalize = param(req, "denormalize", "true") != "false", .provenance_column = true});
      res.set_content(out.str(), "text/csv");
    }));

    server.Post("/jobs", wrap([this](const httplib::Request& req, httplib::Response& res) {
      json body = body_json(req);
      std::string session = body.at("session").get<std::string>();
      std::string type = body.at("type").get<std::string>();
      std::string job_id;
      if (type == "eval") {
        job_id = submit_eval(session, body);
      } else if (type == "pipeline") {
        job_id = submit_pipeline(session, body);
      } else {
        throw ValidationError("unknown job type '" + type + "'");
      }
      send_json(res, status_document(jobs.status(job_id)), 202);
    }));

    server.Get("/jobs/:id", wrap([this](const httplib::Request& req, httplib::Response& res) {
      send_json(res, status_document(jobs.status(req.path_params.at("id"))));
    }));

    server.Get("/jobs/:id/result", wrap([this](const httplib::Request& req, httplib::Response& res) {
      auto status = jobs.status(req.path_params.at("id"));
      if (!status.result) throw ConflictError("job '" + status.id + "' has no result (" + to_string(status.state) + ")");
      res.set_content(*status.result, "application/json");
    }));

    server.Post("/jobs/:id/decision", wrap([this](const httplib::Request& req, httplib::Response& res) {
      const auto& id = req.path_params.at("id");
      jobs.decide(id, body_json(req));
      send_json(res, status_document(jobs.status(id)));
    }));
  }

  std::string submit_eval(const std::string& session, const json& body) {
    EvalConfig config;
    if (body.contains("config")) body.at("config").get_to(config);
    config.validate();
    std::vector<ClassifierKind> kinds = default_ensemble();
    if (body.contains("classifiers")) body.at("classifiers").get_to(kinds);
    for (const auto& k : kinds) k.validate();

    auto train = body.contains("train_version") ? store.version(session, body.at("train_version").get<std::size_t>())
                                                : store.head(session).dataset;
    auto exploration = store.version(session, body.value("exploration_version", std::size_t{0})).real_only();
    if (exploration.empty()) throw ValidationError("exploration dataset is empty");
    std::map<std::string, std::size_t> counts;
    for (const auto& c : train.cases()) counts[c.label]++;
    for (const auto& [cls, count] : counts) {
      if (count < config.folds) {
        throw ValidationError("stratification infeasible: class '" + cls + "' has " + std::to_string(count) +
                              " cases for " + std::to_string(config.folds) + " folds");
      }
    }
    return jobs.submit(session, "eval", [config, kinds, train, exploration](JobContext& ctx) {
      auto report = monte_carlo_cv(config, train, exploration, kinds, [&](double f) { ctx.progress(f); });
      return render_report(report, ReportFormat::structured);
    });
  }

  std::string submit_pipeline(const std::string& session, const json& body) {
    PipelineConfig config;
    if (body.contains("config")) body.at("config").get_to(config);
    config.validate();
    std::string policy = body.value("policy", std::string("automatic"));
    AutomaticPolicyConfig automatic;
    if (body.contains("automatic")) body.at("automatic").get_to(automatic);
    automatic.validate();
    if (policy != "automatic" && policy != "interactive") {
      throw ValidationError("policy must be 'automatic' or 'interactive'");
    }
    auto dataset = store.head(session).dataset;
    return jobs.submit(session, "pipeline", [config, policy, automatic, dataset](JobContext& ctx) {
      auto progress = [&](double f) { ctx.progress(f); };
      SessionLog log;
      if (policy == "interactive") {
        InteractivePolicy source(ctx);
        log = run_sdg_adl(dataset, source, config, progress);
      } else {
        AutomaticPolicy source(automatic);
        log = run_sdg_adl(dataset, source, config, progress);
      }
      json doc{{"log", log}, {"transcript", session_log_transcript(log)}};
      return doc.dump();
    });
  }
};

HttpService::HttpService(SessionStore& store, JobManager& jobs) : impl_(std::make_unique<Impl>(store, jobs)) {}

HttpService::~HttpService() { stop(); }

int HttpService::bind(const std::string& host, int port) {
  if (port == 0) {
    int bound = impl_->server.bind_to_any_port(host);
    if (bound < 0) throw Error("cannot bind " + host);
    return bound;
  }
  if (!impl_->server.bind_to_port(host, port)) throw Error("cannot bind " + host + ":" + std::to_string(port));
  return port;
}

void HttpService::run() { impl_->server.listen_after_bind(); }

void HttpService::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

void HttpService::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace glc
