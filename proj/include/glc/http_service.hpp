#pragma once

#include <memory>
#include <string>

#include "glc/job_manager.hpp"
#include "glc/pipeline.hpp"
#include "glc/session_store.hpp"

namespace glc {

/// Pipeline decisions supplied through a paused job. Each decision point
/// publishes a prompt and blocks until POST /jobs/{id}/decision answers it.
class InteractivePolicy final : public DecisionSource {
 public:
  explicit InteractivePolicy(JobContext& context) : context_(context) {}

  std::vector<SdgStrategy> choose_generation(const DecisionContext& context) override;
  ReviewDecision review(const DecisionContext& context) override;
  std::vector<SdgStrategy> choose_outside_lp(const DecisionContext& context) override;
  std::optional<GlcKind> choose_next_glc(const DecisionContext& context) override;

 private:
  std::vector<SdgStrategy> strategies(const DecisionContext& context);

  JobContext& context_;
};

/// HTTP front end over a session store and a job manager.
///
///   POST /sessions                       upload (multipart "dataset" or raw CSV body)
///   GET  /sessions/:id                   summary
///   GET  /sessions/:id/layout            geometry document or SVG
///   PUT  /sessions/:id/layout_config     store a per-GLC config
///   GET  /sessions/:id/purity            purity report
///   POST /sessions/:id/edits             edit command + expected_version
///   POST /sessions/:id/sdg               strategy + seed (commit=false previews)
///   POST /sessions/:id/activate          undo: re-append an earlier version
///   GET  /sessions/:id/export            CSV of a version
///   POST /jobs, GET /jobs/:id, GET /jobs/:id/result, POST /jobs/:id/decision
class HttpService {
 public:
  HttpService(SessionStore& store, JobManager& jobs);
  ~HttpService();

  /// Binds to `port` (0 picks a free one) and returns the bound port.
  int bind(const std::string& host, int port);
  /// Serves until stop(). Call after bind().
  void run();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace glc
