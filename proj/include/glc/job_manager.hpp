#pragma once

#include <condition_variable>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

namespace glc {

enum class JobState { queued, running, done, failed };

std::string to_string(JobState state);

struct JobStatus {
  std::string id;
  std::string session;
  std::string type;
  JobState state = JobState::queued;
  double progress = 0.0;
  std::optional<std::string> result;  // serialized document, immutable once set
  std::optional<std::string> error;
  /// Prompt of a paused interactive job.
  std::optional<nlohmann::json> awaiting;
};

nlohmann::json status_document(const JobStatus& status);

/// Handle a running job uses to report progress and to pause for input.
class JobContext {
 public:
  using Validator = std::function<void(const nlohmann::json&)>;

  virtual ~JobContext() = default;
  virtual void progress(double fraction) = 0;
  /// Blocks until decide() supplies a decision that passes `validate`.
  virtual nlohmann::json await_decision(const nlohmann::json& prompt, Validator validate) = 0;
};

/// Bounded worker pool. Job states only move forward:
/// queued -> running -> done | failed.
class JobManager {
 public:
  using Work = std::function<std::string(JobContext&)>;

  explicit JobManager(std::size_t workers = 2);
  ~JobManager();
  JobManager(const JobManager&) = delete;
  JobManager& operator=(const JobManager&) = delete;

  std::string submit(const std::string& session, const std::string& type, Work work);
  JobStatus status(const std::string& id) const;
  /// Resumes a paused job. NotFoundError for unknown jobs, ConflictError
  /// when the job is not waiting, ValidationError for a rejected decision.
  void decide(const std::string& id, const nlohmann::json& decision);
  /// Blocks until the job is done or failed, or until it pauses for input.
  JobStatus wait(const std::string& id) const;

 private:
  struct Job;
  class Context;

  void worker_loop();

  mutable std::mutex mutex_;
  mutable std::condition_variable changed_;
  std::condition_variable work_ready_;
  std::map<std::string, std::shared_ptr<Job>> jobs_;
  std::deque<std::shared_ptr<Job>> queue_;
  std::vector<std::jthread> workers_;
  bool stopping_ = false;
  std::uint64_t counter_ = 0;
};

}  // namespace glc
