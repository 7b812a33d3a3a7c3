#include "glc/job_manager.hpp"

#include <algorithm>

#include "glc/error.hpp"

namespace glc {

std::string to_string(JobState state) {
  switch (state) {
    case JobState::queued: return "queued";
    case JobState::running: return "running";
    case JobState::done: return "done";
    case JobState::failed: return "failed";
  }
  return "failed";
}

nlohmann::json status_document(const JobStatus& status) {
  nlohmann::json doc{{"id", status.id},
                     {"session", status.session},
                     {"type", status.type},
                     {"state", to_string(status.state)},
                     {"progress", status.progress}};
  doc["error"] = status.error ? nlohmann::json(*status.error) : nlohmann::json(nullptr);
  doc["awaiting"] = status.awaiting ? *status.awaiting : nlohmann::json(nullptr);
  doc["has_result"] = status.result.has_value();
  return doc;
}

struct JobManager::Job {
  JobStatus status;
  Work work;
  JobContext::Validator validator;
  std::optional<nlohmann::json> decision;
};

namespace {
struct Stopped {};
}  // namespace

class JobManager::Context final : public JobContext {
 public:
  Context(JobManager& owner, Job& job) : owner_(owner), job_(job) {}

  void progress(double fraction) override {
    std::lock_guard lock(owner_.mutex_);
    job_.status.progress = std::clamp(std::max(fraction, job_.status.progress), 0.0, 1.0);
    owner_.changed_.notify_all();
  }

  nlohmann::json await_decision(const nlohmann::json& prompt, Validator validate) override {
    std::unique_lock lock(owner_.mutex_);
    job_.status.awaiting = prompt;
    job_.validator = std::move(validate);
    job_.decision.reset();
    owner_.changed_.notify_all();
    owner_.changed_.wait(lock, [&] { return job_.decision.has_value() || owner_.stopping_; });
    if (!job_.decision) throw Stopped{};
    nlohmann::json decision = std::move(*job_.decision);
    job_.decision.reset();
    job_.status.awaiting.reset();
    job_.validator = nullptr;
    owner_.changed_.notify_all();
    return decision;
  }

 private:
  JobManager& owner_;
  Job& job_;
};

JobManager::JobManager(std::size_t workers) {
  workers = std::max<std::size_t>(1, workers);
  for (std::size_t i = 0; i < workers; ++i) workers_.emplace_back([this] { worker_loop(); });
}

JobManager::~JobManager() {
  {
    std::lock_guard lock(mutex_);
    stopping_ = true;
  }
  work_ready_.notify_all();
  changed_.notify_all();
  workers_.clear();
}

std::string JobManager::submit(const std::string& session, const std::string& type, Work work) {
  auto job = std::make_shared<Job>();
  job->work = std::move(work);
  job->status.session = session;
  job->status.type = type;
  std::lock_guard lock(mutex_);
  job->status.id = "job-" + std::to_string(++counter_);
  jobs_[job->status.id] = job;
  queue_.push_back(job);
  work_ready_.notify_one();
  return job->status.id;
}

JobStatus JobManager::status(const std::string& id) const {
  std::lock_guard lock(mutex_);
  auto it = jobs_.find(id);
  if (it == jobs_.end()) throw NotFoundError("no job '" + id + "'");
  return it->second->status;
}

void JobManager::decide(const std::string& id, const nlohmann::json& decision) {
  std::lock_guard lock(mutex_);
  auto it = jobs_.find(id);
  if (it == jobs_.end()) throw NotFoundError("no job '" + id + "'");
  Job& job = *it->second;
  if (!job.status.awaiting || job.decision) throw ConflictError("job '" + id + "' is not waiting for a decision");
  if (job.validator) job.validator(decision);
  job.decision = decision;
  job.status.awaiting.reset();
  changed_.notify_all();
}

JobStatus JobManager::wait(const std::string& id) const {
  std::unique_lock lock(mutex_);
  auto it = jobs_.find(id);
  if (it == jobs_.end()) throw NotFoundError("no job '" + id + "'");
  auto job = it->second;
  changed_.wait(lock, [&] {
    const auto& s = job->status;
    return s.state == JobState::done || s.state == JobState::failed || (s.awaiting && !job->decision);
  });
  return job->status;
}

void JobManager::worker_loop() {
  while (true) {
    std::shared_ptr<Job> job;
    {
      std::unique_lock lock(mutex_);
      work_ready_.wait(lock, [&] { return stopping_ || !queue_.empty(); });
      if (stopping_) return;
      job = queue_.front();
      queue_.pop_front();
      job->status.state = JobState::running;
      changed_.notify_all();
    }
    Context context(*this, *job);
    std::optional<std::string> result;
    std::optional<std::string> error;
    try {
      result = job->work(context);
    } catch (const Stopped&) {
      error = "service shut down";
    } catch (const std::exception& e) {
      error = e.what();
    }
    std::lock_guard lock(mutex_);
    job->work = nullptr;
    if (result) {
      job->status.result = std::move(result);
      job->status.progress = 1.0;
      job->status.state = JobState::done;
    } else {
      job->status.error = std::move(error);
      job->status.state = JobState::failed;
    }
    job->status.awaiting.reset();
    changed_.notify_all();
  }
}

}  // namespace glc
