#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "glc/dataset.hpp"
#include "glc/layout.hpp"
#include "glc/purity.hpp"

namespace glc {

struct SessionHead {
  std::string id;
  std::size_t version = 0;  // index of the head in the version chain
  NormalizedDataset dataset;
};

/// Sessions with append-only dataset histories, persisted one directory
/// per session:
///   <root>/<id>/session.json   attributes, stats, per-version ids and origin
///   <root>/<id>/v<k>.csv       normalized values, class, provenance
/// Writes to one session are serialized; sessions do not share locks.
class SessionStore {
 public:
  /// Reloads every session found under `root`.
  explicit SessionStore(std::filesystem::path root);

  std::string create(const NormalizedDataset& dataset, const std::string& origin = "upload");
  std::vector<std::string> ids() const;
  bool contains(const std::string& id) const;

  SessionHead head(const std::string& id) const;
  NormalizedDataset version(const std::string& id, std::size_t index) const;
  std::size_t version_count(const std::string& id) const;
  std::vector<std::string> origins(const std::string& id) const;

  using Transform = std::function<NormalizedDataset(const NormalizedDataset&)>;
  /// Appends transform(head) when `expected_version` is the current head;
  /// ConflictError otherwise.
  SessionHead commit(const std::string& id, std::size_t expected_version, const Transform& transform,
                     const std::string& origin);
  /// Undo/redo: appends a copy of an earlier version as the new head.
  SessionHead activate(const std::string& id, std::size_t version, std::size_t expected_version);

  LayoutConfig layout_config(const std::string& id, GlcKind kind) const;
  void set_layout_config(const std::string& id, const LayoutConfig& config);

  /// Cached per head version and min_support.
  PurityReport purity(const std::string& id, std::size_t min_support);

 private:
  struct Version {
    NormalizedDataset dataset;
    std::string origin;
  };
  struct Session {
    mutable std::mutex mutex;
    std::string id;
    std::vector<Version> versions;
    std::map<GlcKind, LayoutConfig> layout_configs;
    std::optional<PurityReport> purity;
  };

  std::shared_ptr<Session> find(const std::string& id) const;
  void persist_version(const Session& session, std::size_t index) const;
  void persist_meta(const Session& session) const;
  void load(const std::filesystem::path& dir);
  std::string fresh_id();

  std::filesystem::path root_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t counter_ = 0;
};

}  // namespace glc
