#include "glc/session_store.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include "glc/error.hpp"
#include "glc/json_io.hpp"

namespace glc {

namespace fs = std::filesystem;

namespace {

std::string version_file(std::size_t index) {
  std::ostringstream name;
  name << 'v' << index << ".csv";
  return name.str();
}

void write_atomically(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out << content;
    if (!out) throw Error("failed writing '" + tmp.string() + "'");
  }
  fs::rename(tmp, path);
}

}  // namespace

SessionStore::SessionStore(fs::path root) : root_(std::move(root)) {
  fs::create_directories(root_);
  for (const auto& entry : fs::directory_iterator(root_)) {
    if (entry.is_directory() && fs::exists(entry.path() / "session.json")) load(entry.path());
  }
}

std::string SessionStore::fresh_id() {
  static thread_local std::mt19937_64 engine{std::random_device{}()};
  std::ostringstream id;
  id << std::hex << engine() << '-' << ++counter_;
  return id.str();
}

std::string SessionStore::create(const NormalizedDataset& dataset, const std::string& origin) {
  if (dataset.empty()) throw ValidationError("cannot create a session from an empty dataset");
  auto session = std::make_shared<Session>();
  {
    std::lock_guard lock(mutex_);
    do {
      session->id = fresh_id();
    } while (sessions_.count(session->id));
  }
  session->versions.push_back({dataset, origin});
  fs::create_directories(root_ / session->id);
  persist_version(*session, 0);
  persist_meta(*session);
  std::lock_guard lock(mutex_);
  sessions_[session->id] = session;
  return session->id;
}

std::vector<std::string> SessionStore::ids() const {
  std::lock_guard lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [id, _] : sessions_) out.push_back(id);
  return out;
}

bool SessionStore::contains(const std::string& id) const {
  std::lock_guard lock(mutex_);
  return sessions_.count(id) > 0;
}

std::shared_ptr<SessionStore::Session> SessionStore::find(const std::string& id) const {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw NotFoundError("no session '" + id + "'");
  return it->second;
}

SessionHead SessionStore::head(const std::string& id) const {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  return {s->id, s->versions.size() - 1, s->versions.back().dataset};
}

NormalizedDataset SessionStore::version(const std::string& id, std::size_t index) const {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  if (index >= s->versions.size()) {
    throw NotFoundError("session '" + id + "' has no version " + std::to_string(index));
  }
  return s->versions[index].dataset;
}

std::size_t SessionStore::version_count(const std::string& id) const {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  return s->versions.size();
}

std::vector<std::string> SessionStore::origins(const std::string& id) const {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  std::vector<std::string> out;
  for (const auto& v : s->versions) out.push_back(v.origin);
  return out;
}

SessionHead SessionStore::commit(const std::string& id, std::size_t expected_version, const Transform& transform,
                                 const std::string& origin) {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  std::size_t head = s->versions.size() - 1;
  if (expected_version != head) {
    throw ConflictError("expected version " + std::to_string(expected_version) + " but head is " +
                        std::to_string(head));
  }
  NormalizedDataset next = transform(s->versions.back().dataset);
  s->versions.push_back({std::move(next), origin});
  s->purity.reset();
  persist_version(*s, head + 1);
  persist_meta(*s);
  return {s->id, head + 1, s->versions.back().dataset};
}

SessionHead SessionStore::activate(const std::string& id, std::size_t version, std::size_t expected_version) {
  auto s = find(id);
  {
    std::lock_guard lock(s->mutex);
    if (version >= s->versions.size()) {
      throw NotFoundError("session '" + id + "' has no version " + std::to_string(version));
    }
  }
  NormalizedDataset target = this->version(id, version);
  return commit(
      id, expected_version, [&](const NormalizedDataset&) { return target; },
      "activate v" + std::to_string(version));
}

LayoutConfig SessionStore::layout_config(const std::string& id, GlcKind kind) const {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  auto it = s->layout_configs.find(kind);
  if (it != s->layout_configs.end()) return it->second;
  return LayoutConfig::defaults(kind, s->versions.back().dataset.dimension());
}

void SessionStore::set_layout_config(const std::string& id, const LayoutConfig& config) {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  config.validate(s->versions.back().dataset.dimension());
  s->layout_configs[config.kind] = config;
  persist_meta(*s);
}

PurityReport SessionStore::purity(const std::string& id, std::size_t min_support) {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  const auto& head = s->versions.back().dataset;
  if (!s->purity || s->purity->min_support != min_support ||
      s->purity->dataset_fingerprint != head.fingerprint()) {
    s->purity = rank_regions_by_purity(head, min_support);
  }
  return *s->purity;
}

void SessionStore::persist_version(const Session& session, std::size_t index) const {
  std::ostringstream csv;
  write_dataset_csv(csv, session.versions[index].dataset, {.denormalize = false, .provenance_column = true});
  write_atomically(root_ / session.id / version_file(index), csv.str());
}

void SessionStore::persist_meta(const Session& session) const {
  const auto& first = session.versions.front().dataset;
  json meta{{"id", session.id}, {"attributes", first.attribute_names()}, {"stats", first.stats()}};
  json versions = json::array();
  for (std::size_t i = 0; i < session.versions.size(); ++i) {
    const auto& d = session.versions[i].dataset;
    std::vector<CaseId> ids;
    for (const auto& c : d.cases()) ids.push_back(c.id);
    versions.push_back({{"file", version_file(i)},
                        {"origin", session.versions[i].origin},
                        {"ids", ids},
                        {"palette", d.class_palette()},
                        {"next_id", d.next_id()}});
  }
  meta["versions"] = versions;
  json configs = json::array();
  for (const auto& [_, config] : session.layout_configs) configs.push_back(config);
  meta["layout_configs"] = configs;
  write_atomically(root_ / session.id / "session.json", meta.dump(1));
}

void SessionStore::load(const fs::path& dir) {
  std::ifstream in(dir / "session.json");
  json meta = json::parse(in);
  auto session = std::make_shared<Session>();
  session->id = meta.at("id").get<std::string>();
  auto attributes = meta.at("attributes").get<std::vector<std::string>>();
  auto stats = meta.at("stats").get<AttributeStats>();
  for (const auto& v : meta.at("versions")) {
    RawDataset raw = load_dataset(dir / v.at("file").get<std::string>());
    auto ids = v.at("ids").get<std::vector<CaseId>>();
    if (ids.size() != raw.size()) throw Error("session '" + session->id + "' has a corrupt version");
    std::vector<CaseRecord> cases;
    for (std::size_t r = 0; r < raw.size(); ++r) {
      cases.push_back({ids[r], raw.rows[r], raw.labels[r],
                       raw.provenance.empty() ? Provenance::real : raw.provenance[r]});
    }
    session->versions.push_back(
        {NormalizedDataset(attributes, stats, std::move(cases), v.at("palette").get<std::vector<std::string>>(),
                           v.at("next_id").get<std::uint64_t>()),
         v.at("origin").get<std::string>()});
  }
  for (const auto& c : meta.at("layout_configs")) {
    auto config = c.get<LayoutConfig>();
    session->layout_configs[config.kind] = config;
  }
  sessions_[session->id] = session;
}

}  // namespace glc
