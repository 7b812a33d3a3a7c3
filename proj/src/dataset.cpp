#include "glc/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "glc/error.hpp"

namespace glc {

namespace {

std::string trim(std::string_view text) {
  auto begin = text.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) return {};
  auto end = text.find_last_not_of(" \t\r\n");
  return std::string(text.substr(begin, end - begin + 1));
}

std::string lower(std::string text) {
  std::transform(text.begin(), text.end(), text.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return text;
}

// Splits one CSV record. Double-quoted fields may contain commas; "" is an
// escaped quote. Multi-line quoted fields are not supported.
std::vector<std::string> split_record(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(trim(current));
      current.clear();
    } else {
      current += c;
    }
  }
  fields.push_back(trim(current));
  return fields;
}

std::optional<double> parse_number(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (*first == '+') ++first;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) return std::nullopt;
  return value;
}

std::string quote_if_needed(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void fnv_mix(std::uint64_t& hash, const void* data, std::size_t size) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < size; ++i) {
    hash ^= bytes[i];
    hash *= 0x100000001B3ULL;
  }
}

std::unordered_set<CaseId> require_ids(const NormalizedDataset& dataset,
                                       const std::vector<CaseId>& ids) {
  std::unordered_set<CaseId> wanted;
  for (CaseId id : ids) {
    if (!dataset.find(id)) {
      throw NotFoundError("unknown case id " + std::to_string(id.value));
    }
    wanted.insert(id);
  }
  return wanted;
}

}  // namespace

std::string to_string(Provenance p) {
  return p == Provenance::real ? "real" : "synthetic";
}

Provenance provenance_from_string(const std::string& text) {
  auto t = lower(trim(text));
  if (t == "real") return Provenance::real;
  if (t == "synthetic") return Provenance::synthetic;
  throw ValidationError("provenance must be 'real' or 'synthetic', got '" + text + "'");
}

void RawDataset::validate() const {
  if (attribute_names.empty()) throw ValidationError("dataset needs at least one attribute");
  if (rows.empty()) throw ValidationError("dataset needs at least one row");
  if (labels.size() != rows.size()) throw ValidationError("label count differs from row count");
  if (!provenance.empty() && provenance.size() != rows.size()) {
    throw ValidationError("provenance count differs from row count");
  }
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != attribute_names.size()) {
      throw ParseError("expected " + std::to_string(attribute_names.size()) + " attributes, got " +
                           std::to_string(rows[r].size()),
                       r + 2, 0);
    }
    if (labels[r].empty()) throw ParseError("empty class label", r + 2, 0);
  }
}

RawDataset load_dataset(std::istream& in, DataFormat /*format*/) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header = split_record(line);
      break;
    }
  }
  if (header.empty()) throw ParseError("missing header row", 1, 0);
  if (!header.empty() && header.front().rfind("\xEF\xBB\xBF", 0) == 0) {
    header.front().erase(0, 3);
  }

  std::optional<std::size_t> class_col;
  std::optional<std::size_t> provenance_col;
  RawDataset raw;
  std::vector<std::size_t> attribute_cols;
  for (std::size_t c = 0; c < header.size(); ++c) {
    auto name = lower(header[c]);
    if (name == "class") {
      if (class_col) throw ParseError("more than one 'class' column", line_no, c + 1);
      class_col = c;
    } else if (name == "provenance") {
      provenance_col = c;
    } else {
      attribute_cols.push_back(c);
      raw.attribute_names.push_back(header[c]);
    }
  }
  if (!class_col) throw ParseError("header has no 'class' column", line_no, 0);
  if (attribute_cols.empty()) throw ParseError("header has no attribute columns", line_no, 0);

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_record(line);
    if (fields.size() != header.size()) {
      throw ParseError("expected " + std::to_string(header.size()) + " fields, got " +
                           std::to_string(fields.size()),
                       line_no, 0);
    }
    std::vector<double> row;
    row.reserve(attribute_cols.size());
    for (std::size_t c : attribute_cols) {
      auto value = parse_number(fields[c]);
      if (!value) {
        throw ParseError("non-numeric attribute value '" + fields[c] + "'", line_no, c + 1);
      }
      row.push_back(*value);
    }
    if (fields[*class_col].empty()) throw ParseError("empty class label", line_no, *class_col + 1);
    raw.rows.push_back(std::move(row));
    raw.labels.push_back(fields[*class_col]);
    if (provenance_col) {
      try {
        raw.provenance.push_back(provenance_from_string(fields[*provenance_col]));
      } catch (const ValidationError& e) {
        throw ParseError(e.what(), line_no, *provenance_col + 1);
      }
    }
  }
  if (raw.rows.empty()) throw ParseError("dataset has no data rows", line_no, 0);
  raw.validate();
  return raw;
}

RawDataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open dataset '" + path.string() + "'");
  auto ext = lower(path.extension().string());
  return load_dataset(in, ext == ".txt" ? DataFormat::txt : DataFormat::csv);
}

NormalizedDataset::NormalizedDataset(std::vector<std::string> attribute_names,
                                     AttributeStats stats, std::vector<CaseRecord> cases,
                                     const std::vector<std::string>& palette_hint,
                                     std::uint64_t next_id)
    : attribute_names_(std::move(attribute_names)),
      stats_(std::move(stats)),
      cases_(std::move(cases)),
      next_id_(next_id) {
  const std::size_t n = attribute_names_.size();
  if (n == 0) throw ValidationError("dataset needs at least one attribute");
  if (stats_.dimension() != n || stats_.max.size() != n || stats_.degenerate.size() != n) {
    throw ValidationError("attribute stats do not match attribute count");
  }
  std::unordered_set<CaseId> seen;
  std::unordered_set<std::string> present;
  for (const auto& c : cases_) {
    if (c.values.size() != n) {
      throw ValidationError("case " + std::to_string(c.id.value) + " has dimension " +
                            std::to_string(c.values.size()) + ", expected " + std::to_string(n));
    }
    for (double v : c.values) {
      if (!(v >= 0.0 && v <= 1.0)) {
        throw ValidationError("case " + std::to_string(c.id.value) + " has value outside [0,1]");
      }
    }
    if (c.label.empty()) throw ValidationError("case " + std::to_string(c.id.value) + " has no label");
    if (!seen.insert(c.id).second) {
      throw ValidationError("duplicate case id " + std::to_string(c.id.value));
    }
    next_id_ = std::max(next_id_, c.id.value + 1);
    present.insert(c.label);
  }
  for (const auto& cls : palette_hint) {
    if (present.count(cls) && std::find(palette_.begin(), palette_.end(), cls) == palette_.end()) {
      palette_.push_back(cls);
    }
  }
  for (const auto& c : cases_) {
    if (std::find(palette_.begin(), palette_.end(), c.label) == palette_.end()) {
      palette_.push_back(c.label);
    }
  }
}

std::optional<std::size_t> NormalizedDataset::find(CaseId id) const {
  // Ids are ascending for loaded data; fall back to a scan after edits.
  auto it = std::lower_bound(cases_.begin(), cases_.end(), id,
                             [](const CaseRecord& c, CaseId v) { return c.id < v; });
  if (it != cases_.end() && it->id == id) return static_cast<std::size_t>(it - cases_.begin());
  for (std::size_t i = 0; i < cases_.size(); ++i) {
    if (cases_[i].id == id) return i;
  }
  return std::nullopt;
}

const CaseRecord& NormalizedDataset::at(CaseId id) const {
  auto idx = find(id);
  if (!idx) throw NotFoundError("unknown case id " + std::to_string(id.value));
  return cases_[*idx];
}

std::uint64_t NormalizedDataset::fingerprint() const {
  std::uint64_t hash = 0xCBF29CE484222325ULL;
  for (const auto& name : attribute_names_) fnv_mix(hash, name.data(), name.size() + 1);
  for (const auto& c : cases_) {
    fnv_mix(hash, &c.id.value, sizeof c.id.value);
    fnv_mix(hash, c.values.data(), c.values.size() * sizeof(double));
    fnv_mix(hash, c.label.data(), c.label.size() + 1);
    unsigned char p = c.provenance == Provenance::real ? 0 : 1;
    fnv_mix(hash, &p, 1);
  }
  return hash;
}

NormalizedDataset NormalizedDataset::with_cases(std::vector<CaseRecord> cases,
                                                std::uint64_t next_id) const {
  return NormalizedDataset(attribute_names_, stats_, std::move(cases), palette_,
                           std::max(next_id, next_id_));
}

NormalizedDataset NormalizedDataset::subset(std::span<const CaseId> ids) const {
  std::unordered_set<CaseId> wanted;
  for (CaseId id : ids) {
    if (!find(id)) throw NotFoundError("unknown case id " + std::to_string(id.value));
    wanted.insert(id);
  }
  std::vector<CaseRecord> kept;
  for (const auto& c : cases_) {
    if (wanted.count(c.id)) kept.push_back(c);
  }
  return with_cases(std::move(kept));
}

NormalizedDataset NormalizedDataset::real_only() const {
  std::vector<CaseRecord> kept;
  for (const auto& c : cases_) {
    if (c.provenance == Provenance::real) kept.push_back(c);
  }
  return with_cases(std::move(kept));
}

NormalizedDataset normalize_dataset(const RawDataset& raw) {
  raw.validate();
  const std::size_t n = raw.dimension();
  AttributeStats stats;
  stats.min.assign(n, 0.0);
  stats.max.assign(n, 0.0);
  stats.degenerate.assign(n, false);
  for (std::size_t a = 0; a < n; ++a) {
    double lo = raw.rows.front()[a];
    double hi = lo;
    for (const auto& row : raw.rows) {
      lo = std::min(lo, row[a]);
      hi = std::max(hi, row[a]);
    }
    stats.min[a] = lo;
    stats.max[a] = hi;
    stats.degenerate[a] = lo == hi;
  }

  std::vector<CaseRecord> cases;
  cases.reserve(raw.size());
  for (std::size_t r = 0; r < raw.size(); ++r) {
    CaseRecord c;
    c.id = CaseId{r};
    c.values = normalize_point(raw.rows[r], stats);
    c.label = raw.labels[r];
    c.provenance = raw.provenance.empty() ? Provenance::real : raw.provenance[r];
    cases.push_back(std::move(c));
  }
  return NormalizedDataset(raw.attribute_names, std::move(stats), std::move(cases));
}

std::vector<double> normalize_point(std::span<const double> raw, const AttributeStats& stats) {
  if (raw.size() != stats.dimension()) throw ValidationError("dimensionality mismatch");
  std::vector<double> out(raw.size());
  for (std::size_t a = 0; a < raw.size(); ++a) {
    if (stats.degenerate[a]) {
      out[a] = 0.5;
    } else {
      double v = (raw[a] - stats.min[a]) / (stats.max[a] - stats.min[a]);
      // Column extremes must land exactly on 0 and 1.
      if (raw[a] == stats.min[a]) v = 0.0;
      if (raw[a] == stats.max[a]) v = 1.0;
      out[a] = v;
    }
  }
  return out;
}

std::vector<double> denormalize_point(std::span<const double> values, const AttributeStats& stats) {
  if (values.size() != stats.dimension()) throw ValidationError("dimensionality mismatch");
  std::vector<double> out(values.size());
  for (std::size_t a = 0; a < values.size(); ++a) {
    if (stats.degenerate[a]) {
      out[a] = stats.min[a];
    } else if (values[a] == 0.0) {
      out[a] = stats.min[a];
    } else if (values[a] == 1.0) {
      out[a] = stats.max[a];
    } else {
      out[a] = stats.min[a] + values[a] * (stats.max[a] - stats.min[a]);
    }
  }
  return out;
}

NormalizedDataset edit_cases(const NormalizedDataset& dataset, const EditCommand& command) {
  return std::visit(
      [&](const auto& cmd) -> NormalizedDataset {
        using T = std::decay_t<decltype(cmd)>;
        auto wanted = require_ids(dataset, cmd.ids);
        std::vector<CaseRecord> cases = dataset.cases();

        if constexpr (std::is_same_v<T, ShiftCommand>) {
          if (cmd.delta.size() != dataset.dimension()) {
            throw ValidationError("shift delta has dimension " + std::to_string(cmd.delta.size()) +
                                  ", expected " + std::to_string(dataset.dimension()));
          }
          for (double d : cmd.delta) {
            if (!std::isfinite(d)) throw ValidationError("shift delta must be finite");
          }
          for (auto& c : cases) {
            if (!wanted.count(c.id)) continue;
            for (std::size_t a = 0; a < c.values.size(); ++a) {
              c.values[a] = std::clamp(c.values[a] + cmd.delta[a], 0.0, 1.0);
            }
          }
          return dataset.with_cases(std::move(cases));
        } else if constexpr (std::is_same_v<T, CloneCommand>) {
          std::uint64_t next = dataset.next_id();
          for (const auto& c : dataset.cases()) {
            if (!wanted.count(c.id)) continue;
            CaseRecord copy = c;
            copy.id = CaseId{next++};
            copy.provenance = Provenance::synthetic;
            cases.push_back(std::move(copy));
          }
          return dataset.with_cases(std::move(cases), next);
        } else if constexpr (std::is_same_v<T, DeleteCommand>) {
          std::erase_if(cases, [&](const CaseRecord& c) { return wanted.count(c.id) > 0; });
          return dataset.with_cases(std::move(cases));
        } else {
          if (cmd.label.empty()) throw ValidationError("relabel needs a non-empty class");
          for (auto& c : cases) {
            if (wanted.count(c.id)) c.label = cmd.label;
          }
          return dataset.with_cases(std::move(cases));
        }
      },
      command);
}

std::string format_double(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

void write_dataset_csv(std::ostream& out, const NormalizedDataset& dataset,
                       const ExportOptions& options) {
  if (dataset.empty()) throw ValidationError("cannot export an empty dataset");
  for (const auto& name : dataset.attribute_names()) out << quote_if_needed(name) << ',';
  out << "class";
  if (options.provenance_column) out << ",provenance";
  out << '\n';
  for (const auto& c : dataset.cases()) {
    auto values = options.denormalize ? denormalize_point(c.values, dataset.stats()) : c.values;
    for (double v : values) out << format_double(v) << ',';
    out << quote_if_needed(c.label);
    if (options.provenance_column) out << ',' << to_string(c.provenance);
    out << '\n';
  }
}

void export_dataset(const NormalizedDataset& dataset, const std::filesystem::path& path,
                    const ExportOptions& options) {
  std::ostringstream buffer;
  write_dataset_csv(buffer, dataset, options);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << buffer.str();
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

}  // namespace glc
