#pragma once

#include <string>

#include <json.hpp>

#include "glc/classifiers.hpp"
#include "glc/dataset.hpp"
#include "glc/error.hpp"
#include "glc/evaluation.hpp"
#include "glc/layout.hpp"
#include "glc/pipeline.hpp"
#include "glc/purity.hpp"
#include "glc/rules.hpp"
#include "glc/sdg.hpp"

// Structured documents for the core types. Readers fill absent optional
// fields with defaults and reject wrong types.

namespace glc {

using nlohmann::json;

void to_json(json& j, const CaseId& v);
void from_json(const json& j, CaseId& v);
void to_json(json& j, const Provenance& v);
void from_json(const json& j, Provenance& v);
void to_json(json& j, const CaseRecord& v);
void from_json(const json& j, CaseRecord& v);
void to_json(json& j, const AttributeStats& v);
void from_json(const json& j, AttributeStats& v);
void to_json(json& j, const NormalizedDataset& v);
void from_json(const json& j, NormalizedDataset& v);
void to_json(json& j, const EditCommand& v);
void from_json(const json& j, EditCommand& v);

void to_json(json& j, const GlcKind& v);
void from_json(const json& j, GlcKind& v);
void to_json(json& j, const Point2& v);
void from_json(const json& j, Point2& v);
void to_json(json& j, const Segment2& v);
void from_json(const json& j, Segment2& v);
void to_json(json& j, const LayoutConfig& v);
void from_json(const json& j, LayoutConfig& v);
void to_json(json& j, const CaseGlyph& v);
void from_json(const json& j, CaseGlyph& v);
void to_json(json& j, const LayoutFrame& v);
void from_json(const json& j, LayoutFrame& v);
void to_json(json& j, const Layout& v);
void from_json(const json& j, Layout& v);

void to_json(json& j, const PurityRegion& v);
void from_json(const json& j, PurityRegion& v);
void to_json(json& j, const PurityReport& v);
void from_json(const json& j, PurityReport& v);

void to_json(json& j, const IntervalRule& v);
void from_json(const json& j, IntervalRule& v);
void to_json(json& j, const SlopeRuleConfig& v);
void from_json(const json& j, SlopeRuleConfig& v);
void to_json(json& j, const RuleSet& v);
void from_json(const json& j, RuleSet& v);
void to_json(json& j, const ConfusionMatrix& v);

void to_json(json& j, const SdgStrategy& v);
void from_json(const json& j, SdgStrategy& v);
void to_json(json& j, const SdgBatch& v);
void from_json(const json& j, SdgBatch& v);
void to_json(json& j, const QualityMetrics& v);

void to_json(json& j, const ClassifierKind& v);
void from_json(const json& j, ClassifierKind& v);
void to_json(json& j, const EvalConfig& v);
void from_json(const json& j, EvalConfig& v);
void to_json(json& j, const EvalRow& v);
void from_json(const json& j, EvalRow& v);
void to_json(json& j, const EvalReport& v);
void from_json(const json& j, EvalReport& v);

void to_json(json& j, const AutomaticPolicyConfig& v);
void from_json(const json& j, AutomaticPolicyConfig& v);
void to_json(json& j, const PipelineConfig& v);
void from_json(const json& j, PipelineConfig& v);
void to_json(json& j, const StepRecord& v);
void from_json(const json& j, StepRecord& v);
void to_json(json& j, const SessionLog& v);
void from_json(const json& j, SessionLog& v);

template <class T>
std::string to_json_string(const T& value) {
  return json(value).dump();
}

/// Parses `text` as T, mapping JSON errors to ValidationError.
template <class T>
T parse_json_as(const std::string& text, const std::string& what) {
  try {
    return json::parse(text).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError("malformed " + what + ": " + e.what());
  }
}

}  // namespace glc
