#include "glc/layout.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "glc/error.hpp"

namespace glc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Values in drawing order with inversion applied.
std::vector<double> displayed_values(std::span<const double> values, const LayoutConfig& config) {
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::size_t a = config.attribute_order[i];
    out[i] = config.inverted[a] ? 1.0 - values[a] : values[a];
  }
  return out;
}

// Inverse of displayed_values for one slot.
void store_value(std::vector<double>& out, std::size_t slot, double shown, const LayoutConfig& config) {
  std::size_t a = config.attribute_order[slot];
  double v = config.inverted[a] ? 1.0 - shown : shown;
  out[a] = std::clamp(v, 0.0, 1.0);
}

Layout make_layout(const NormalizedDataset& dataset, const LayoutConfig& config, GlcKind expected) {
  if (config.kind != expected) {
    throw ValidationError("layout config is for " + to_string(config.kind) + ", expected " +
                          to_string(expected));
  }
  config.validate(dataset.dimension());
  Layout layout;
  layout.kind = expected;
  layout.config = config;
  layout.dimension = dataset.dimension();
  layout.attribute_names = dataset.attribute_names();
  layout.class_palette = dataset.class_palette();
  layout.glyphs.reserve(dataset.size());
  return layout;
}

CaseGlyph start_glyph(const CaseRecord& c) {
  CaseGlyph g;
  g.id = c.id;
  g.label = c.label;
  g.provenance = c.provenance;
  return g;
}

void add_curve_controls(CaseGlyph& glyph, double curvature) {
  for (std::size_t i = 0; i + 1 < glyph.vertices.size(); ++i) {
    const Point2& a = glyph.vertices[i];
    const Point2& b = glyph.vertices[i + 1];
    // Chord midpoint pulled toward the center (origin).
    double keep = 1.0 - curvature;
    glyph.controls.push_back({0.5 * (a.x + b.x) * keep, 0.5 * (a.y + b.y) * keep});
  }
}

double sector_length(const LayoutConfig& config, std::size_t n) {
  return kTwoPi * config.radius / static_cast<double>(n);
}

void require_arcs(const CaseGlyph& glyph, std::size_t n) {
  if (glyph.arc_params.size() != n) {
    throw ValidationError("glyph " + std::to_string(glyph.id.value) +
                          " is missing arc parameters; cannot invert a circular layout");
  }
}

}  // namespace

std::string to_string(GlcKind kind) {
  switch (kind) {
    case GlcKind::pc: return "pc";
    case GlcKind::spc: return "spc";
    case GlcKind::scc: return "scc";
    case GlcKind::dcc: return "dcc";
  }
  return "pc";
}

GlcKind glc_kind_from_string(const std::string& text) {
  std::string t = text;
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "pc") return GlcKind::pc;
  if (t == "spc") return GlcKind::spc;
  if (t == "scc") return GlcKind::scc;
  if (t == "dcc") return GlcKind::dcc;
  throw ValidationError("unknown GLC kind '" + text + "' (expected pc, spc, scc or dcc)");
}

LayoutConfig LayoutConfig::defaults(GlcKind kind, std::size_t dimension) {
  LayoutConfig config;
  config.kind = kind;
  config.attribute_order.resize(dimension);
  for (std::size_t i = 0; i < dimension; ++i) config.attribute_order[i] = i;
  config.inverted.assign(dimension, false);
  config.coefficients.assign(dimension, 1.0);
  return config;
}

void LayoutConfig::validate(std::size_t dimension) const {
  if (dimension == 0) throw ValidationError("layout needs at least one attribute");
  if (attribute_order.size() != dimension) {
    throw ValidationError("attribute_order has " + std::to_string(attribute_order.size()) +
                          " entries, expected " + std::to_string(dimension));
  }
  std::vector<bool> seen(dimension, false);
  for (std::size_t a : attribute_order) {
    if (a >= dimension || seen[a]) throw ValidationError("attribute_order is not a permutation");
    seen[a] = true;
  }
  if (inverted.size() != dimension) throw ValidationError("inverted flags do not match dimension");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw ValidationError("radius must be positive");
  if (!(curvature >= 0.0 && curvature <= 1.0)) throw ValidationError("curvature must be in [0,1]");
  if (!std::isfinite(pair_gap) || pair_gap < 0.0) throw ValidationError("pair_gap must be >= 0");
  if (kind == GlcKind::spc && dimension < 2) throw ValidationError("SPC needs at least two attributes");
  if (kind == GlcKind::dcc) {
    if (coefficients.size() != dimension) {
      throw ValidationError("DCC needs one coefficient per attribute");
    }
    for (double c : coefficients) {
      if (!(c > 0.0) || !std::isfinite(c)) throw ValidationError("DCC coefficients must be > 0");
    }
  }
}

Point2 point_on_circle(double arc, double radius) {
  double angle = std::fmod(arc / radius, kTwoPi);
  return {radius * std::sin(angle), radius * std::cos(angle)};
}

Layout layout_pc(const NormalizedDataset& dataset, const LayoutConfig& config) {
  Layout layout = make_layout(dataset, config, GlcKind::pc);
  const std::size_t n = dataset.dimension();
  for (std::size_t i = 0; i < n; ++i) {
    double x = static_cast<double>(i);
    layout.frame.axes.push_back({{x, 0.0}, {x, 1.0}});
  }
  for (const auto& c : dataset.cases()) {
    CaseGlyph g = start_glyph(c);
    auto shown = displayed_values(c.values, config);
    for (std::size_t i = 0; i < n; ++i) g.vertices.push_back({static_cast<double>(i), shown[i]});
    layout.glyphs.push_back(std::move(g));
  }
  return layout;
}

std::vector<Point2> spc_pair_points(std::span<const double> values, const LayoutConfig& config) {
  auto shown = displayed_values(values, config);
  if (shown.size() % 2 == 1) shown.push_back(shown.back());
  std::vector<Point2> points;
  const double stride = 1.0 + config.pair_gap;
  for (std::size_t j = 0; j < shown.size() / 2; ++j) {
    points.push_back({static_cast<double>(j) * stride + shown[2 * j], shown[2 * j + 1]});
  }
  return points;
}

Layout layout_spc(const NormalizedDataset& dataset, const LayoutConfig& config) {
  Layout layout = make_layout(dataset, config, GlcKind::spc);
  const std::size_t squares = (dataset.dimension() + 1) / 2;
  const double stride = 1.0 + config.pair_gap;
  for (std::size_t j = 0; j < squares; ++j) {
    layout.frame.square_origins.push_back({static_cast<double>(j) * stride, 0.0});
  }
  for (const auto& c : dataset.cases()) {
    CaseGlyph g = start_glyph(c);
    g.vertices = spc_pair_points(c.values, config);
    layout.glyphs.push_back(std::move(g));
  }
  return layout;
}

Layout layout_scc(const NormalizedDataset& dataset, const LayoutConfig& config) {
  Layout layout = make_layout(dataset, config, GlcKind::scc);
  const std::size_t n = dataset.dimension();
  const double len = sector_length(config, n);
  layout.frame.radius = config.radius;
  for (std::size_t i = 0; i < n; ++i) {
    layout.frame.sector_angles.push_back(kTwoPi * static_cast<double>(i) / static_cast<double>(n));
  }
  for (const auto& c : dataset.cases()) {
    CaseGlyph g = start_glyph(c);
    auto shown = displayed_values(c.values, config);
    for (std::size_t i = 0; i < n; ++i) {
      double arc = static_cast<double>(i) * len + shown[i] * len;
      g.arc_params.push_back(arc);
      g.vertices.push_back(point_on_circle(arc, config.radius));
    }
    add_curve_controls(g, config.curvature);
    layout.glyphs.push_back(std::move(g));
  }
  return layout;
}

Layout layout_dcc(const NormalizedDataset& dataset, const LayoutConfig& config) {
  Layout layout = make_layout(dataset, config, GlcKind::dcc);
  const std::size_t n = dataset.dimension();
  const double len = sector_length(config, n);
  layout.frame.radius = config.radius;
  for (const auto& c : dataset.cases()) {
    CaseGlyph g = start_glyph(c);
    auto shown = displayed_values(c.values, config);
    double arc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      arc += config.coefficients[config.attribute_order[i]] * shown[i] * len;
      g.arc_params.push_back(arc);
      g.vertices.push_back(point_on_circle(arc, config.radius));
    }
    add_curve_controls(g, config.curvature);
    layout.glyphs.push_back(std::move(g));
  }
  return layout;
}

Layout compute_layout(const NormalizedDataset& dataset, const LayoutConfig& config) {
  switch (config.kind) {
    case GlcKind::pc: return layout_pc(dataset, config);
    case GlcKind::spc: return layout_spc(dataset, config);
    case GlcKind::scc: return layout_scc(dataset, config);
    case GlcKind::dcc: return layout_dcc(dataset, config);
  }
  throw ValidationError("unknown GLC kind");
}

std::vector<CaseRecord> invert_layout(const Layout& layout) {
  const LayoutConfig& config = layout.config;
  const std::size_t n = layout.dimension;
  config.validate(n);
  const double len = sector_length(config, n);
  const double stride = 1.0 + config.pair_gap;

  std::vector<CaseRecord> out;
  out.reserve(layout.glyphs.size());
  for (const auto& g : layout.glyphs) {
    CaseRecord c;
    c.id = g.id;
    c.label = g.label;
    c.provenance = g.provenance;
    c.values.assign(n, 0.0);
    switch (layout.kind) {
      case GlcKind::pc:
        if (g.vertices.size() != n) throw ValidationError("PC glyph has wrong vertex count");
        for (std::size_t i = 0; i < n; ++i) store_value(c.values, i, g.vertices[i].y, config);
        break;
      case GlcKind::spc: {
        if (g.vertices.size() != (n + 1) / 2) throw ValidationError("SPC glyph has wrong vertex count");
        for (std::size_t j = 0; j < g.vertices.size(); ++j) {
          double first = g.vertices[j].x - static_cast<double>(j) * stride;
          store_value(c.values, 2 * j, first, config);
          if (2 * j + 1 < n) store_value(c.values, 2 * j + 1, g.vertices[j].y, config);
        }
        break;
      }
      case GlcKind::scc:
        require_arcs(g, n);
        for (std::size_t i = 0; i < n; ++i) {
          double offset = (g.arc_params[i] - static_cast<double>(i) * len) / len;
          store_value(c.values, i, offset, config);
        }
        break;
      case GlcKind::dcc: {
        require_arcs(g, n);
        double previous = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          double coefficient = config.coefficients[config.attribute_order[i]];
          if (coefficient == 0.0) throw ValidationError("zero DCC coefficient");
          store_value(c.values, i, (g.arc_params[i] - previous) / (coefficient * len), config);
          previous = g.arc_params[i];
        }
        break;
      }
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<std::vector<double>> invert_layout_raw(const Layout& layout, const AttributeStats& stats) {
  if (stats.dimension() != layout.dimension) throw ValidationError("dimensionality mismatch");
  std::vector<std::vector<double>> out;
  for (const auto& c : invert_layout(layout)) out.push_back(denormalize_point(c.values, stats));
  return out;
}

}  // namespace glc
