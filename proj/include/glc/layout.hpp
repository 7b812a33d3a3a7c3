#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "glc/dataset.hpp"

namespace glc {

/// The four General Line Coordinate systems: Parallel, Shifted Paired,
/// Static Circular and Dynamic Circular coordinates.
enum class GlcKind { pc, spc, scc, dcc };

std::string to_string(GlcKind kind);
GlcKind glc_kind_from_string(const std::string& text);

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Geometry parameters for one GLC.
///
/// Conventions shared by every kind:
///  - vertex i shows attribute `attribute_order[i]`;
///  - an inverted attribute is drawn as 1 - x;
///  - circular kinds center the circle at the origin, start at north
///    (0, radius) and travel clockwise.
struct LayoutConfig {
  GlcKind kind = GlcKind::pc;
  std::vector<std::size_t> attribute_order;  // permutation of 0..n-1
  std::vector<bool> inverted;                // indexed by original attribute
  double radius = 1.0;
  std::vector<double> coefficients;  // DCC arc scale per original attribute, all > 0
  double curvature = 0.85;           // Bezier pull toward the center, in [0,1]
  double pair_gap = 0.25;            // SPC spacing between unit squares

  /// Identity order, nothing inverted, unit coefficients.
  static LayoutConfig defaults(GlcKind kind, std::size_t dimension);
  /// Throws ValidationError if the config is unusable for `dimension`.
  void validate(std::size_t dimension) const;
};

struct CaseGlyph {
  CaseId id;
  std::string label;
  Provenance provenance = Provenance::real;
  std::vector<Point2> vertices;
  /// Quadratic Bezier control per consecutive vertex pair (circular kinds).
  std::vector<Point2> controls;
  /// Unwrapped cumulative arc length per vertex (circular kinds). Rendered
  /// positions wrap around the circle; these do not.
  std::vector<double> arc_params;
};

struct Segment2 {
  Point2 from;
  Point2 to;
};

struct LayoutFrame {
  std::vector<Segment2> axes;         // PC: one vertical unit axis per attribute
  std::vector<Point2> square_origins; // SPC: lower-left corner of each unit square
  std::vector<double> sector_angles;  // SCC: boundary angles, clockwise from north (radians)
  double radius = 0.0;                // circular kinds
};

struct Layout {
  GlcKind kind = GlcKind::pc;
  LayoutConfig config;
  std::size_t dimension = 0;
  std::vector<std::string> attribute_names;
  std::vector<std::string> class_palette;
  LayoutFrame frame;
  std::vector<CaseGlyph> glyphs;
};

Layout layout_pc(const NormalizedDataset& dataset, const LayoutConfig& config);
Layout layout_spc(const NormalizedDataset& dataset, const LayoutConfig& config);
Layout layout_scc(const NormalizedDataset& dataset, const LayoutConfig& config);
Layout layout_dcc(const NormalizedDataset& dataset, const LayoutConfig& config);
/// Dispatches on config.kind.
Layout compute_layout(const NormalizedDataset& dataset, const LayoutConfig& config);

/// Recovers each glyph's normalized vector in original attribute order.
std::vector<CaseRecord> invert_layout(const Layout& layout);
/// As above, then mapped back to raw units.
std::vector<std::vector<double>> invert_layout_raw(const Layout& layout, const AttributeStats& stats);

/// Pair points of one case under SPC (odd n repeats the last attribute).
std::vector<Point2> spc_pair_points(std::span<const double> values, const LayoutConfig& config);

/// Position on the circle at unwrapped arc `arc`, clockwise from north.
Point2 point_on_circle(double arc, double radius);

}  // namespace glc
