#pragma once

#include <string>
#include <vector>

#include "glc/layout.hpp"

namespace glc {

struct SvgOptions {
  double width = 800.0;
  double height = 800.0;
  double margin = 40.0;
  double stroke_width = 1.0;
  /// Colors by class palette index; an empty list uses the built-in
  /// palette (red, green, blue, ...).
  std::vector<std::string> class_colors;
};

enum class GeometryFormat { svg, geometry_json };

/// Color for class `index` in the default palette.
std::string default_class_color(std::size_t index);

std::string export_svg(const Layout& layout, const SvgOptions& options = {});
std::string export_geometry(const Layout& layout, GeometryFormat format);
/// Parses a geometry document produced by export_geometry.
Layout load_geometry(const std::string& document);

}  // namespace glc
