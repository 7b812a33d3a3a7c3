#include "glc/geometry_export.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <sstream>

#include "glc/error.hpp"
#include "glc/json_io.hpp"

namespace glc {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Bounds {
  double min_x = std::numeric_limits<double>::max();
  double min_y = std::numeric_limits<double>::max();
  double max_x = std::numeric_limits<double>::lowest();
  double max_y = std::numeric_limits<double>::lowest();

  void add(Point2 p) {
    min_x = std::min(min_x, p.x);
    min_y = std::min(min_y, p.y);
    max_x = std::max(max_x, p.x);
    max_y = std::max(max_y, p.y);
  }
};

Bounds frame_bounds(const Layout& layout) {
  Bounds b;
  switch (layout.kind) {
    case GlcKind::pc: {
      double last = layout.dimension > 0 ? static_cast<double>(layout.dimension - 1) : 0.0;
      b.add({0.0, 0.0});
      b.add({std::max(last, 1.0), 1.0});
      break;
    }
    case GlcKind::spc:
      b.add({0.0, 0.0});
      for (const auto& o : layout.frame.square_origins) b.add({o.x + 1.0, o.y + 1.0});
      break;
    case GlcKind::scc:
    case GlcKind::dcc: {
      double r = layout.config.radius;
      b.add({-r, -r});
      b.add({r, r});
      break;
    }
  }
  return b;
}

// Data space (y up) to SVG pixels (y down), aspect preserved.
struct Viewport {
  Bounds bounds;
  double scale = 1.0;
  double margin = 0.0;
  double offset_x = 0.0;
  double offset_y = 0.0;

  Viewport(const Bounds& b, const SvgOptions& options) : bounds(b), margin(options.margin) {
    double w = std::max(b.max_x - b.min_x, 1e-12);
    double h = std::max(b.max_y - b.min_y, 1e-12);
    scale = std::min((options.width - 2 * margin) / w, (options.height - 2 * margin) / h);
    offset_x = margin + 0.5 * ((options.width - 2 * margin) - w * scale);
    offset_y = margin + 0.5 * ((options.height - 2 * margin) - h * scale);
  }

  std::string x(double v) const { return num(offset_x + (v - bounds.min_x) * scale); }
  std::string y(double v) const { return num(offset_y + (bounds.max_y - v) * scale); }
  std::string pt(Point2 p) const { return x(p.x) + " " + y(p.y); }
};

void emit_line(std::ostringstream& svg, const Viewport& vp, Point2 a, Point2 b, const char* cls) {
  svg << "    <line class=\"" << cls << "\" x1=\"" << vp.x(a.x) << "\" y1=\"" << vp.y(a.y)
      << "\" x2=\"" << vp.x(b.x) << "\" y2=\"" << vp.y(b.y) << "\"/>\n";
}

}  // namespace

std::string default_class_color(std::size_t index) {
  static const char* kColors[] = {"#d62728", "#2ca02c", "#1f77b4", "#ff7f0e", "#9467bd",
                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  return kColors[index % (sizeof kColors / sizeof kColors[0])];
}

std::string export_svg(const Layout& layout, const SvgOptions& options) {
  Viewport vp(frame_bounds(layout), options);
  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(options.width)
      << "\" height=\"" << num(options.height) << "\" viewBox=\"0 0 " << num(options.width) << ' '
      << num(options.height) << "\">\n"
      << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "  <g class=\"frame\" stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n";

  switch (layout.kind) {
    case GlcKind::pc:
      for (const auto& axis : layout.frame.axes) emit_line(svg, vp, axis.from, axis.to, "axis");
      break;
    case GlcKind::spc:
      for (const auto& o : layout.frame.square_origins) {
        svg << "    <rect class=\"pair-square\" x=\"" << vp.x(o.x) << "\" y=\"" << vp.y(o.y + 1.0)
            << "\" width=\"" << num(vp.scale) << "\" height=\"" << num(vp.scale) << "\"/>\n";
      }
      break;
    case GlcKind::scc:
    case GlcKind::dcc: {
      double r = layout.frame.radius;
      svg << "    <circle class=\"circle\" cx=\"" << vp.x(0.0) << "\" cy=\"" << vp.y(0.0)
          << "\" r=\"" << num(r * vp.scale) << "\"/>\n";
      for (double angle : layout.frame.sector_angles) {
        emit_line(svg, vp, {0.0, 0.0}, point_on_circle(angle * r, r), "sector");
      }
      break;
    }
  }
  svg << "  </g>\n  <g class=\"glyphs\" fill=\"none\" stroke-width=\"" << num(options.stroke_width)
      << "\">\n";

  const bool curved = layout.kind == GlcKind::scc || layout.kind == GlcKind::dcc;
  for (const auto& g : layout.glyphs) {
    if (g.vertices.empty()) continue;
    auto it = std::find(layout.class_palette.begin(), layout.class_palette.end(), g.label);
    std::size_t cls = static_cast<std::size_t>(it - layout.class_palette.begin());
    std::string color = cls < options.class_colors.size() ? options.class_colors[cls]
                                                           : default_class_color(cls);
    svg << "    <path data-id=\"" << g.id.value << "\" data-class=\"" << xml_escape(g.label)
        << "\" stroke=\"" << color << "\"";
    if (g.provenance == Provenance::synthetic) svg << " stroke-dasharray=\"4,2\"";
    svg << " d=\"M " << vp.pt(g.vertices[0]);
    for (std::size_t i = 1; i < g.vertices.size(); ++i) {
      if (curved && i - 1 < g.controls.size()) {
        svg << " Q " << vp.pt(g.controls[i - 1]) << ' ' << vp.pt(g.vertices[i]);
      } else {
        svg << " L " << vp.pt(g.vertices[i]);
      }
    }
    svg << "\"/>\n";
  }
  svg << "  </g>\n</svg>\n";
  return svg.str();
}

std::string export_geometry(const Layout& layout, GeometryFormat format) {
  if (format == GeometryFormat::svg) return export_svg(layout);
  nlohmann::json doc = layout;
  return doc.dump();
}

Layout load_geometry(const std::string& document) {
  try {
    return nlohmann::json::parse(document).get<Layout>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed geometry document: ") + e.what());
  }
}

}  // namespace glc
