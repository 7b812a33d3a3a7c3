#include <algorithm>
#include <cmath>
#include <numeric>
#include <regex>

#include "doctest.h"
#include "glc/error.hpp"
#include "glc/geometry_export.hpp"
#include "glc/layout.hpp"
#include "glc/random.hpp"
#include "support.hpp"

using namespace glc;
using glc::test::fixture;
using glc::test::iris;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Clockwise from north: angle measured from +y toward +x.
Point2 circle_oracle(double arc, double r) {
  double theta = kPi / 2.0 - arc / r;
  return {r * std::cos(theta), r * std::sin(theta)};
}

NormalizedDataset one(const std::vector<double>& x) { return fixture({x}, {"A"}); }

const CaseGlyph& only_glyph(const Layout& l) { return l.glyphs.at(0); }

void check_point(Point2 p, double x, double y, double tol) {
  CHECK(std::abs(p.x - x) <= tol);
  CHECK(std::abs(p.y - y) <= tol);
}

NormalizedDataset random_points(Rng& rng, std::size_t n, std::size_t count) {
  std::vector<std::vector<double>> rows(count, std::vector<double>(n));
  std::vector<std::string> labels(count);
  for (std::size_t i = 0; i < count; ++i) {
    for (double& v : rows[i]) v = rng.uniform();
    labels[i] = i % 2 ? "A" : "B";
  }
  // Exercise the closed ends as well.
  std::fill(rows[0].begin(), rows[0].end(), 0.0);
  std::fill(rows[1].begin(), rows[1].end(), 1.0);
  return fixture(rows, labels);
}

LayoutConfig random_config(Rng& rng, GlcKind kind, std::size_t n) {
  LayoutConfig c = LayoutConfig::defaults(kind, n);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(std::span(order));
  c.attribute_order = order;
  for (std::size_t i = 0; i < n; ++i) {
    c.inverted[i] = rng.index(2) == 1;
    c.coefficients[i] = rng.uniform(0.05, 3.0);
  }
  c.radius = rng.uniform(0.5, 5.0);
  c.pair_gap = rng.uniform(0.0, 1.0);
  return c;
}

}  // namespace

TEST_CASE("pc vertices") {
  Layout l = layout_pc(one({0, 0, 0, 0}), LayoutConfig::defaults(GlcKind::pc, 4));
  for (std::size_t i = 0; i < 4; ++i) check_point(only_glyph(l).vertices[i], double(i), 0.0, 0.0);

  l = layout_pc(one({1, 0.5, 1, 0.5}), LayoutConfig::defaults(GlcKind::pc, 4));
  check_point(only_glyph(l).vertices[1], 1.0, 0.5, 0.0);
  check_point(only_glyph(l).vertices[3], 3.0, 0.5, 0.0);

  LayoutConfig inv = LayoutConfig::defaults(GlcKind::pc, 4);
  inv.inverted[1] = true;
  l = layout_pc(one({0.2, 0.3, 0.4, 0.5}), inv);
  check_point(only_glyph(l).vertices[1], 1.0, 0.7, 1e-15);
  CHECK(l.frame.axes.size() == 4);
}

TEST_CASE("spc pair points") {
  LayoutConfig c = LayoutConfig::defaults(GlcKind::spc, 4);
  Layout l = layout_spc(one({0.5, 0.5, 0.5, 0.5}), c);
  REQUIRE(only_glyph(l).vertices.size() == 2);
  check_point(only_glyph(l).vertices[0], 0.5, 0.5, 1e-15);
  check_point(only_glyph(l).vertices[1], 1.75, 0.5, 1e-15);

  l = layout_spc(one({0, 0, 1, 1}), c);
  const auto& v = only_glyph(l).vertices;
  CHECK((v[1].y - v[0].y) / (v[1].x - v[0].x) > 0.0);

  LayoutConfig odd = LayoutConfig::defaults(GlcKind::spc, 3);
  std::vector<double> x{0.1, 0.2, 0.3};
  auto pts = spc_pair_points(x, odd);
  REQUIRE(pts.size() == 2);
  check_point(pts[1], 1.25 + 0.3, 0.3, 1e-15);

  CHECK_THROWS_AS(layout_spc(one({0.5}), LayoutConfig::defaults(GlcKind::spc, 1)), ValidationError);
}

TEST_CASE("scc vertices") {
  LayoutConfig c = LayoutConfig::defaults(GlcKind::scc, 4);
  Layout l = layout_scc(one({0, 0.5, 0.25, 1}), c);
  const auto& v = only_glyph(l).vertices;
  check_point(v[0], 0.0, 1.0, 1e-12);
  check_point(v[1], 0.7071, -0.7071, 1e-4);
  check_point(v[3], 0.0, 1.0, 1e-12);
  Point2 expect = circle_oracle(2 * kPi / 4 * (2 + 0.25), 1.0);
  check_point(v[2], expect.x, expect.y, 1e-12);
  CHECK(l.frame.sector_angles.size() == 4);
}

TEST_CASE("scc controls pull the chord midpoint toward the center") {
  LayoutConfig c = LayoutConfig::defaults(GlcKind::scc, 4);
  c.radius = 2.0;
  Layout l = layout_scc(one({0.3, 0.6, 0.1, 0.9}), c);
  const auto& g = only_glyph(l);
  REQUIRE(g.controls.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    Point2 mid{(g.vertices[i].x + g.vertices[i + 1].x) / 2, (g.vertices[i].y + g.vertices[i + 1].y) / 2};
    check_point(g.controls[i], mid.x * (1 - c.curvature), mid.y * (1 - c.curvature), 1e-12);
  }
}

TEST_CASE("dcc vertices") {
  LayoutConfig c = LayoutConfig::defaults(GlcKind::dcc, 4);
  Layout l = layout_dcc(one({1, 1, 1, 1}), c);
  check_point(only_glyph(l).vertices.back(), 0.0, 1.0, 1e-12);
  CHECK(only_glyph(l).arc_params.back() == doctest::Approx(2 * kPi));

  l = layout_dcc(one({0.25, 0, 0, 0}), c);
  for (const auto& v : only_glyph(l).vertices) check_point(v, 0.3827, 0.9239, 1e-4);

  c.coefficients = {0.5, 2.0, 3.0, 1.5};
  l = layout_dcc(one({0, 0, 0, 0}), c);
  for (const auto& v : only_glyph(l).vertices) check_point(v, 0.0, 1.0, 1e-15);

  c.coefficients[2] = 0.0;
  CHECK_THROWS_AS(layout_dcc(one({0, 0, 0, 0}), c), ValidationError);
}

TEST_CASE("dcc arc conservation") {
  Rng rng(5);
  LayoutConfig c = LayoutConfig::defaults(GlcKind::dcc, 5);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> w(5);
    for (double& x : w) x = rng.uniform(0.01, 1.0);
    double total = std::accumulate(w.begin(), w.end(), 0.0);
    std::vector<double> x(5);
    bool in_range = true;
    for (std::size_t i = 0; i < 5; ++i) {
      x[i] = w[i] / total;  // n * x_i sums to n
      in_range = in_range && x[i] <= 1.0;
    }
    REQUIRE(in_range);
    Layout l = layout_dcc(one(x), c);
    // Sum of x_i = 1 travels one n-th of the circle per unit; here a fifth.
    Point2 expect = circle_oracle(2 * kPi / 5, 1.0);
    check_point(only_glyph(l).vertices.back(), expect.x, expect.y, 1e-12);
  }
  std::vector<double> ones(5, 1.0);
  Layout l = layout_dcc(one(ones), c);
  check_point(only_glyph(l).vertices.back(), 0.0, 1.0, 1e-12);
}

TEST_CASE("round trip for every kind and dimension") {
  Rng rng(2024);
  for (GlcKind kind : {GlcKind::pc, GlcKind::spc, GlcKind::scc, GlcKind::dcc}) {
    for (std::size_t n : {2u, 3u, 4u, 8u}) {
      NormalizedDataset d = random_points(rng, n, 1000);
      for (int variant = 0; variant < 2; ++variant) {
        LayoutConfig c = variant == 0 ? LayoutConfig::defaults(kind, n) : random_config(rng, kind, n);
        Layout l = compute_layout(d, c);
        auto back = invert_layout(l);
        REQUIRE(back.size() == d.size());
        double worst = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i) {
          CHECK(back[i].id == d.cases()[i].id);
          for (std::size_t a = 0; a < n; ++a) {
            worst = std::max(worst, std::abs(back[i].values[a] - d.cases()[i].values[a]));
          }
        }
        INFO("kind " << to_string(kind) << " n " << n << " variant " << variant);
        CHECK(worst <= 1e-9);
      }
    }
  }
}

TEST_CASE("circular vertices lie on the circle and scc arcs stay in their sector") {
  Rng rng(9);
  NormalizedDataset d = random_points(rng, 6, 300);
  for (GlcKind kind : {GlcKind::scc, GlcKind::dcc}) {
    LayoutConfig c = random_config(rng, kind, 6);
    Layout l = compute_layout(d, c);
    double seg = 2 * kPi * c.radius / 6;
    for (const auto& g : l.glyphs) {
      for (std::size_t i = 0; i < g.vertices.size(); ++i) {
        CHECK(std::abs(std::hypot(g.vertices[i].x, g.vertices[i].y) - c.radius) <= 1e-9);
        Point2 expect = circle_oracle(g.arc_params[i], c.radius);
        CHECK(std::abs(expect.x - g.vertices[i].x) <= 1e-9);
        if (kind == GlcKind::scc) {
          CHECK(g.arc_params[i] >= seg * double(i) - 1e-12);
          CHECK(g.arc_params[i] <= seg * double(i + 1) + 1e-12);
        }
      }
    }
  }
}

TEST_CASE("order is metadata") {
  std::vector<double> x{0.1, 0.2, 0.3, 0.4};
  for (GlcKind kind : {GlcKind::pc, GlcKind::spc, GlcKind::scc, GlcKind::dcc}) {
    LayoutConfig c = LayoutConfig::defaults(kind, 4);
    c.attribute_order = {3, 1, 0, 2};
    Layout l = compute_layout(one(x), c);
    if (kind == GlcKind::pc) check_point(only_glyph(l).vertices[0], 0.0, 0.4, 1e-15);
    auto back = invert_layout(l);
    for (std::size_t a = 0; a < 4; ++a) CHECK(std::abs(back[0].values[a] - x[a]) <= 1e-12);
  }
}

TEST_CASE("invert_layout_raw returns raw units") {
  const NormalizedDataset& d = iris();
  Layout l = compute_layout(d, LayoutConfig::defaults(GlcKind::scc, 4));
  auto raw = invert_layout_raw(l, d.stats());
  CHECK(std::abs(raw[0][0] - 5.1) < 1e-9);
  CHECK(std::abs(raw[0][3] - 0.2) < 1e-9);
}

TEST_CASE("invert requires arc params") {
  Layout l = compute_layout(one({0.2, 0.4, 0.6}), LayoutConfig::defaults(GlcKind::dcc, 3));
  l.glyphs[0].arc_params.clear();
  CHECK_THROWS_AS(invert_layout(l), ValidationError);
}

TEST_CASE("config validation") {
  LayoutConfig c = LayoutConfig::defaults(GlcKind::scc, 3);
  c.attribute_order = {0, 0, 1};
  CHECK_THROWS_AS(c.validate(3), ValidationError);
  c = LayoutConfig::defaults(GlcKind::scc, 3);
  c.radius = 0.0;
  CHECK_THROWS_AS(c.validate(3), ValidationError);
  c = LayoutConfig::defaults(GlcKind::scc, 3);
  c.curvature = 1.5;
  CHECK_THROWS_AS(c.validate(3), ValidationError);
  CHECK(glc_kind_from_string("SCC") == GlcKind::scc);
  CHECK_THROWS_AS(glc_kind_from_string("hex"), ValidationError);
}

TEST_CASE("iris scc svg element counts") {
  const NormalizedDataset& d = iris();
  std::string svg = export_svg(compute_layout(d, LayoutConfig::defaults(GlcKind::scc, 4)));
  auto count = [&](const std::string& pattern) {
    std::regex re(pattern);
    return std::distance(std::sregex_iterator(svg.begin(), svg.end(), re), std::sregex_iterator());
  };
  CHECK(count("<path ") == 150);
  CHECK(count("class=\"sector\"") == 4);
  CHECK(count("stroke=\"#d62728\"") == 50);
  CHECK(count("stroke=\"#2ca02c\"") == 50);
  CHECK(count("stroke=\"#1f77b4\"") == 50);
  CHECK(count(" Q ") == 150 * 3);
}

TEST_CASE("empty dataset exports a frame only") {
  NormalizedDataset d = iris().with_cases({});
  Layout l = compute_layout(d, LayoutConfig::defaults(GlcKind::pc, 4));
  std::string svg = export_svg(l);
  CHECK(svg.find("<path") == std::string::npos);
  CHECK(svg.find("class=\"axis\"") != std::string::npos);
  Layout back = load_geometry(export_geometry(l, GeometryFormat::geometry_json));
  CHECK(back.glyphs.empty());
  CHECK(back.frame.axes.size() == 4);
}

TEST_CASE("geometry document reproduces the dataset") {
  Rng rng(77);
  const NormalizedDataset& d = iris();
  for (GlcKind kind : {GlcKind::pc, GlcKind::spc, GlcKind::scc, GlcKind::dcc}) {
    LayoutConfig c = random_config(rng, kind, 4);
    Layout l = compute_layout(d, c);
    Layout back = load_geometry(export_geometry(l, GeometryFormat::geometry_json));
    CHECK(back.kind == kind);
    CHECK(back.config.attribute_order == c.attribute_order);
    auto values = invert_layout(back);
    REQUIRE(values.size() == d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
      CHECK(values[i].label == d.cases()[i].label);
      for (std::size_t a = 0; a < 4; ++a) {
        CHECK(std::abs(values[i].values[a] - d.cases()[i].values[a]) <= 1e-9);
      }
    }
  }
}
