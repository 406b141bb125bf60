#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rayleigh/portrait.hpp"

#include <cmath>
#include <random>
#include <string>
#include <vector>

using namespace rayleigh;

namespace {

// minimal XML well-formedness check: balanced tags, quoted attributes
bool well_formed_xml(const std::string& text) {
  std::vector<std::string> stack;
  std::size_t pos = 0;
  while ((pos = text.find('<', pos)) != std::string::npos) {
    const std::size_t end = text.find('>', pos);
    if (end == std::string::npos) return false;
    std::string tag = text.substr(pos + 1, end - pos - 1);
    pos = end + 1;
    if (tag.empty()) return false;
    if (tag[0] == '?' || tag[0] == '!') continue;
    const bool closing = tag[0] == '/';
    const bool self_closing = tag.back() == '/';
    std::string name = tag.substr(closing ? 1 : 0);
    name = name.substr(0, name.find_first_of(" \t\n/"));
    if (name.empty()) return false;
    if (closing) {
      if (stack.empty() || stack.back() != name) return false;
      stack.pop_back();
    } else if (!self_closing) {
      stack.push_back(name);
    }
  }
  return stack.empty();
}

int count_occurrences(const std::string& text, const std::string& needle) {
  int count = 0;
  std::size_t pos = 0;
  while ((pos = text.find(needle, pos)) != std::string::npos) {
    ++count;
    pos += needle.size();
  }
  return count;
}

// ray casting from the point along +x
bool inside_polygon(const std::vector<DiscPoint>& poly, double x, double y) {
  bool inside = false;
  for (std::size_t k = 0, j = poly.size() - 1; k < poly.size(); j = k++) {
    const auto& p = poly[k];
    const auto& q = poly[j];
    if ((p.y > y) != (q.y > y) && x < (q.x - p.x) * (y - p.y) / (q.y - p.y) + p.x) {
      inside = !inside;
    }
  }
  return inside;
}

}  // namespace

TEST_CASE("disc projection is monotone in radius") {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> coord(-20.0, 20.0);
  for (int k = 0; k < 200; ++k) {
    const double x1 = coord(rng), y1 = coord(rng), x2 = coord(rng), y2 = coord(rng);
    const DiscPoint p = disc_project(x1, y1);
    const DiscPoint q = disc_project(x2, y2);
    CHECK(std::hypot(p.x, p.y) < 1.0);
    CHECK((std::hypot(x1, y1) < std::hypot(x2, y2)) ==
          (std::hypot(p.x, p.y) < std::hypot(q.x, q.y)));
  }
}

TEST_CASE("portrait for a < 0: repelling origin, stable cycle, repelling infinite nodes") {
  const PortraitModel model = build_portrait(RayleighParams(-1.0, 1), SystemForm::Eq2);
  CHECK(model.class_tag == PortraitClass::A_NEG);
  CHECK(model.origin.kind == EquilibriumKind::UnstableFocus);
  REQUIRE(model.cycle.has_value());
  CHECK(model.cycle->record.stability == CycleStability::Stable);
  CHECK(model.orientation == 1);  // odd degree

  int u1_nodes = 0, degenerate = 0;
  for (const auto& report : model.infinite) {
    if (report.kind == EquilibriumKind::UnstableNode) ++u1_nodes;
    if (report.kind == EquilibriumKind::Degenerate) ++degenerate;
  }
  CHECK(u1_nodes == 2);    // U1 and V1
  CHECK(degenerate == 2);  // U2 and V2, blow-up resolved
  for (const auto& report : model.infinite) {
    if (report.kind == EquilibriumKind::Degenerate) {
      CHECK(report.provenance.size() == 2);
    }
  }

  // every orbit stays inside the closed unit disc
  for (const auto& orbit : model.orbits) {
    for (const auto& p : orbit.points) CHECK(std::hypot(p.x, p.y) <= 1.0 + 1e-12);
  }
}

TEST_CASE("portrait for a = 0 is the global center") {
  const PortraitModel model = build_portrait(RayleighParams(0.0, 1), SystemForm::Eq2);
  CHECK(model.class_tag == PortraitClass::CENTER);
  CHECK(!model.cycle.has_value());
  CHECK(model.origin.kind == EquilibriumKind::CenterOrWeakFocus);
  CHECK(model.infinite.empty());
  int loops = 0;
  for (const auto& orbit : model.orbits)

    if (orbit.closed) ++loops;
  CHECK(loops >= 5);
}

TEST_CASE("portrait for a > 0: attracting origin, unstable cycle, attracting infinite nodes") {
  const PortraitModel model = build_portrait(RayleighParams(1.0, 2), SystemForm::Eq2);
  CHECK(model.class_tag == PortraitClass::A_POS);
  CHECK(model.origin.kind == EquilibriumKind::StableFocus);
  REQUIRE(model.cycle.has_value());
  CHECK(model.cycle->record.stability == CycleStability::Unstable);
  int stable_nodes = 0;
  for (const auto& report : model.infinite) {
    if (report.kind == EquilibriumKind::StableNode) ++stable_nodes;
  }
  CHECK(stable_nodes == 2);
}

TEST_CASE("the rendered cycle separates the origin from the boundary") {
  const PortraitModel model = build_portrait(RayleighParams(-0.5, 1), SystemForm::Eq2);
  REQUIRE(model.cycle.has_value());
  const auto& poly = model.cycle->polyline;
  REQUIRE(poly.size() > 100);
  CHECK(inside_polygon(poly, 0.0, 0.0));
  CHECK(!inside_polygon(poly, 0.999, 0.0));
}

TEST_CASE("topological classes split by the sign of a") {
  const PortraitModel neg1 = build_portrait(RayleighParams(-1.0, 1), SystemForm::Eq2);
  const PortraitModel neg3 = build_portrait(RayleighParams(-0.3, 3), SystemForm::Eq2);
  const PortraitModel pos = build_portrait(RayleighParams(1.0, 1), SystemForm::Eq2);
  const PortraitModel center = build_portrait(RayleighParams(0.0, 1), SystemForm::Eq2);
  const PortraitModel pos_small = build_portrait(RayleighParams(0.5, 1), SystemForm::Eq2);

  CHECK(topological_class(neg1, neg3) == Equivalence::Equivalent);
  CHECK(topological_class(neg1, pos) == Equivalence::Distinct);
  CHECK(topological_class(center, pos_small) == Equivalence::Distinct);
  CHECK(topological_class(pos, pos_small) == Equivalence::Equivalent);
}

TEST_CASE("svg output structure") {
  const PortraitModel cycle_model = build_portrait(RayleighParams(-1.0, 1), SystemForm::Eq2);
  const std::string svg = render_svg(cycle_model, 640);
  CHECK(well_formed_xml(svg));
  CHECK(count_occurrences(svg, "class=\"boundary\"") == 1);
  CHECK(count_occurrences(svg, "class=\"cycle\"") == 1);
  CHECK(count_occurrences(svg, "class=\"arrow\"") > 0);
  CHECK(svg.find("class=\"equilibrium") != std::string::npos);

  const PortraitModel center_model = build_portrait(RayleighParams(0.0, 1), SystemForm::Eq2);
  const std::string center_svg = render_svg(center_model, 640);
  CHECK(well_formed_xml(center_svg));
  CHECK(count_occurrences(center_svg, "class=\"cycle\"") == 0);
  CHECK(count_occurrences(center_svg, "orbit-loop") >= 5);

  CHECK_THROWS_AS(render_svg(cycle_model, 100), std::invalid_argument);
}

TEST_CASE("qualitative hints mark the degenerate directions") {
  const PortraitModel model = build_portrait(RayleighParams(-1.0, 1), SystemForm::Eq2);
  int qualitative = 0;
  for (const auto& orbit : model.orbits) {
    if (orbit.qualitative) ++qualitative;
  }
  CHECK(qualitative == 4);  // two sectors at each of U2 and V2
  const std::string svg = render_svg(model, 640);
  CHECK(svg.find("qualitative") != std::string::npos);
}

TEST_CASE("class tags depend only on the sign of a") {
  for (int n : {1, 3}) {
    for (double mag : {0.25, 1.0, 2.5}) {
      CHECK(build_portrait(RayleighParams(-mag, n), SystemForm::Eq2).class_tag ==
            PortraitClass::A_NEG);
      CHECK(build_portrait(RayleighParams(mag, n), SystemForm::Eq2).class_tag ==
            PortraitClass::A_POS);
    }
  }
}
