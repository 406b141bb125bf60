#include "rayleigh/portrait.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace rayleigh {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<DiscPoint> project_path(const std::vector<TrajectoryState>& path) {
  std::vector<DiscPoint> out;
  out.reserve(path.size());
  for (const auto& s : path) out.push_back(disc_project(s.x, s.y));
  return out;
}

}  // namespace

std::string to_string(PortraitClass c) {
  switch (c) {
    case PortraitClass::A_NEG: return "A_NEG";
    case PortraitClass::CENTER: return "CENTER";
    case PortraitClass::A_POS: return "A_POS";
  }
  return "?";
}

DiscPoint disc_project(double x, double y) {
  const double s = std::sqrt(1.0 + x * x + y * y);
  return {x / s, y / s};
}

PortraitModel build_portrait(const RayleighParams& params, SystemForm form,
                             const PortraitOptions& opts) {
  PortraitModel model;
  model.params = params;
  model.form = form;
  model.origin = classify_origin_finite(params, form);

  const PlanarPolySystem sys = family_system(params, form);
  model.orientation = orientation_factor(sys.degree);
  for (const auto& pt : infinite_equilibria(sys)) {
    model.infinite.push_back(classify_infinite(sys, pt, params));
  }

  const double a = params.a_value();
  model.class_tag =
      a < 0.0 ? PortraitClass::A_NEG : (a > 0.0 ? PortraitClass::A_POS : PortraitClass::CENTER);

  CycleOptions cycle_opts;
  cycle_opts.integration = opts.cycle_integration;
  if (a != 0.0) {
    PortraitCycle cycle;
    cycle.record = find_cycle(params, form, std::nullopt, cycle_opts);
    const auto path = cycle_polyline(params, form, cycle.record, cycle_opts);
    cycle.polyline = project_path(path);
    model.cycle = std::move(cycle);
  }

  const CompiledSystem compiled(sys);
  OrbitSampleOptions orbit_opts;
  orbit_opts.integration.rtol = opts.orbit_rtol;
  orbit_opts.integration.atol = opts.orbit_atol;
  orbit_opts.t_max = opts.t_max;
  orbit_opts.escape_radius = 10.0;  // disc radius ~0.995
  orbit_opts.settle_radius = 1e-3;

  if (a == 0.0) {
    // nested circles; at least five loops for the center picture
    const int loops = std::max(5, opts.radial_seeds - 2);
    for (int k = 0; k < loops; ++k) {
      const double r = opts.seed_lo +
                       (opts.seed_hi - opts.seed_lo) * std::pow((k + 1.0) / loops, 1.6);
      OrbitSampleOptions one_period = orbit_opts;
      one_period.t_max = kTwoPi;
      one_period.settle_radius = 0.0;
      one_period.escape_radius = 1e9;
      OrbitSample sample;
      sample.points = project_path(sample_orbit(compiled, {r, 0.0}, one_period));
      sample.closed = true;
      model.orbits.push_back(std::move(sample));
    }
  } else {
    const double log_lo = std::log(opts.seed_lo);
    const double log_hi = std::log(opts.seed_hi);
    for (int k = 0; k < opts.radial_seeds; ++k) {
      const double r =
          std::exp(log_lo + (log_hi - log_lo) * k / std::max(1, opts.radial_seeds - 1));
      for (bool backward : {false, true}) {
        OrbitSampleOptions dir_opts = orbit_opts;
        dir_opts.backward = backward;
        auto path = sample_orbit(compiled, {r, 0.0}, dir_opts);
        if (path.size() < 2) continue;
        if (backward) std::reverse(path.begin(), path.end());  // present in forward time
        OrbitSample sample;
        sample.points = project_path(path);
        model.orbits.push_back(std::move(sample));
      }
    }
  }

  // near-equator arcs seeded close to the boundary
  for (double angle : {0.6, std::numbers::pi - 0.6, std::numbers::pi + 0.6, -0.6}) {
    OrbitSampleOptions arc_opts = orbit_opts;
    arc_opts.t_max = a == 0.0 ? kTwoPi : opts.t_max;
    const Vec2 seed{9.3 * std::cos(angle), 9.3 * std::sin(angle)};
    auto path = sample_orbit(compiled, seed, arc_opts);
    if (path.size() < 2) continue;
    OrbitSample sample;
    sample.points = project_path(path);
    model.orbits.push_back(std::move(sample));
  }

  // qualitative sector hints at fully degenerate infinite points: the
  // blow-down yields hyperbolic sectors on both sides of the equator
  for (const auto& report : model.infinite) {
    if (report.kind != EquilibriumKind::Degenerate || !report.chart.has_value()) continue;
    const Vec2 dir = equator_direction(*report.chart, report.location.x);
    const double theta0 = std::atan2(dir.y, dir.x);
    for (int side : {-1, 1}) {
      OrbitSample hint;
      hint.qualitative = true;
      for (int s = 0; s <= 24; ++s) {
        const double theta = theta0 + side * (0.04 + 0.35 * s / 24.0);
        const double rho = 0.995 - 0.10 * std::sin(std::numbers::pi * s / 24.0);
        hint.points.push_back({rho * std::cos(theta), rho * std::sin(theta)});
      }
      model.orbits.push_back(std::move(hint));
    }
  }

  return model;
}

Equivalence topological_class(const PortraitModel& p1, const PortraitModel& p2) {
  return p1.class_tag == p2.class_tag ? Equivalence::Equivalent : Equivalence::Distinct;
}

namespace {

struct SvgWriter {
  std::ostringstream out;
  double cx, cy, scale;

  double px(double x) const { return cx + scale * x; }
  double py(double y) const { return cy - scale * y; }

  void path(const std::vector<DiscPoint>& pts, const std::string& cls, bool closed,
            const std::string& extra = "") {
    if (pts.size() < 2) return;
    out << "<path class=\"" << cls << "\" d=\"";
    for (std::size_t k = 0; k < pts.size(); ++k) {
      out << (k == 0 ? "M" : "L") << px(pts[k].x) << " " << py(pts[k].y);
    }
    if (closed) out << " Z";
    out << "\" fill=\"none\"" << extra << "/>\n";
  }

  void arrow(const DiscPoint& at, double dx, double dy, const std::string& cls) {
    const double norm = std::hypot(dx, dy);
    if (norm < 1e-12) return;
    // pixel space; the y-axis flips under py()
    const double ux = dx / norm, uy = -dy / norm;
    const double size = 0.026 * scale;
    const double ax = px(at.x), ay = py(at.y);
    const double tipx = ax + size * ux, tipy = ay + size * uy;
    const double leftx = ax - 0.6 * size * uy, lefty = ay + 0.6 * size * ux;
    const double rightx = ax + 0.6 * size * uy, righty = ay - 0.6 * size * ux;
    out << "<polygon class=\"" << cls << "\" points=\"" << tipx << "," << tipy << " " << leftx
        << "," << lefty << " " << rightx << "," << righty << "\"/>\n";
  }

  void glyph(const EquilibriumReport& report, double x, double y) {
    const std::string cls = "equilibrium " + to_string(report.kind);
    const double g = 0.018 * scale / 0.46;
    const double X = px(x), Y = py(y);
    switch (report.kind) {
      case EquilibriumKind::Saddle:
      case EquilibriumKind::SemiHyperbolicSaddle:
        out << "<path class=\"" << cls << "\" d=\"M" << X - g << " " << Y - g << "L" << X + g
            << " " << Y + g << "M" << X - g << " " << Y + g << "L" << X + g << " " << Y - g
            << "\"/>\n";
        break;
      case EquilibriumKind::StableNode:
      case EquilibriumKind::StableFocus:
        out << "<circle class=\"" << cls << "\" cx=\"" << X << "\" cy=\"" << Y << "\" r=\"" << g
            << "\" fill=\"currentColor\"/>\n";
        break;
      case EquilibriumKind::UnstableNode:
      case EquilibriumKind::UnstableFocus:
        out << "<circle class=\"" << cls << "\" cx=\"" << X << "\" cy=\"" << Y << "\" r=\"" << g
            << "\" fill=\"none\"/>\n";
        break;
      case EquilibriumKind::CenterOrWeakFocus:
        out << "<circle class=\"" << cls << "\" cx=\"" << X << "\" cy=\"" << Y << "\" r=\"" << g
            << "\" fill=\"none\"/>"
            << "<circle class=\"" << cls << "\" cx=\"" << X << "\" cy=\"" << Y << "\" r=\""
            << 0.35 * g << "\" fill=\"currentColor\"/>\n";
        break;
      case EquilibriumKind::SemiHyperbolicStableNode:
      case EquilibriumKind::SemiHyperbolicUnstableNode:
      case EquilibriumKind::SaddleNode:
        out << "<polygon class=\"" << cls << "\" points=\"" << X << "," << Y - g << " " << X - g
            << "," << Y + g << " " << X + g << "," << Y + g << "\" fill=\""
            << (report.kind == EquilibriumKind::SemiHyperbolicStableNode ? "currentColor"
                                                                         : "none")
            << "\"/>\n";
        break;
      case EquilibriumKind::Degenerate:
        out << "<rect class=\"" << cls << "\" x=\"" << X - g << "\" y=\"" << Y - g
            << "\" width=\"" << 2 * g << "\" height=\"" << 2 * g << "\" fill=\"none\"/>\n";
        break;
    }
  }
};

}  // namespace

std::string render_svg(const PortraitModel& model, int size_px) {
  if (size_px < 200) throw std::invalid_argument("render_svg: size_px must be >= 200");

  SvgWriter w;
  w.cx = w.cy = size_px / 2.0;
  w.scale = 0.46 * size_px;

  w.out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << size_px
        << "\" height=\"" << size_px << "\" viewBox=\"0 0 " << size_px << " " << size_px
        << "\">\n"
        << "<style>.orbit{stroke:#4878a8;stroke-width:1}.qualitative{stroke-dasharray:4 "
           "3}.cycle{stroke:#c03030;stroke-width:2.5}.boundary{stroke:#202020;stroke-width:2}"
           ".equilibrium{stroke:#202020;stroke-width:1.5;color:#202020}.arrow{fill:#4878a8}"
           ".label{font:12px sans-serif}</style>\n"
        << "<rect width=\"" << size_px << "\" height=\"" << size_px << "\" fill=\"white\"/>\n"
        << "<circle class=\"boundary\" cx=\"" << w.cx << "\" cy=\"" << w.cy << "\" r=\""
        << w.scale << "\" fill=\"none\"/>\n";

  for (const auto& orbit : model.orbits) {
    const std::string cls = orbit.qualitative ? "orbit qualitative"
                            : orbit.closed    ? "orbit orbit-loop"
                                              : "orbit";
    w.path(orbit.points, cls, orbit.closed);
    if (orbit.points.size() >= 2 && !orbit.qualitative) {
      const std::size_t mid = orbit.points.size() / 2;
      const auto& p0 = orbit.points[mid - 1];
      const auto& p1 = orbit.points[mid];
      w.arrow(p1, p1.x - p0.x, p1.y - p0.y, "arrow");
    }
  }

  if (model.cycle.has_value()) {
    w.path(model.cycle->polyline, "cycle", true);
  }

  w.glyph(model.origin, disc_project(model.origin.location.x, model.origin.location.y).x,
          disc_project(model.origin.location.x, model.origin.location.y).y);
  for (const auto& report : model.infinite) {
    if (!report.chart.has_value()) continue;
    const Vec2 dir = equator_direction(*report.chart, report.location.x);
    w.glyph(report, dir.x, dir.y);
  }

  w.out << "<text class=\"label\" x=\"8\" y=\"16\">a = " << model.params.a_value()
        << ", n = " << model.params.n << ", " << to_string(model.form) << ", class "
        << to_string(model.class_tag) << "</text>\n";
  w.out << "</svg>\n";
  return w.out.str();
}

}  // namespace rayleigh
