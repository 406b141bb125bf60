#include "rayleigh/localanalysis.hpp"

#include <cmath>
#include <stdexcept>

namespace rayleigh {

std::string to_string(EquilibriumKind kind) {
  switch (kind) {
    case EquilibriumKind::Saddle: return "saddle";
    case EquilibriumKind::StableNode: return "stable-node";
    case EquilibriumKind::UnstableNode: return "unstable-node";
    case EquilibriumKind::StableFocus: return "stable-focus";
    case EquilibriumKind::UnstableFocus: return "unstable-focus";
    case EquilibriumKind::CenterOrWeakFocus: return "center-or-weak-focus";
    case EquilibriumKind::SemiHyperbolicSaddle: return "semi-hyperbolic-saddle";
    case EquilibriumKind::SemiHyperbolicStableNode: return "semi-hyperbolic-node-stable";
    case EquilibriumKind::SemiHyperbolicUnstableNode: return "semi-hyperbolic-node-unstable";
    case EquilibriumKind::SaddleNode: return "saddle-node";
    case EquilibriumKind::Degenerate: return "degenerate";
  }
  return "?";
}

std::string to_string(BlowUpTransform t) {
  return t == BlowUpTransform::Vertical ? "vertical" : "weighted";
}

EquilibriumKind time_reversed(EquilibriumKind kind) {
  switch (kind) {
    case EquilibriumKind::StableNode: return EquilibriumKind::UnstableNode;
    case EquilibriumKind::UnstableNode: return EquilibriumKind::StableNode;
    case EquilibriumKind::StableFocus: return EquilibriumKind::UnstableFocus;
    case EquilibriumKind::UnstableFocus: return EquilibriumKind::StableFocus;
    case EquilibriumKind::SemiHyperbolicStableNode:
      return EquilibriumKind::SemiHyperbolicUnstableNode;
    case EquilibriumKind::SemiHyperbolicUnstableNode:
      return EquilibriumKind::SemiHyperbolicStableNode;
    default: return kind;
  }
}

EquilibriumKind classify_nondegenerate(const Mat2& jac) {
  const double delta = jac.det();
  const double gamma = jac.trace();
  if (delta < 0.0) return EquilibriumKind::Saddle;
  if (delta == 0.0) {
    throw std::domain_error("not nondegenerate; use semi-hyperbolic or blow-up path");
  }
  if (gamma == 0.0) return EquilibriumKind::CenterOrWeakFocus;
  const double disc = gamma * gamma - 4.0 * delta;
  if (disc >= 0.0) {
    return gamma < 0.0 ? EquilibriumKind::StableNode : EquilibriumKind::UnstableNode;
  }
  return gamma < 0.0 ? EquilibriumKind::StableFocus : EquilibriumKind::UnstableFocus;
}

EquilibriumReport classify_origin_finite(const RayleighParams& params, SystemForm form) {
  const double a = params.a_value();

  EquilibriumReport report;
  report.location = {0.0, 0.0};
  report.chart = std::nullopt;
  if (form == SystemForm::Eq2) {
    report.jac = {-a, 1.0, -1.0, 0.0};
  } else {
    report.jac = {0.0, 1.0, -1.0, a};
  }
  report.delta = report.jac.det();
  report.gamma = report.jac.trace();

  const Mat2 eq2_jac{-a, 1.0, -1.0, 0.0};
  const EquilibriumKind eq2_kind = classify_nondegenerate(eq2_jac);
  report.kind = form == SystemForm::Eq2 ? eq2_kind : time_reversed(eq2_kind);
  if (form == SystemForm::Eq1 && report.kind != classify_nondegenerate(report.jac)) {
    throw std::logic_error("classify_origin_finite: time-reversal route disagrees with direct");
  }
  if (a == 0.0) {
    report.note = "a = 0: the nonlinear terms vanish identically, so this is a genuine center";
  }
  return report;
}

namespace {

Rational coeff_at(const MonomialList& p, int i, int j) {
  for (const auto& m : p) {
    if (m.i == i && m.j == j) return m.c;
  }
  return Rational(0);
}

bool min_total_degree_at_least(const MonomialList& p, int bound) {
  for (const auto& m : p) {
    if (m.i + m.j < bound) return false;
  }
  return true;
}

}  // namespace

std::pair<SemiHyperbolicData, EquilibriumKind> classify_semihyperbolic(
    const PlanarPolySystem& local, const Rational& lambda) {
  if (lambda == 0) throw std::invalid_argument("classify_semihyperbolic: lambda must be nonzero");
  const MonomialList& A = local.P;
  if (!min_total_degree_at_least(A, 2)) {
    throw std::invalid_argument("classify_semihyperbolic: A must start at degree >= 2");
  }
  MonomialList B = add(local.Q, {{0, 1, -lambda}});
  if (!min_total_degree_at_least(B, 2)) {
    throw std::invalid_argument(
        "classify_semihyperbolic: second component must be lambda*y + (order >= 2)");
  }

  const Rational inv_lambda = Rational(-1) / lambda;
  int order = 10;
  while (true) {
    // invariant curve y = f(x) from the fixed point of f = -B(x, f)/lambda;
    // each pass extends the agreement by at least one order
    RationalPoly f;
    for (int it = 0; it < order + 2; ++it) {
      f = substitute_y(B, f, order).scaled(inv_lambda);
    }
    const RationalPoly g = substitute_y(A, f, order);

    int alpha = -1;
    for (int k = 0; k <= g.degree(); ++k) {
      if (g.coeff(k) != 0) {
        alpha = k;
        break;
      }
    }
    if (alpha < 0) {
      if (order < 160) {
        order *= 2;
        continue;
      }
      throw std::runtime_error(
          "classify_semihyperbolic: g vanishes up to order 160; raise truncation");
    }
    if (alpha < 2) {
      throw std::invalid_argument("classify_semihyperbolic: g has order < 2; not in normal form");
    }

    SemiHyperbolicData data;
    data.lambda = to_double(lambda);
    data.alpha = alpha;
    data.lead = to_double(g.coeff(alpha));

    EquilibriumKind kind;
    if (alpha % 2 == 1) {
      if (data.lead > 0) {
        kind = EquilibriumKind::SemiHyperbolicUnstableNode;
        data.side_data = "node";
      } else {
        kind = EquilibriumKind::SemiHyperbolicSaddle;
        data.side_data = "separatrices tangent to the x-axis";
      }
    } else {
      kind = EquilibriumKind::SaddleNode;
      data.side_data = data.lead < 0
                           ? "stable separatrix tangent to the positive x-axis; "
                             "unstable separatrices tangent to the y-axis"
                           : "stable separatrix tangent to the negative x-axis; "
                             "unstable separatrices tangent to the y-axis";
    }
    if (data.lambda < 0) {
      data.side_data += " [lambda < 0: tags follow the positive-eigenvalue convention]";
    }
    return {data, kind};
  }
}

BlowUpSystem blowup_vertical(const ChartSystem& cs, int n) {
  if (n < 1) throw std::invalid_argument("blowup_vertical: n must be >= 1");
  const int cancel = 2 * n - 1;

  // u = x, v = z x maps c u^i v^j to c x^{i+j} z^j; the second component is
  // (dv - z du)/x before removing the common factor.
  MonomialList dx, dz;
  for (const auto& m : cs.du) {
    dx.push_back({m.i + m.j, m.j, m.c});
    if (m.i + m.j < 1) {
      throw std::domain_error("blowup_vertical: malformed input (common factor absent)");
    }
    dz.push_back({m.i + m.j - 1, m.j + 1, -m.c});
  }
  for (const auto& m : cs.dv) {
    if (m.i + m.j < 1) {
      throw std::domain_error("blowup_vertical: malformed input (common factor absent)");
    }
    dz.push_back({m.i + m.j - 1, m.j, m.c});
  }
  dx = canonical(std::move(dx));
  dz = canonical(std::move(dz));

  auto strip = [cancel](const MonomialList& terms) {
    MonomialList out;
    out.reserve(terms.size());
    for (const auto& m : terms) {
      if (m.i < cancel) {
        throw std::domain_error("blowup_vertical: malformed input (common factor absent)");
      }
      out.push_back({m.i - cancel, m.j, m.c});
    }
    return out;
  };

  BlowUpSystem out;
  out.system = PlanarPolySystem::make(strip(dx), strip(dz));
  out.transform = BlowUpTransform::Vertical;
  out.cancelled_power = cancel;
  return out;
}

BlowUpSystem blowup_weighted(const BlowUpSystem& bs, int n) {
  if (n < 1) throw std::invalid_argument("blowup_weighted: n must be >= 1");
  if (bs.transform != BlowUpTransform::Vertical) {
    throw std::invalid_argument("blowup_weighted: expects the vertical blow-up output");
  }
  const int w = 2 * n;

  // x = w^{2n} r, z = w. With X, Z the incoming components,
  //   r' = w^{-2n} X - 2n r w^{-1} Z,  w' = Z,
  // then the common factor w^{2n} is removed from both.
  struct SignedTerm {
    int i, j;
    Rational c;
  };
  std::vector<SignedTerm> dr, dw;
  for (const auto& m : bs.system.P) {
    dr.push_back({m.i, w * m.i + m.j - w, m.c});
  }
  for (const auto& m : bs.system.Q) {
    dr.push_back({m.i + 1, w * m.i + m.j - 1, m.c * Rational(-w)});
    dw.push_back({m.i, w * m.i + m.j, m.c});
  }

  auto strip = [w](const std::vector<SignedTerm>& terms) {
    MonomialList out;
    out.reserve(terms.size());
    for (const auto& m : terms) {
      const int j = m.j - w;
      if (j < 0) {
        throw std::domain_error("blowup_weighted: malformed input (common factor absent)");
      }
      out.push_back({m.i, j, m.c});
    }
    return canonical(std::move(out));
  };

  BlowUpSystem out;
  out.system = PlanarPolySystem::make(strip(dr), strip(dw));
  out.transform = BlowUpTransform::Weighted;
  out.cancelled_power = w;
  return out;
}

EquilibriumReport resolve_degenerate(const ChartSystem& cs, const RayleighParams& params) {
  if (params.a == 0) {
    throw std::domain_error(
        "resolve_degenerate: the U2 origin is not singular for the linear center (a = 0)");
  }
  if (restrict_y0(cs.du).eval(Rational(0)) != 0) {
    throw std::domain_error("resolve_degenerate: the chart origin is not singular");
  }
  const int n = params.n;

  const BlowUpSystem vertical = blowup_vertical(cs, n);
  TransformRecord first;
  first.transform = BlowUpTransform::Vertical;
  first.cancelled_power = vertical.cancelled_power;
  {
    EquilibriumReport still;
    still.location = {0.0, 0.0};
    still.chart = cs.chart;
    still.jac = jacobian(vertical.system, 0.0, 0.0);
    still.delta = still.jac.det();
    still.gamma = still.jac.trace();
    still.kind = EquilibriumKind::Degenerate;
    still.note = "origin still degenerate after the vertical blow-up";
    first.sub_equilibria.push_back(std::move(still));
  }

  const BlowUpSystem weighted = blowup_weighted(vertical, n);
  TransformRecord second;
  second.transform = BlowUpTransform::Weighted;
  second.cancelled_power = weighted.cancelled_power;

  // fixed points on the exceptional divisor w = 0
  const RationalPoly on_divisor = restrict_y0(weighted.system.P);
  for (const auto& root : real_roots(on_divisor)) {
    EquilibriumReport sub;
    sub.location = {root.value, 0.0};
    sub.chart = cs.chart;
    sub.jac = jacobian(weighted.system, root.value, 0.0);
    sub.delta = sub.jac.det();
    sub.gamma = sub.jac.trace();
    if (sub.delta != 0.0) {
      sub.kind = classify_nondegenerate(sub.jac);
    } else if (root.exact.has_value() && sub.gamma != 0.0) {
      // shift the point to the origin, reverse time (making the hyperbolic
      // eigenvalue positive), and put the zero direction first
      PlanarPolySystem shifted = PlanarPolySystem::make(
          shift_vars(weighted.system.P, *root.exact, Rational(0)),
          shift_vars(weighted.system.Q, *root.exact, Rational(0)));
      shifted = reverse_time(shifted);
      const PlanarPolySystem normal =
          PlanarPolySystem::make(swap_vars(shifted.Q), swap_vars(shifted.P));
      const Rational lambda(2 * n + 1);
      auto [data, kind] = classify_semihyperbolic(normal, lambda);
      sub.kind = kind;
      sub.note = "semi-hyperbolic; classified after shifting to the origin and reversing time "
                 "(alpha = " +
                 std::to_string(data.alpha) + ")";
    } else {
      sub.kind = EquilibriumKind::Degenerate;
      sub.note = "unclassified fixed point on the exceptional divisor";
    }
    second.sub_equilibria.push_back(std::move(sub));
  }

  EquilibriumReport report;
  report.location = {0.0, 0.0};
  report.chart = cs.chart;
  report.jac = {0.0, 0.0, 0.0, 0.0};
  report.delta = 0.0;
  report.gamma = 0.0;
  report.kind = EquilibriumKind::Degenerate;
  report.note = "resolved: two hyperbolic sectors separated by the equator";
  report.provenance = {std::move(first), std::move(second)};
  return report;
}

EquilibriumReport classify_infinite(const PlanarPolySystem& sys, const InfiniteSingularPoint& pt,
                                    const std::optional<RayleighParams>& params) {
  EquilibriumReport report;
  report.location = {pt.u, 0.0};
  report.chart = pt.chart;
  report.jac = pt.jac;
  report.delta = pt.delta;
  report.gamma = pt.gamma;

  if (pt.delta != 0.0 || (pt.delta > 0.0 && pt.gamma == 0.0)) {
    report.kind = classify_nondegenerate(pt.jac);
    return report;
  }
  if (pt.delta == 0.0 && pt.gamma == 0.0) {
    const bool at_origin = pt.exact_u.has_value() && *pt.exact_u == 0;
    const bool vertical_chart = pt.chart == ChartId::U2 || pt.chart == ChartId::V2;
    if (params.has_value() && params->a != 0 && at_origin && vertical_chart) {
      const ChartSystem cs = chart_system(sys, pt.chart);
      EquilibriumReport resolved = resolve_degenerate(cs, *params);
      resolved.chart = pt.chart;
      return resolved;
    }
    report.kind = EquilibriumKind::Degenerate;
    report.note = "fully degenerate; no blow-up resolution performed for this input";
    return report;
  }
  report.kind = EquilibriumKind::Degenerate;
  report.note = "one zero eigenvalue (semi-hyperbolic); center-manifold reduction not wired up "
                "for generic chart points";
  return report;
}

}  // namespace rayleigh
