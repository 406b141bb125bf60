#pragma once

#include "rayleigh/compactification.hpp"
#include "rayleigh/vectorfield.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rayleigh {

enum class EquilibriumKind {
  Saddle,
  StableNode,
  UnstableNode,
  StableFocus,
  UnstableFocus,
  CenterOrWeakFocus,
  SemiHyperbolicSaddle,
  SemiHyperbolicStableNode,
  SemiHyperbolicUnstableNode,
  SaddleNode,
  Degenerate,
};

std::string to_string(EquilibriumKind kind);

/// The same local picture with time reversed (stability swaps, saddles and
/// saddle-nodes stay what they are).
EquilibriumKind time_reversed(EquilibriumKind kind);

enum class BlowUpTransform {
  Vertical,  // u = x, v = z x
  Weighted,  // x = w^{2n} r, z = w
};

std::string to_string(BlowUpTransform t);

struct EquilibriumReport;

/// One desingularization step plus what was found after it.
struct TransformRecord {
  BlowUpTransform transform = BlowUpTransform::Vertical;
  int cancelled_power = 0;
  std::vector<EquilibriumReport> sub_equilibria;
};

struct EquilibriumReport {
  Vec2 location;
  std::optional<ChartId> chart;  // nullopt = finite equilibrium
  Mat2 jac;
  double delta = 0.0;
  double gamma = 0.0;
  EquilibriumKind kind = EquilibriumKind::Degenerate;
  std::vector<TransformRecord> provenance;
  std::string note;
};

/// Center-manifold data of a semi-hyperbolic point: the reduced function on
/// the invariant curve is g(x) = lead * x^alpha + o(x^alpha).
struct SemiHyperbolicData {
  double lambda = 0.0;
  int alpha = 0;
  double lead = 0.0;
  std::string side_data;
};

struct BlowUpSystem {
  PlanarPolySystem system;  // field in the blown-up coordinates
  BlowUpTransform transform = BlowUpTransform::Vertical;
  int cancelled_power = 0;
};

/// Nondegenerate dictionary on (delta, gamma) = (det, trace):
///   delta < 0               -> saddle
///   gamma^2 - 4 delta > 0   -> node (stable iff gamma < 0)
///   gamma^2 - 4 delta < 0   -> focus (stable iff gamma < 0)
///   gamma = 0, delta > 0    -> center or weak focus
/// The boundary gamma^2 = 4 delta with gamma != 0 is reported as a node.
/// Throws std::domain_error when delta = 0 and gamma = 0 is off the table
/// (delta = 0 requires the semi-hyperbolic or blow-up path).
EquilibriumKind classify_nondegenerate(const Mat2& jac);

/// Classification of the family's only finite equilibrium, the origin.
EquilibriumReport classify_origin_finite(const RayleighParams& params, SystemForm form);

/// Semi-hyperbolic classification for a system already in the normal form
///   x' = A(x, y), y' = lambda y + B(x, y),  A, B of order >= 2.
/// Computes the invariant-curve series y = f(x) by iterated substitution,
/// reads off the leading term of g(x) = A(x, f(x)) and applies:
///   alpha odd,  lead > 0 -> unstable node
///   alpha odd,  lead < 0 -> saddle (separatrices tangent to the x-axis)
///   alpha even           -> saddle-node
/// A negative lambda is accepted but flagged in the report note: the tag
/// follows the positive-eigenvalue convention and the hyperbolic direction's
/// stability is then reversed.
std::pair<SemiHyperbolicData, EquilibriumKind> classify_semihyperbolic(
    const PlanarPolySystem& local, const Rational& lambda);

/// Vertical directional blow-up u = x, v = z x of the family's degenerate
/// U2 chart origin, with the common factor x^{2n-1} removed.
BlowUpSystem blowup_vertical(const ChartSystem& cs, int n);

/// Weighted blow-up x = w^{2n} r, z = w applied on top of blowup_vertical,
/// with the common factor w^{2n} removed.
BlowUpSystem blowup_weighted(const BlowUpSystem& bs, int n);

/// Full resolution of the family's degenerate U2 origin: vertical blow-up,
/// weighted blow-up, classification of the two resulting fixed points, and
/// the blow-down conclusion, recorded as a provenance chain.
EquilibriumReport resolve_degenerate(const ChartSystem& cs, const RayleighParams& params);

/// Upgrades an infinite-point stub to a full report. Nondegenerate points
/// classify via the Jacobian; the family's degenerate U2/V2 origins resolve
/// through the blow-up cascade when params are supplied.
EquilibriumReport classify_infinite(const PlanarPolySystem& sys, const InfiniteSingularPoint& pt,
                                    const std::optional<RayleighParams>& params = std::nullopt);

}  // namespace rayleigh
