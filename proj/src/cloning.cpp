#include "qpr/cloning.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qpr {

namespace {

using std::numbers::pi;

constexpr double kAngleSlack = 1e-12;
constexpr double kZeroSine = 1e-12;
constexpr double kBhFidelity = 5.0 / 6.0;

int sign(double x) { return (x > 0) - (x < 0); }

/// Q̄ and F̄ are functions of A(δ) = δ + a0 and B(δ) = b0 − δ.
struct PanelArgs {
  double a0;
  double b0;
  double A(double delta) const { return delta + a0; }
  double B(double delta) const { return b0 - delta; }
};

PanelArgs panel_args(double theta, Panel panel) {
  const double s = std::sin(2 * theta);
  const double phi = std::acos(std::clamp(s * s, -1.0, 1.0));
  const double gamma = std::acos(std::clamp(s, -1.0, 1.0));
  if (panel == Panel::Left) return {0.0, phi - gamma};
  return {gamma, phi};
}

void check_theta(double theta) {
  if (!(theta >= -kAngleSlack && theta <= pi / 4 + kAngleSlack))
    throw Error("state-dependent cloner: theta must lie in [0, pi/4]");
}

// One-sided derivative of |sin 2u| with respect to δ where du/dδ = du.
double abs_sin2_slope(double u, double du, bool right_side) {
  const double s = std::sin(2 * u);
  const double c = std::cos(2 * u);
  int sg = sign(s);
  if (std::abs(s) < kZeroSine) {
    // Sign of sin 2u just beside the zero.
    const double dir = right_side ? 1.0 : -1.0;
    sg = sign(dir * du * c);
  }
  return 2.0 * du * c * sg;
}

PointClass classify_location(double delta, bool kink) {
  if (delta <= kAngleSlack || delta >= pi / 2 - kAngleSlack) return PointClass::Boundary;
  return kink ? PointClass::Kink : PointClass::InteriorSmooth;
}

void sort_unique(std::vector<StationaryPoint>& pts) {
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.delta < b.delta; });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const auto& a, const auto& b) { return std::abs(a.delta - b.delta) < 1e-12; }),
            pts.end());
}

// Boundary points of [0, π/2] that are extrema of the given kind.
void add_boundary_extrema(std::vector<StationaryPoint>& out, ExtremumKind kind,
                          OneSidedSlopes at_lo, OneSidedSlopes at_hi, const char* lo_label,
                          const char* hi_label) {
  const bool lo_min = at_lo.right > 0, hi_min = at_hi.left < 0;
  if ((kind == ExtremumKind::Min) == lo_min)
    out.push_back({0.0, lo_label, kind, PointClass::Boundary, 0.0, at_lo});
  if ((kind == ExtremumKind::Min) == hi_min)
    out.push_back({pi / 2, hi_label, kind, PointClass::Boundary, 0.0, at_hi});
}

}  // namespace

// ---------------------------------------------------------------------------
// Buzek-Hillery

ComplexMatrix bh_isometry() {
  // index = 4·copy + 2·clone + machine, with |↑⟩ = |0⟩ and |↓⟩ = |1⟩.
  const double big = std::sqrt(2.0 / 3.0);
  const double small = std::sqrt(1.0 / 6.0);  // √(1/3) · 1/√2 from |Ψ₊⟩
  ComplexMatrix v = ComplexMatrix::Zero(8, 2);
  v(0b000, 0) = big;
  v(0b011, 0) = small;
  v(0b101, 0) = small;
  v(0b111, 1) = big;
  v(0b010, 1) = small;
  v(0b100, 1) = small;
  return v;
}

BHOutput bh_clone(const PureState& input) {
  if (input.dim() != 2) throw Error("bh_clone: input must be a qubit state");
  auto joint = PureState::normalized(bh_isometry() * input.amplitudes());
  const ComplexMatrix rho = joint.projector();
  const Eigen::Index dims[] = {2, 2, 2};
  DensityOperator original(partial_trace<double>(rho, dims, 0));
  DensityOperator clone(partial_trace<double>(rho, dims, 1));
  return {std::move(joint), std::move(original), std::move(clone)};
}

KrausChannel bh_clone_channel() {
  const ComplexMatrix v = bh_isometry();
  std::vector<ComplexMatrix> ops;
  for (int copy = 0; copy < 2; ++copy)
    for (int machine = 0; machine < 2; ++machine) {
      ComplexMatrix k(2, 2);
      for (int clone = 0; clone < 2; ++clone) k.row(clone) = v.row(4 * copy + 2 * clone + machine);
      ops.push_back(std::move(k));
    }
  return KrausChannel(std::move(ops));
}

BHReport bh_stats(std::uint64_t samples, std::uint64_t seed) {
  BHReport r;
  r.stats = {kBhFidelity, 0.0};
  r.merit = figure_of_merit(r.stats.fidelity, r.stats.randomness);
  r.samples = samples;
  r.seed = seed;
  const auto channel = bh_clone_channel();
  for (std::uint64_t i = 0; i < samples; ++i) {
    CounterStream rng(seed, i);
    const auto phi = haar_sample_qubit(rng);
    const auto out = bh_clone(phi);
    const auto via_channel = apply_channel(channel, phi);
    for (const auto* rho : {&out.clone_state, &via_channel}) {
      r.fidelity_residual = std::max(r.fidelity_residual, std::abs(fidelity(*rho, phi) - kBhFidelity));
      r.randomness_residual = std::max(r.randomness_residual, randomness_closed_form(*rho, phi));
      r.randomness_residual =
          std::max(r.randomness_residual, randomness_from_distribution(measurement_distribution(*rho, phi)));
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// State-dependent cloner

std::string_view to_string(Panel panel) { return panel == Panel::Left ? "left" : "right"; }

Panel parse_panel(std::string_view name) {
  if (name == "left") return Panel::Left;
  if (name == "right") return Panel::Right;
  throw Error("unknown panel '" + std::string(name) + "' (expected left or right)");
}

std::string_view to_string(ExtremumKind kind) { return kind == ExtremumKind::Min ? "min" : "max"; }

std::string_view to_string(PointClass cls) {
  switch (cls) {
    case PointClass::InteriorSmooth: return "interior-smooth";
    case PointClass::Kink: return "kink";
    case PointClass::Boundary: return "boundary";
  }
  return "?";
}

CloneGeometry CloneGeometry::make(double theta, double delta, Panel panel) {
  check_theta(theta);
  if (!(delta >= -kAngleSlack && delta <= pi / 2 + kAngleSlack))
    throw Error("state-dependent cloner: delta must lie in [0, pi/2]");
  CloneGeometry g;
  g.theta = theta;
  g.delta = delta;
  g.panel = panel;
  const double s = std::sin(2 * theta);
  g.phi = std::acos(std::clamp(s * s, -1.0, 1.0));
  g.gamma = std::acos(std::clamp(s, -1.0, 1.0));
  return g;
}

PureState ensemble_state_a(double theta) {
  ComplexVector v(2);
  v << std::cos(theta), std::sin(theta);
  return PureState::normalized(std::move(v));
}

PureState ensemble_state_b(double theta) {
  ComplexVector v(2);
  v << std::sin(theta), std::cos(theta);
  return PureState::normalized(std::move(v));
}

SDStates sd_states(const CloneGeometry& geom) {
  check_theta(geom.theta);
  const double rest = geom.phi - geom.delta - geom.gamma;
  if (std::abs(geom.delta) > pi / 2 + kAngleSlack || std::abs(rest) > pi / 2 + kAngleSlack)
    throw Error("sd_states: delta and phi - delta - gamma must lie in [-pi/2, pi/2]");

  const auto a = ensemble_state_a(geom.theta);
  const auto b = ensemble_state_b(geom.theta);
  auto aa = tensor(a, a);
  auto bb = tensor(b, b);

  // Orthonormal frame (e1, e2) of the plane with bb = cos φ e1 + sin φ e2.
  const ComplexVector& e1 = aa.amplitudes();
  ComplexVector e2 = bb.amplitudes() - e1 * e1.dot(bb.amplitudes());
  if (e2.norm() > 1e-12) {
    e2.normalize();
  } else {
    const std::vector<PureState> seed{aa};
    e2 = complete_basis(seed, 4)[1].amplitudes();
  }
  auto at = [&](double angle) {
    return PureState::normalized(std::cos(angle) * e1 + std::sin(angle) * e2);
  };

  const double first = geom.delta;
  const double second = geom.delta + geom.gamma;
  if (geom.panel == Panel::Left) return {at(first), at(second), std::move(aa), std::move(bb)};
  return {at(second), at(first), std::move(aa), std::move(bb)};
}

double sd_fbar(double theta, double delta, Panel panel) {
  const auto p = panel_args(theta, panel);
  const double ca = std::cos(p.A(delta)), cb = std::cos(p.B(delta));
  return 0.5 * (ca * ca + cb * cb);
}

double sd_qbar(double theta, double delta, Panel panel) {
  const auto p = panel_args(theta, panel);
  return 0.25 * (std::abs(std::sin(2 * p.A(delta))) + std::abs(std::sin(2 * p.B(delta))));
}

ProcessStats sd_stats(const CloneGeometry& geom) {
  return {sd_fbar(geom.theta, geom.delta, geom.panel), sd_qbar(geom.theta, geom.delta, geom.panel)};
}

ProcessStats sd_stats_from_states(const CloneGeometry& geom) {
  const auto s = sd_states(geom);
  const double fa = std::norm(s.alpha.inner(s.aa));
  const double fb = std::norm(s.beta.inner(s.bb));
  return {0.5 * (fa + fb),
          0.5 * (pure_output_randomness(s.alpha, s.aa) + pure_output_randomness(s.beta, s.bb))};
}

OneSidedSlopes sd_qbar_slopes(double theta, double delta, Panel panel) {
  const auto p = panel_args(theta, panel);
  auto slope = [&](bool right) {
    return 0.25 * (abs_sin2_slope(p.A(delta), 1.0, right) + abs_sin2_slope(p.B(delta), -1.0, right));
  };
  return {slope(false), slope(true)};
}

OneSidedSlopes sd_fbar_slopes(double theta, double delta, Panel panel) {
  const auto p = panel_args(theta, panel);
  const double d = 0.5 * (-std::sin(2 * p.A(delta)) + std::sin(2 * p.B(delta)));
  return {d, d};
}

std::vector<StationaryPoint> sd_qbar_analytic_extrema(double theta, Panel panel, ExtremumKind kind) {
  check_theta(theta);
  const auto p = panel_args(theta, panel);
  std::vector<StationaryPoint> out;
  auto inside = [](double d) { return d > kAngleSlack && d < pi / 2 - kAngleSlack; };

  if (kind == ExtremumKind::Max) {
    // A − B ∈ (π/2)ℤ: equal-sign branch (k even) and opposite-sign branch
    // (k odd). The second derivative is −(|sin 2A| + |sin 2B|) < 0.
    for (int k = -4; k <= 4; ++k) {
      const double d = 0.5 * (p.b0 - p.a0) + k * pi / 4;
      if (!inside(d)) continue;
      const double sa = std::sin(2 * p.A(d)), sb = std::sin(2 * p.B(d));
      if (std::abs(sa) < kZeroSine || std::abs(sb) < kZeroSine) continue;
      out.push_back({d, (k % 2 == 0) ? "same-sign branch" : "opposite-sign branch", kind,
                     PointClass::InteriorSmooth, -(std::abs(sa) + std::abs(sb)),
                     sd_qbar_slopes(theta, d, panel)});
    }
  } else {
    // Kinks: sin 2A = 0 or sin 2B = 0. Each is a convex corner.
    for (int m = -4; m <= 4; ++m) {
      for (const double d : {m * pi / 2 - p.a0, p.b0 - m * pi / 2}) {
        if (!inside(d)) continue;
        const auto sl = sd_qbar_slopes(theta, d, panel);
        if (sl.left <= 0 && sl.right >= 0) out.push_back({d, "kink", kind, PointClass::Kink, 0.0, sl});
      }
    }
  }
  add_boundary_extrema(out, kind, sd_qbar_slopes(theta, 0.0, panel), sd_qbar_slopes(theta, pi / 2, panel),
                       "boundary delta=0", "boundary delta=pi/2");
  sort_unique(out);
  return out;
}

std::vector<StationaryPoint> sd_fbar_analytic_extrema(double theta, Panel panel, ExtremumKind kind) {
  check_theta(theta);
  const auto p = panel_args(theta, panel);
  std::vector<StationaryPoint> out;
  // dF̄/dδ = ½(sin 2B − sin 2A) vanishes for A − B ∈ πℤ;
  // d²F̄/dδ² = −(cos 2A + cos 2B).
  for (int m = -4; m <= 4; ++m) {
    const double d = 0.5 * (p.b0 - p.a0) + m * pi / 2;
    if (!(d > kAngleSlack && d < pi / 2 - kAngleSlack)) continue;
    const double second = -(std::cos(2 * p.A(d)) + std::cos(2 * p.B(d)));
    const ExtremumKind k = second < 0 ? ExtremumKind::Max : ExtremumKind::Min;
    if (k == kind)
      out.push_back({d, "balanced overlaps", kind, PointClass::InteriorSmooth, second,
                     sd_fbar_slopes(theta, d, panel)});
  }
  add_boundary_extrema(out, kind, sd_fbar_slopes(theta, 0.0, panel), sd_fbar_slopes(theta, pi / 2, panel),
                       "boundary delta=0", "boundary delta=pi/2");
  sort_unique(out);
  return out;
}

StationaryReport sd_stationary_points(double theta) {
  if (!(theta > 0))
    throw Error("sd_stationary_points: theta = 0 is the orthogonal ensemble (<a|b> = 0); exact cloning "
                "is possible and the randomness analysis is degenerate");
  if (!(theta < pi / 4))
    throw Error("sd_stationary_points: theta = pi/4 is the identical-state ensemble (|a> = |b>); exact "
                "cloning is possible and the randomness analysis is degenerate");

  const auto g = CloneGeometry::make(theta, 0.0, Panel::Left);
  StationaryReport r;
  r.theta = theta;
  r.phi = g.phi;
  r.gamma = g.gamma;
  const double c = g.phi - g.gamma;
  r.delta0 = c;

  auto smooth = [&](double d, std::string label, double second) {
    return StationaryPoint{d, std::move(label), ExtremumKind::Max, PointClass::InteriorSmooth, second,
                           sd_qbar_slopes(theta, d, Panel::Left)};
  };
  // Case I: sin 2δ > 0, sin 2(φ−δ−γ) > 0, stationary at δ = (φ−γ)/2.
  {
    const double d = c / 2;
    r.maxima.push_back(smooth(d, "case I: delta = (phi - gamma)/2", -std::sin(2 * d) - std::sin(2 * (c - d))));
  }
  // Case II: sin 2δ > 0, sin 2(φ−δ−γ) < 0, stationary at δ = π/4 + (φ−γ)/2.
  {
    const double d = pi / 4 + c / 2;
    r.maxima.push_back(
        smooth(d, "case II: delta = pi/4 + (phi - gamma)/2", -std::sin(2 * d) + std::sin(2 * (c - d))));
  }
  for (auto& m : r.maxima)
    if (m.second_derivative >= 0) m.kind = ExtremumKind::Min;

  auto corner = [&](double d, std::string label) {
    const auto sl = sd_qbar_slopes(theta, d, Panel::Left);
    return StationaryPoint{d, std::move(label), ExtremumKind::Min, classify_location(d, true), 0.0, sl};
  };
  r.minima.push_back(corner(0.0, "boundary delta = 0"));
  r.minima.push_back(corner(c, "delta0 = phi - gamma"));
  r.minima.push_back(corner(pi / 2, "boundary delta = pi/2"));

  r.rejected.push_back({"phi = gamma",
                        "case I '-' branch: requires |a>, |b> equal or orthogonal (exact cloning); here phi - gamma = " +
                            std::to_string(c)});
  r.rejected.push_back({"phi - gamma = pi/2",
                        "case II '-' branch: phi and gamma lie in [0, pi/2] so phi - gamma < pi/2; here phi - gamma = " +
                            std::to_string(c)});
  return r;
}

}  // namespace qpr
