#pragma once

// Approximate qubit cloning: the Buzek-Hillery universal symmetric cloner and
// the planar state-dependent cloner for the ensemble {|a⟩, |b⟩} with
// |a⟩ = cos θ|0⟩ + sin θ|1⟩, |b⟩ = sin θ|0⟩ + cos θ|1⟩.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qpr/process.hpp"

namespace qpr {

// ---------------------------------------------------------------------------
// Buzek-Hillery machine

/// Joint output on copy ⊗ clone ⊗ machine (subsystems 0, 1, 2) and the two
/// single-qubit marginals.
struct BHOutput {
  PureState joint_state;
  DensityOperator original_state;
  DensityOperator clone_state;
};

/// Extends |0⟩|0⟩|M⟩ → √(2/3)|00⟩|↑⟩ + √(1/3)|Ψ₊⟩|↓⟩ and
/// |1⟩|0⟩|M⟩ → √(2/3)|11⟩|↓⟩ + √(1/3)|Ψ₊⟩|↑⟩ linearly (↑ = |0⟩, ↓ = |1⟩).
BHOutput bh_clone(const PureState& input);

/// The isometry C² → C⁸ implementing the machine (columns are the images
/// of |0⟩ and |1⟩).
ComplexMatrix bh_isometry();

/// Qubit channel input ↦ clone marginal.
KrausChannel bh_clone_channel();

struct BHReport {
  ProcessStats stats;            // analytic values 5/6 and 0
  FigureOfMerit merit;
  double fidelity_residual = 0;  // max |F(φ) − 5/6| over the sample
  double randomness_residual = 0;  // max Q(φ) over the sample (both forms)
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

/// Analytic F̄ = 5/6, Q̄ = 0 checked against apply-and-measure on seeded
/// Haar inputs.
BHReport bh_stats(std::uint64_t samples = 1000, std::uint64_t seed = 2024);

// ---------------------------------------------------------------------------
// State-dependent cloner

enum class Panel { Left, Right };

std::string_view to_string(Panel panel);
Panel parse_panel(std::string_view name);

/// Planar geometry of the two-state cloner. φ is the angle between |aa⟩
/// and |bb⟩, γ the angle between |α⟩ and |β⟩, δ the offset of the first
/// output from |aa⟩. Left ordering: aa, α, β, bb. Right: aa, β, α, bb.
struct CloneGeometry {
  double theta = 0;
  double phi = 0;
  double gamma = 0;
  double delta = 0;
  Panel panel = Panel::Left;

  /// Validates θ ∈ [0, π/4], δ ∈ [0, π/2] and derives φ = acos(sin²2θ),
  /// γ = acos(sin 2θ).
  static CloneGeometry make(double theta, double delta, Panel panel);
};

struct SDStates {
  PureState alpha;  // output for input |a⟩
  PureState beta;   // output for input |b⟩
  PureState aa;
  PureState bb;
};

PureState ensemble_state_a(double theta);
PureState ensemble_state_b(double theta);

/// Real vectors in the plane spanned by |aa⟩ and |bb⟩ at the geometry's
/// angles.
SDStates sd_states(const CloneGeometry& geom);

/// Closed-form F̄ and Q̄.
ProcessStats sd_stats(const CloneGeometry& geom);

/// F̄ = ½(|⟨α|aa⟩|² + |⟨β|bb⟩|²), Q̄ = ½(Q(α, aa) + Q(β, bb)) from the
/// constructed states.
ProcessStats sd_stats_from_states(const CloneGeometry& geom);

/// Closed forms as plain functions of δ for a fixed θ and panel; these are
/// the objectives handed to the optimizer.
double sd_fbar(double theta, double delta, Panel panel);
double sd_qbar(double theta, double delta, Panel panel);

struct OneSidedSlopes {
  double left = 0;
  double right = 0;
};

/// Exact one-sided derivatives of Q̄ and F̄ with respect to δ.
OneSidedSlopes sd_qbar_slopes(double theta, double delta, Panel panel);
OneSidedSlopes sd_fbar_slopes(double theta, double delta, Panel panel);

enum class ExtremumKind { Min, Max };
enum class PointClass { InteriorSmooth, Kink, Boundary };

std::string_view to_string(ExtremumKind kind);
std::string_view to_string(PointClass cls);

struct StationaryPoint {
  double delta = 0;
  std::string label;
  ExtremumKind kind = ExtremumKind::Max;
  PointClass classification = PointClass::InteriorSmooth;
  double second_derivative = 0;  // smooth points only
  OneSidedSlopes slopes;
};

struct RejectedBranch {
  std::string condition;
  std::string reason;
};

/// Analytic stationary-point analysis of Q̄ for the Left panel on [0, π/2].
struct StationaryReport {
  double theta = 0;
  double phi = 0;
  double gamma = 0;
  double delta0 = 0;  // φ − γ, the interior minimum
  std::vector<StationaryPoint> maxima;
  std::vector<StationaryPoint> minima;
  std::vector<RejectedBranch> rejected;
};

/// Requires θ strictly inside (0, π/4); both ends are degenerate ensembles.
StationaryReport sd_stationary_points(double theta);

/// Analytic extrema of Q̄ (kind Max: smooth stationary points; kind Min:
/// kinks and boundary minima) on [0, π/2] for either panel, sorted.
std::vector<StationaryPoint> sd_qbar_analytic_extrema(double theta, Panel panel, ExtremumKind kind);

/// Analytic extrema of F̄ on [0, π/2] for either panel, sorted.
std::vector<StationaryPoint> sd_fbar_analytic_extrema(double theta, Panel panel, ExtremumKind kind);

}  // namespace qpr
