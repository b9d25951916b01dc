#pragma once

// Dense-grid bracketing plus golden-section refinement for one-dimensional
// objectives with corners, and the optimality report for the
// state-dependent cloner.

#include <functional>
#include <string>
#include <vector>

#include "qpr/cloning.hpp"

namespace qpr {

struct Extremum {
  double location = 0;
  double value = 0;
  PointClass classification = PointClass::InteriorSmooth;
  OneSidedSlopes slopes;  // finite-difference one-sided slopes at location
};

struct ExtremumSet {
  ExtremumKind kind = ExtremumKind::Min;
  std::vector<Extremum> points;  // sorted by location

  std::vector<double> locations() const;
  std::vector<double> values() const;
};

struct ScanOptions {
  int grid_n = 4096;
  double tol = 1e-10;
};

/// All local extrema of `objective` on [lo, hi]. Grid neighbours bracket
/// each candidate (endpoints included), golden-section search shrinks the
/// bracket to width ≤ tol, and smooth interior points are then polished by
/// bisection on the sign of a symmetric difference. Points closer than
/// 2·tol are merged. A corner is reported when the one-sided slopes
/// disagree.
ExtremumSet scan_extrema(const std::function<double(double)>& objective, double lo, double hi,
                         ExtremumKind kind, const ScanOptions& options = {});

/// True when every point of `a` lies within `tol` of a point of `b`.
bool locations_within(const std::vector<double>& a, const std::vector<double>& b, double tol);
/// Two-way version of locations_within.
bool same_locations(const std::vector<double>& a, const std::vector<double>& b, double tol);

struct OptimalityReport {
  double theta = 0;
  Panel panel = Panel::Left;
  ScanOptions options;

  ExtremumSet argmax_f;
  ExtremumSet argmin_q;
  ExtremumSet argmax_q;
  ExtremumSet argmin_ratio;

  /// argmin of Q̄/F̄ equals argmin of Q̄ as location sets.
  bool coincide_q_ratio = false;
  /// Every minimizer of Q̄/F̄ is also a minimizer of Q̄.
  bool ratio_minima_within_q_minima = false;
  /// No maximizer of F̄ minimizes Q̄.
  bool separation_f_vs_q = false;

  double max_f = 0;
  double min_q = 0;
  double min_ratio = 0;

  /// Numeric extrema agree with the analytic stationary-point analysis.
  bool cross_validation_passed = false;
  std::vector<std::string> diagnostics;
  std::vector<std::string> notes;
};

/// Scans F̄ (max), Q̄ (min and max) and Q̄/F̄ (min) over δ ∈ [0, π/2] and
/// cross-checks them against the analytic extrema. θ must lie in (0, π/4).
OptimalityReport optimality_report(double theta, Panel panel, const ScanOptions& options = {});

}  // namespace qpr
