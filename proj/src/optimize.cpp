#include "qpr/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qpr {

namespace {

constexpr double kInvPhi = 0.6180339887498948482;  // 1/φ
// Slope jump (objective units per radian) separating a corner from the
// O(step) slope drift of a smooth extremum.
constexpr double kKinkJump = 1e-3;
constexpr int kMaxBisections = 200;

struct Minimizer {
  const std::function<double(double)>& f;
  double sign;  // +1 to minimize f, −1 to maximize it
  double operator()(double x) const { return sign * f(x); }
};

double golden_section(const Minimizer& g, double a, double b, double tol) {
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double gc = g(c), gd = g(d);
  while (b - a > tol) {
    if (gc <= gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - kInvPhi * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + kInvPhi * (b - a);
      gd = g(d);
    }
  }
  return 0.5 * (a + b);
}

// Bisection on the sign of g(x + h) − g(x − h); brackets a smooth minimum
// of g far more tightly than value comparisons can.
double polish_smooth(const Minimizer& g, double x, double lo, double hi, double h, double tol) {
  double w = std::max(1e3 * tol, 4 * h);
  double a = std::max(lo + h, x - w);
  double b = std::min(hi - h, x + w);
  if (!(a < b)) return x;
  auto s = [&](double t) { return g(t + h) - g(t - h); };
  if (!(s(a) < 0 && s(b) > 0)) return x;
  for (int i = 0; i < kMaxBisections && b - a > 0.25 * tol; ++i) {
    const double m = 0.5 * (a + b);
    (s(m) < 0 ? a : b) = m;
  }
  const double m = 0.5 * (a + b);
  return g(m) <= g(x) + 1e-15 * std::max(1.0, std::abs(g(x))) ? m : x;
}

}  // namespace

std::vector<double> ExtremumSet::locations() const {
  std::vector<double> out;
  for (const auto& p : points) out.push_back(p.location);
  return out;
}

std::vector<double> ExtremumSet::values() const {
  std::vector<double> out;
  for (const auto& p : points) out.push_back(p.value);
  return out;
}

ExtremumSet scan_extrema(const std::function<double(double)>& objective, double lo, double hi,
                         ExtremumKind kind, const ScanOptions& options) {
  if (!(std::isfinite(lo) && std::isfinite(hi) && hi > lo)) throw Error("scan_extrema: degenerate interval");
  if (options.grid_n < 64) throw Error("scan_extrema: grid_n must be at least 64");
  if (!(options.tol > 0)) throw Error("scan_extrema: tol must be positive");

  const Minimizer g{objective, kind == ExtremumKind::Min ? 1.0 : -1.0};
  const int n = options.grid_n;
  const double step = (hi - lo) / n;
  auto grid_x = [&](int i) { return i == n ? hi : lo + i * step; };
  std::vector<double> gv(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) gv[static_cast<std::size_t>(i)] = g(grid_x(i));
  auto at = [&](int i) { return gv[static_cast<std::size_t>(i)]; };

  const double slope_h = 1e-6 * (hi - lo);
  const double polish_h = 1e-5 * (hi - lo);

  std::vector<Extremum> found;
  auto refine = [&](double a, double b) {
    double x = golden_section(g, a, b, options.tol);
    if (a == lo && g(lo) <= g(x)) x = lo;
    if (b == hi && g(hi) <= g(x)) x = hi;

    Extremum e;
    if (x == lo || x == hi) {
      e.classification = PointClass::Boundary;
    } else {
      const double left = (g(x) - g(x - slope_h)) / slope_h;
      const double right = (g(x + slope_h) - g(x)) / slope_h;
      e.classification = (right - left) > kKinkJump ? PointClass::Kink : PointClass::InteriorSmooth;
      if (e.classification == PointClass::InteriorSmooth) x = polish_smooth(g, x, lo, hi, polish_h, options.tol);
    }
    e.location = x;
    e.value = objective(x);
    const double xl = std::max(lo, x - slope_h), xr = std::min(hi, x + slope_h);
    e.slopes.left = x > lo ? (objective(x) - objective(xl)) / (x - xl) : 0.0;
    e.slopes.right = x < hi ? (objective(xr) - objective(x)) / (xr - x) : 0.0;
    found.push_back(e);
  };

  if (at(0) < at(1)) refine(lo, grid_x(1));
  for (int i = 1; i < n; ++i)
    if (at(i) < at(i - 1) && at(i) <= at(i + 1)) refine(grid_x(i - 1), grid_x(i + 1));
  if (at(n) < at(n - 1)) refine(grid_x(n - 1), hi);

  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.location < b.location; });
  ExtremumSet out;
  out.kind = kind;
  for (const auto& e : found) {
    if (!out.points.empty() && e.location - out.points.back().location <= 2 * options.tol) {
      auto& prev = out.points.back();
      if (g(e.location) < g(prev.location)) prev = e;
      continue;
    }
    out.points.push_back(e);
  }
  return out;
}

bool locations_within(const std::vector<double>& a, const std::vector<double>& b, double tol) {
  return std::all_of(a.begin(), a.end(), [&](double x) {
    return std::any_of(b.begin(), b.end(), [&](double y) { return std::abs(x - y) <= tol; });
  });
}

bool same_locations(const std::vector<double>& a, const std::vector<double>& b, double tol) {
  return locations_within(a, b, tol) && locations_within(b, a, tol);
}

OptimalityReport optimality_report(double theta, Panel panel, const ScanOptions& options) {
  using std::numbers::pi;
  if (!(theta > 0 && theta < pi / 4))
    throw Error("optimality_report: theta must lie strictly inside (0, pi/4)");

  OptimalityReport r;
  r.theta = theta;
  r.panel = panel;
  r.options = options;

  auto fbar = [&](double d) { return sd_fbar(theta, d, panel); };
  auto qbar = [&](double d) { return sd_qbar(theta, d, panel); };
  auto ratio = [&](double d) { return figure_of_merit(fbar(d), qbar(d)).value; };

  r.argmax_f = scan_extrema(fbar, 0.0, pi / 2, ExtremumKind::Max, options);
  r.argmin_q = scan_extrema(qbar, 0.0, pi / 2, ExtremumKind::Min, options);
  r.argmax_q = scan_extrema(qbar, 0.0, pi / 2, ExtremumKind::Max, options);
  r.argmin_ratio = scan_extrema(ratio, 0.0, pi / 2, ExtremumKind::Min, options);

  const double match = options.tol;
  const auto q_min = r.argmin_q.locations();
  const auto ratio_min = r.argmin_ratio.locations();
  r.coincide_q_ratio = same_locations(ratio_min, q_min, match);
  r.ratio_minima_within_q_minima = locations_within(ratio_min, q_min, match);
  r.separation_f_vs_q = std::none_of(r.argmax_f.points.begin(), r.argmax_f.points.end(), [&](const Extremum& e) {
    return locations_within({e.location}, q_min, match);
  });

  auto best = [](const ExtremumSet& s, bool want_max) {
    const auto v = s.values();
    if (v.empty()) return 0.0;
    return want_max ? *std::max_element(v.begin(), v.end()) : *std::min_element(v.begin(), v.end());
  };
  r.max_f = best(r.argmax_f, true);
  r.min_q = best(r.argmin_q, false);
  r.min_ratio = best(r.argmin_ratio, false);

  // Numeric vs analytic extrema.
  auto check = [&](const std::string& what, const ExtremumSet& numeric,
                   const std::vector<StationaryPoint>& analytic) {
    std::vector<double> a;
    for (const auto& p : analytic) a.push_back(p.delta);
    if (!same_locations(numeric.locations(), a, match)) {
      r.diagnostics.push_back(what + ": numeric extrema disagree with the analytic set");
      return;
    }
    for (const auto& p : analytic)
      for (const auto& e : numeric.points)
        if (std::abs(e.location - p.delta) <= match && e.classification != p.classification)
          r.diagnostics.push_back(what + ": classification mismatch at delta = " + std::to_string(p.delta));
  };
  check("argmin Q", r.argmin_q, sd_qbar_analytic_extrema(theta, panel, ExtremumKind::Min));
  check("argmax Q", r.argmax_q, sd_qbar_analytic_extrema(theta, panel, ExtremumKind::Max));
  check("argmax F", r.argmax_f, sd_fbar_analytic_extrema(theta, panel, ExtremumKind::Max));

  if (panel == Panel::Left) {
    const auto sp = sd_stationary_points(theta);
    check("argmax Q (case I/II)", r.argmax_q, sp.maxima);
    check("argmin Q (delta0 set)", r.argmin_q, sp.minima);
  }

  for (const auto& e : r.argmin_ratio.points)
    if (sd_fbar(theta, e.location, panel) < 1e-12)
      r.notes.push_back("ratio objective fell back to the difference rule at delta = " +
                              std::to_string(e.location));

  r.cross_validation_passed = r.diagnostics.empty();
  return r;
}

}  // namespace qpr
