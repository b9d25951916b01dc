#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qpr/optimize.hpp"

using namespace qpr;
using std::numbers::pi;

namespace {

bool close_to_any(double x, const std::vector<double>& ys, double tol) {
  for (double y : ys)
    if (std::abs(x - y) <= tol) return true;
  return false;
}

}  // namespace

TEST_CASE("scan_extrema on sin(2 delta)") {
  const auto s = scan_extrema([](double d) { return std::sin(2 * d); }, 0, pi / 2, ExtremumKind::Max);
  REQUIRE(s.points.size() == 1);
  CHECK(std::abs(s.points[0].location - pi / 4) <= 1e-10);
  CHECK(s.points[0].classification == PointClass::InteriorSmooth);
  const auto m = scan_extrema([](double d) { return std::sin(2 * d); }, 0, pi / 2, ExtremumKind::Min);
  CHECK(same_locations(m.locations(), {0.0, pi / 2}, 1e-10));
  for (const auto& p : m.points) CHECK(p.classification == PointClass::Boundary);
}

TEST_CASE("scan_extrema argument checks") {
  auto f = [](double d) { return d; };
  CHECK_THROWS_AS(scan_extrema(f, 1, 1, ExtremumKind::Min), Error);
  CHECK_THROWS_AS(scan_extrema(f, 0, 1, ExtremumKind::Min, {32, 1e-10}), Error);
  CHECK_THROWS_AS(scan_extrema(f, 0, 1, ExtremumKind::Min, {128, 0}), Error);
}

TEST_CASE("Q-bar minima and F-bar maximum at theta = pi/8") {
  auto q = [](double d) { return sd_qbar(pi / 8, d, Panel::Left); };
  const auto mins = scan_extrema(q, 0, pi / 2, ExtremumKind::Min);
  REQUIRE(mins.points.size() == 3);
  CHECK(same_locations(mins.locations(), {0.0, pi / 12, pi / 2}, 1e-8));
  for (double v : mins.values()) CHECK(std::abs(v - 0.125) < 1e-10);
  CHECK(mins.points[1].classification == PointClass::Kink);

  auto f = [](double d) { return sd_fbar(pi / 8, d, Panel::Left); };
  const auto maxs = scan_extrema(f, 0, pi / 2, ExtremumKind::Max);
  REQUIRE(maxs.points.size() == 1);
  CHECK(std::abs(maxs.points[0].location - pi / 24) < 1e-8);
  CHECK(std::abs(maxs.points[0].value - 0.9829629) < 1e-6);
}

TEST_CASE("refinement contract") {
  const ScanOptions opt;
  for (Panel panel : {Panel::Left, Panel::Right}) {
    auto q = [panel](double d) { return sd_qbar(0.3, d, panel); };
    auto f = [panel](double d) { return sd_fbar(0.3, d, panel); };
    auto r = [panel](double d) { return sd_qbar(0.3, d, panel) / sd_fbar(0.3, d, panel); };
    struct Case {
      std::function<double(double)> g;
      ExtremumKind kind;
    };
    for (const auto& c : {Case{q, ExtremumKind::Min}, Case{q, ExtremumKind::Max}, Case{f, ExtremumKind::Max},
                          Case{r, ExtremumKind::Min}}) {
      const auto s = scan_extrema(c.g, 0, pi / 2, c.kind, opt);
      CHECK(!s.points.empty());
      for (const auto& p : s.points)
        for (double h : {-2 * opt.tol, 2 * opt.tol}) {
          const double x = p.location + h;
          if (x < 0 || x > pi / 2) continue;
          const double worse = c.kind == ExtremumKind::Min ? c.g(x) - p.value : p.value - c.g(x);
          CHECK(worse >= -1e-12);
        }
    }
  }
}

TEST_CASE("doubling the grid moves no location by more than tol") {
  for (double theta : {0.1, pi / 8, 0.6})
    for (Panel panel : {Panel::Left, Panel::Right}) {
      auto q = [=](double d) { return sd_qbar(theta, d, panel); };
      for (auto kind : {ExtremumKind::Min, ExtremumKind::Max}) {
        const auto a = scan_extrema(q, 0, pi / 2, kind, {4096, 1e-10});
        const auto b = scan_extrema(q, 0, pi / 2, kind, {8192, 1e-10});
        REQUIRE(a.points.size() == b.points.size());
        CHECK(same_locations(a.locations(), b.locations(), 1e-10));
      }
    }
}

TEST_CASE("interior Q-bar extrema agree with the analytic analysis on a 20-point theta grid") {
  for (int i = 0; i < 20; ++i) {
    const double theta = 0.05 + (pi / 4 - 0.1) * i / 19;
    const auto r = sd_stationary_points(theta);
    auto q = [=](double d) { return sd_qbar(theta, d, Panel::Left); };
    const auto maxs = scan_extrema(q, 0, pi / 2, ExtremumKind::Max);
    std::vector<double> analytic_max;
    for (const auto& m : r.maxima) analytic_max.push_back(m.delta);
    CHECK(same_locations(maxs.locations(), analytic_max, 1e-10));
    for (const auto& p : maxs.points) {
      CHECK(p.classification == PointClass::InteriorSmooth);
      CHECK(p.slopes.left >= -1e-6);
      CHECK(p.slopes.right <= 1e-6);
    }
    const auto mins = scan_extrema(q, 0, pi / 2, ExtremumKind::Min);
    std::vector<double> analytic_min;
    for (const auto& m : r.minima) analytic_min.push_back(m.delta);
    CHECK(same_locations(mins.locations(), analytic_min, 1e-10));
  }
}

TEST_CASE("location set helpers") {
  CHECK(locations_within({0.1}, {0.1, 0.2}, 1e-12));
  CHECK(!same_locations({0.1}, {0.1, 0.2}, 1e-12));
  CHECK(close_to_any(0.2, {0.1, 0.2 + 1e-13}, 1e-12));
}

TEST_CASE("optimality report at theta = pi/8") {
  const auto left = optimality_report(pi / 8, Panel::Left);
  CHECK(left.cross_validation_passed);
  CHECK(left.diagnostics.empty());
  CHECK(left.separation_f_vs_q);
  CHECK(left.ratio_minima_within_q_minima);
  CHECK(same_locations(left.argmin_q.locations(), {0.0, pi / 12, pi / 2}, 1e-8));
  CHECK(same_locations(left.argmax_f.locations(), {pi / 24}, 1e-8));
  CHECK(std::abs(left.min_q - 0.125) < 1e-10);
  CHECK(std::abs(left.max_f - 0.982962913144534143) < 1e-12);
  CHECK(std::abs(left.min_ratio - 0.129331793710034021) < 1e-12);
  // δ = π/2 minimizes Q̄ but F̄ is small there, so the ratio is large.
  CHECK(!close_to_any(pi / 2, left.argmin_ratio.locations(), 1e-8));

  const auto right = optimality_report(pi / 8, Panel::Right);
  CHECK(right.cross_validation_passed);
  CHECK(right.min_ratio > left.min_ratio);
  CHECK(right.max_f < left.max_f);

  CHECK_THROWS_AS(optimality_report(0, Panel::Left), Error);
  CHECK_THROWS_AS(optimality_report(1.6, Panel::Left), Error);
}

TEST_CASE("optimality reports pass cross-validation across theta") {
  for (int i = 1; i < 20; ++i)
    for (Panel panel : {Panel::Left, Panel::Right}) {
      const auto r = optimality_report(pi / 4 * i / 20, panel);
      CHECK(r.cross_validation_passed);
      CHECK(r.ratio_minima_within_q_minima);
      if (panel == Panel::Left) CHECK(r.separation_f_vs_q);
    }
}
