#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "qpr/cloning.hpp"
#include "qpr/optimize.hpp"

using namespace qpr;
using std::numbers::pi;
using qpr::test::max_abs;

namespace {

ComplexMatrix diag2(double a, double b) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

}  // namespace

TEST_CASE("bh_clone on basis inputs") {
  const auto c0 = bh_clone(PureState::basis(2, 0));
  CHECK(max_abs(c0.clone_state.matrix() - diag2(5.0 / 6, 1.0 / 6)) < 1e-15);
  CHECK(max_abs(c0.original_state.matrix() - diag2(5.0 / 6, 1.0 / 6)) < 1e-15);
  const auto c1 = bh_clone(PureState::basis(2, 1));
  CHECK(max_abs(c1.clone_state.matrix() - diag2(1.0 / 6, 5.0 / 6)) < 1e-15);
  CHECK_THROWS_AS(bh_clone(PureState::basis(4, 0)), Error);
}

TEST_CASE("bh_clone joint state for |0>") {
  // √(2/3)|00⟩|↑⟩ + √(1/3)(|01⟩ + |10⟩)/√2 |↓⟩ with index 4·copy + 2·clone + machine.
  const auto joint = bh_clone(PureState::basis(2, 0)).joint_state;
  CHECK(std::abs(joint[0] - std::sqrt(2.0 / 3)) < 1e-15);
  CHECK(std::abs(joint[3] - std::sqrt(1.0 / 6)) < 1e-15);
  CHECK(std::abs(joint[5] - std::sqrt(1.0 / 6)) < 1e-15);
  const ComplexMatrix v = bh_isometry();
  CHECK(max_abs(v.adjoint() * v - ComplexMatrix::Identity(2, 2)) < 1e-15);
}

TEST_CASE("bh clone is isotropic over 1000 Haar inputs") {
  double lo = 1, hi = 0, worst_q = 0, worst_shape = 0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    CounterStream rng(2024, i);
    const auto phi = haar_sample_qubit(rng);
    const auto out = bh_clone(phi);
    const double f = fidelity(out.clone_state, phi);
    lo = std::min(lo, f);
    hi = std::max(hi, f);
    worst_q = std::max(worst_q, randomness_closed_form(out.clone_state, phi));
    worst_q = std::max(worst_q, randomness_from_distribution(measurement_distribution(out.clone_state, phi)));
    ComplexVector perp(2);
    perp << -std::conj(phi[1]), std::conj(phi[0]);
    const ComplexMatrix expected = 5.0 / 6 * phi.projector() + 1.0 / 6 * perp * perp.adjoint();
    worst_shape = std::max(worst_shape, max_abs(out.clone_state.matrix() - expected));
  }
  CHECK(std::abs(lo - 5.0 / 6) < 1e-12);
  CHECK(std::abs(hi - 5.0 / 6) < 1e-12);
  CHECK(hi - lo <= 1e-12);
  CHECK(worst_q <= 1e-10);
  CHECK(worst_shape < 1e-12);
}

TEST_CASE("bh_stats") {
  const auto r = bh_stats();
  CHECK(r.stats.fidelity == 5.0 / 6);
  CHECK(r.stats.randomness == 0.0);
  CHECK(r.merit.rule == MeritRule::Difference);
  CHECK(r.merit.value == -5.0 / 6);
  CHECK(r.fidelity_residual <= 1e-10);
  CHECK(r.randomness_residual <= 1e-10);
  const auto s = bh_stats(1000, 7);
  CHECK(s.seed == 7);
  CHECK(s.fidelity_residual <= 1e-10);
}

TEST_CASE("clone geometry") {
  const auto g = CloneGeometry::make(pi / 8, 0.1, Panel::Left);
  CHECK(std::abs(g.phi - pi / 3) < 1e-12);
  CHECK(std::abs(g.gamma - pi / 4) < 1e-12);
  CHECK_THROWS_AS(CloneGeometry::make(-0.1, 0, Panel::Left), Error);
  CHECK_THROWS_AS(CloneGeometry::make(pi / 8, 1.6, Panel::Left), Error);
  CHECK(parse_panel("right") == Panel::Right);
  CHECK(to_string(Panel::Left) == "left");
  CHECK_THROWS_AS(parse_panel("middle"), Error);
}

TEST_CASE("sd_states examples") {
  const auto s0 = sd_states(CloneGeometry::make(pi / 8, 0, Panel::Left));
  CHECK(std::abs(std::abs(s0.alpha.inner(s0.aa)) - 1) < 1e-12);
  for (double delta : {0.0, 0.3, pi / 2}) {
    const auto s = sd_states(CloneGeometry::make(pi / 8, delta, Panel::Left));
    CHECK(std::abs(s.aa.inner(s.bb) - 0.5) < 1e-12);
  }
  const auto s = sd_states(CloneGeometry::make(pi / 8, pi / 24, Panel::Left));
  const double expected = 0.982962913144534143;
  CHECK(std::abs(std::norm(s.aa.inner(s.alpha)) - expected) < 1e-12);
  CHECK(std::abs(std::norm(s.bb.inner(s.beta)) - expected) < 1e-12);
  // |aa⟩ = |a⟩⊗|a⟩.
  const auto a = ensemble_state_a(pi / 8);
  CHECK(max_abs(s.aa.amplitudes() - tensor(a.amplitudes(), a.amplitudes())) < 1e-15);
}

TEST_CASE("sd_stats examples") {
  auto st = sd_stats(CloneGeometry::make(pi / 8, pi / 12, Panel::Left));
  CHECK(std::abs(st.fidelity - 0.966506350946109662) < 1e-12);
  CHECK(std::abs(st.randomness - 0.125) < 1e-12);
  st = sd_stats(CloneGeometry::make(pi / 8, pi / 24, Panel::Left));
  CHECK(std::abs(st.fidelity - 0.982962913144534143) < 1e-12);
  CHECK(std::abs(st.randomness - 0.129409522551260381) < 1e-12);
  st = sd_stats(CloneGeometry::make(0, 0, Panel::Left));
  CHECK(std::abs(st.fidelity - 1) < 1e-12);
  CHECK(std::abs(st.randomness) < 1e-12);
  for (double d : {0.0, pi / 12, pi / 2}) CHECK(std::abs(sd_qbar(pi / 8, d, Panel::Left) - 0.125) < 1e-12);
}

TEST_CASE("closed forms match state overlaps on 500 random triples") {
  std::mt19937_64 rng(500);
  std::uniform_real_distribution<double> th(0, pi / 4), de(0, pi / 2);
  double worst = 0, worst_unitary = 0;
  for (int i = 0; i < 500; ++i) {
    const auto g = CloneGeometry::make(th(rng), de(rng), i % 2 ? Panel::Right : Panel::Left);
    const auto a = sd_stats(g), b = sd_stats_from_states(g);
    worst = std::max({worst, std::abs(a.fidelity - b.fidelity), std::abs(a.randomness - b.randomness)});
    const auto s = sd_states(g);
    worst_unitary = std::max(worst_unitary, std::abs(s.alpha.inner(s.beta) - std::sin(2 * g.theta)));
    worst_unitary = std::max(worst_unitary, std::abs(ensemble_state_a(g.theta).inner(ensemble_state_b(g.theta)) -
                                                     std::sin(2 * g.theta)));
  }
  CHECK(worst <= 1e-10);
  CHECK(worst_unitary <= 1e-10);
}

TEST_CASE("one-sided slopes") {
  // π/12 is a kink of Q̄ at θ = π/8 with slopes −1 and +1 on the Left panel.
  const auto k = sd_qbar_slopes(pi / 8, pi / 12, Panel::Left);
  CHECK(k.left < 0);
  CHECK(k.right > 0);
  const auto m = sd_qbar_slopes(pi / 8, pi / 24, Panel::Left);
  CHECK(std::abs(m.left) < 1e-12);
  CHECK(std::abs(m.right) < 1e-12);
  const auto f = sd_fbar_slopes(pi / 8, pi / 24, Panel::Left);
  CHECK(std::abs(f.left) < 1e-12);
  // Compare with a centered difference at a smooth point.
  const double h = 1e-6, d = 0.4;
  const double fd = (sd_qbar(pi / 8, d + h, Panel::Left) - sd_qbar(pi / 8, d - h, Panel::Left)) / (2 * h);
  CHECK(std::abs(sd_qbar_slopes(pi / 8, d, Panel::Left).left - fd) < 1e-8);
}

TEST_CASE("sd_stationary_points at theta = pi/8") {
  const auto r = sd_stationary_points(pi / 8);
  CHECK(std::abs(r.delta0 - pi / 12) < 1e-12);
  REQUIRE(r.maxima.size() == 2);
  CHECK(std::abs(r.maxima[0].delta - pi / 24) < 1e-12);
  CHECK(std::abs(r.maxima[1].delta - (pi / 4 + pi / 24)) < 1e-12);
  for (const auto& m : r.maxima) {
    CHECK(m.kind == ExtremumKind::Max);
    CHECK(m.second_derivative < 0);
  }
  REQUIRE(r.minima.size() == 3);
  CHECK(std::abs(r.minima[0].delta) < 1e-12);
  CHECK(std::abs(r.minima[1].delta - pi / 12) < 1e-12);
  CHECK(r.minima[1].classification == PointClass::Kink);
  CHECK(r.minima[1].label.find("delta0") != std::string::npos);
  CHECK(std::abs(r.minima[2].delta - pi / 2) < 1e-12);

  const auto fmax = sd_fbar_analytic_extrema(pi / 8, Panel::Left, ExtremumKind::Max);
  REQUIRE(fmax.size() == 1);
  CHECK(std::abs(fmax[0].delta - r.maxima[0].delta) < 1e-12);

  bool rejected_half_pi = false;
  for (const auto& b : r.rejected) rejected_half_pi = rejected_half_pi || b.condition.find("pi/2") != std::string::npos;
  CHECK(rejected_half_pi);
}

TEST_CASE("sd_stationary_points rejects degenerate ensembles") {
  CHECK_THROWS_WITH_AS(sd_stationary_points(0.0), doctest::Contains("orthogonal"), Error);
  CHECK_THROWS_WITH_AS(sd_stationary_points(pi / 4), doctest::Contains("identical"), Error);
}

TEST_CASE("optimal fidelity and optimal randomness machines differ") {
  for (int i = 1; i < 20; ++i) {
    const double theta = pi / 4 * i / 20;
    const auto r = sd_stationary_points(theta);
    const double fmax = (r.phi - r.gamma) / 2;
    for (const auto& m : r.minima) CHECK(std::abs(m.delta - fmax) > 1e-6);
  }
}

TEST_CASE("panel comparison at theta = pi/8") {
  const auto left = optimality_report(pi / 8, Panel::Left);
  const auto right = optimality_report(pi / 8, Panel::Right);
  CHECK(right.min_ratio > left.min_ratio);
  CHECK(right.max_f < left.max_f);
  CHECK(right.min_ratio > 0.129332);
  CHECK(right.max_f < 0.9829629);
}
