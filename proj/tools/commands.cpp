#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "qpr/cloning.hpp"
#include "qpr/optimize.hpp"
#include "qpr/process.hpp"
#include "qpr/teleport.hpp"
#include "svg_plot.hpp"

namespace qpr::cli {

namespace {

using json = nlohmann::ordered_json;
using std::numbers::pi;

constexpr double kCrossCheck = 1e-10;
constexpr std::uint64_t kDefaultSeed = 2024;
constexpr std::uint64_t kBhSamples = 1000;
constexpr std::uint64_t kTeleportSamples = 100000;

struct Globals {
  std::uint64_t seed = kDefaultSeed;
  std::optional<std::uint64_t> samples;
  int grid = 4096;
  double tol = 1e-10;
  std::string format;  // empty: decided by --out
  std::string out;
  bool degrees = false;
};

struct CloneArgs {
  double theta = 0;
  std::optional<double> delta;
  std::string panel = "left";
  bool sweep = false;
  std::string plot;
};

struct TeleportArgs {
  double p = 0;
  double theta = 0;
  std::optional<double> mu;
  std::optional<double> nu;
};

struct ReportArgs {
  double theta = 0;
  std::string panel = "left";
};

/// Output and exit status of one command.
struct Result {
  std::string body;
  int code = kSuccess;
};

std::string num(double v) { return fmt::format("{:.15g}", v); }

bool want_csv(const Globals& g) {
  if (!g.format.empty()) return g.format == "csv";
  return g.out.size() >= 4 && g.out.compare(g.out.size() - 4, 4, ".csv") == 0;
}

double angle(const Globals& g, double v) { return g.degrees ? v * pi / 180.0 : v; }

json base_record(const std::string& command, const Globals& g, std::uint64_t samples) {
  json j;
  j["command"] = command;
  j["parameters"] = {{"seed", g.seed},
                     {"samples", samples},
                     {"grid_n", g.grid},
                     {"tol", g.tol},
                     {"format", want_csv(g) ? "csv" : "json"},
                     {"degrees", g.degrees}};
  return j;
}

void check_clone_theta(double theta) {
  if (theta <= 0)
    throw Error("theta = " + num(theta) +
                " is outside (0, pi/4): theta = 0 is the orthogonal ensemble, where exact cloning is "
                "possible (F = 1, Q = 0) and the delta analysis is degenerate");
  if (theta >= pi / 4)
    throw Error("theta = " + num(theta) +
                " is outside (0, pi/4): theta = pi/4 makes |a> and |b> identical, a degenerate ensemble");
}

json extremum_set_json(const ExtremumSet& s) {
  json arr = json::array();
  for (const auto& e : s.points)
    arr.push_back({{"delta", e.location},
                   {"value", e.value},
                   {"class", std::string(to_string(e.classification))},
                   {"slope_left", e.slopes.left},
                   {"slope_right", e.slopes.right}});
  return {{"kind", std::string(to_string(s.kind))}, {"points", arr}};
}

// ---------------------------------------------------------------------------

Result cmd_bh(const Globals& g) {
  const std::uint64_t samples = g.samples.value_or(kBhSamples);
  const auto r = bh_stats(samples, g.seed);
  AverageOptions opts;
  const auto mc = average_over_haar(bh_clone_channel(), identity_target(), std::max<std::uint64_t>(samples, 1),
                                    g.seed, opts);
  const bool ok = r.fidelity_residual <= kCrossCheck && r.randomness_residual <= kCrossCheck;

  Result res;
  res.code = ok ? kSuccess : kCrossValidation;
  if (want_csv(g)) {
    res.body = "f_bar,q_bar,merit,rule,fidelity_residual,randomness_residual,samples,seed\n";
    res.body += fmt::format("{},{},{},{},{},{},{},{}\n", num(r.stats.fidelity), num(r.stats.randomness),
                            num(r.merit.value), to_string(r.merit.rule), num(r.fidelity_residual),
                            num(r.randomness_residual), samples, g.seed);
    return res;
  }
  json j = base_record("bh", g, samples);
  j["f_bar"] = r.stats.fidelity;
  j["q_bar"] = r.stats.randomness;
  j["merit"] = r.merit.value;
  j["rule"] = std::string(to_string(r.merit.rule));
  j["fidelity_residual"] = r.fidelity_residual;
  j["randomness_residual"] = r.randomness_residual;
  j["monte_carlo"] = {{"f_bar", mc.mean.fidelity},
                      {"q_bar", mc.mean.randomness},
                      {"f_stderr", mc.fidelity_stderr},
                      {"q_stderr", mc.randomness_stderr}};
  j["cross_validation_passed"] = ok;
  res.body = j.dump(2) + "\n";
  return res;
}

struct SweepRow {
  double delta;
  double f_bar;
  double q_bar;
  double ratio;
  std::string marker;
};

SweepRow sweep_row(double theta, double delta, Panel panel, std::string marker) {
  const double f = sd_fbar(theta, delta, panel);
  const double q = sd_qbar(theta, delta, panel);
  return {delta, f, q, figure_of_merit(f, q).value, std::move(marker)};
}

std::string sweep_plot(const std::vector<SweepRow>& rows, double theta, Panel panel) {
  plot::Series f{"F (fidelity)", "#c0392b", plot::Stroke::Dashed, {}, {}};
  plot::Series q{"Q (randomness)", "#1f4e9c", plot::Stroke::Solid, {}, {}};
  plot::Series ratio{"Q/F", "#1e8449", plot::Stroke::DashDot, {}, {}};
  double top = 0;
  for (const auto& r : rows) {
    if (!r.marker.empty()) continue;
    f.x.push_back(r.delta), f.y.push_back(r.f_bar);
    q.x.push_back(r.delta), q.y.push_back(r.q_bar);
    ratio.x.push_back(r.delta), ratio.y.push_back(r.ratio);
    top = std::max({top, r.f_bar, r.q_bar, r.ratio});
  }
  plot::Axes main{"delta (rad)", "", 0.0, pi / 2, 0.0, 1.1,
                  {{0.0, "0"}, {pi / 8, "pi/8"}, {pi / 4, "pi/4"}, {3 * pi / 8, "3pi/8"}, {pi / 2, "pi/2"}}};
  plot::Axes inset = main;
  inset.x_label.clear();
  inset.y_max = std::ceil(top * 1.05 * 2) / 2;
  inset.x_ticks = {{0.0, "0"}, {pi / 4, "pi/4"}, {pi / 2, "pi/2"}};
  return plot::render_svg({f, q, ratio}, main, &inset,
                          fmt::format("state-dependent cloning, theta = {:.6g}, {} panel", theta, to_string(panel)));
}

Result cmd_clone_sd(const Globals& g, const CloneArgs& a) {
  const double theta = angle(g, a.theta);
  check_clone_theta(theta);
  const Panel panel = parse_panel(a.panel);
  Result res;

  if (!a.sweep) {
    if (!a.delta) throw Error("clone-sd: --delta is required unless --sweep is given");
    const auto geom = CloneGeometry::make(theta, angle(g, *a.delta), panel);
    const auto closed = sd_stats(geom);
    const auto direct = sd_stats_from_states(geom);
    const auto merit = figure_of_merit(closed.fidelity, closed.randomness);
    const double residual =
        std::max(std::abs(closed.fidelity - direct.fidelity), std::abs(closed.randomness - direct.randomness));
    res.code = residual <= kCrossCheck ? kSuccess : kCrossValidation;
    if (want_csv(g)) {
      res.body = "delta,f_bar,q_bar,ratio,marker\n";
      res.body += fmt::format("{},{},{},{},\n", num(geom.delta), num(closed.fidelity), num(closed.randomness),
                              num(merit.value));
      return res;
    }
    json j = base_record("clone-sd", g, 0);
    j["parameters"]["theta"] = theta;
    j["parameters"]["delta"] = geom.delta;
    j["parameters"]["panel"] = std::string(to_string(panel));
    j["parameters"]["sweep"] = false;
    j["phi"] = geom.phi;
    j["gamma"] = geom.gamma;
    j["f_bar"] = closed.fidelity;
    j["q_bar"] = closed.randomness;
    j["ratio"] = merit.value;
    j["rule"] = std::string(to_string(merit.rule));
    j["state_overlap_residual"] = residual;
    res.body = j.dump(2) + "\n";
    return res;
  }

  if (g.grid < 64) throw Error("clone-sd: --grid must be at least 64");
  const auto report = optimality_report(theta, panel, {g.grid, g.tol});
  std::vector<SweepRow> rows;
  for (int i = 0; i < g.grid; ++i) rows.push_back(sweep_row(theta, i * (pi / 2) / (g.grid - 1), panel, ""));
  std::vector<SweepRow> marks;
  for (const auto& p : sd_qbar_analytic_extrema(theta, panel, ExtremumKind::Min))
    marks.push_back(sweep_row(theta, p.delta, panel, "minQ"));
  for (const auto& p : sd_fbar_analytic_extrema(theta, panel, ExtremumKind::Max))
    marks.push_back(sweep_row(theta, p.delta, panel, "maxF"));
  for (const auto& e : report.argmin_ratio.points) marks.push_back(sweep_row(theta, e.location, panel, "minRatio"));
  rows.insert(rows.end(), marks.begin(), marks.end());
  std::stable_sort(rows.begin(), rows.end(), [](const auto& x, const auto& y) { return x.delta < y.delta; });

  res.code = report.cross_validation_passed ? kSuccess : kCrossValidation;
  if (want_csv(g)) {
    res.body = "delta,f_bar,q_bar,ratio,marker\n";
    for (const auto& r : rows)
      res.body += fmt::format("{},{},{},{},{}\n", num(r.delta), num(r.f_bar), num(r.q_bar), num(r.ratio), r.marker);
  } else {
    json j = base_record("clone-sd", g, 0);
    j["parameters"]["theta"] = theta;
    j["parameters"]["panel"] = std::string(to_string(panel));
    j["parameters"]["sweep"] = true;
    json arr = json::array();
    for (const auto& r : rows)
      arr.push_back({{"delta", r.delta}, {"f_bar", r.f_bar}, {"q_bar", r.q_bar}, {"ratio", r.ratio}, {"marker", r.marker}});
    j["rows"] = std::move(arr);
    j["cross_validation_passed"] = report.cross_validation_passed;
    res.body = j.dump(2) + "\n";
  }
  if (!a.plot.empty()) {
    std::ofstream f(a.plot, std::ios::binary);
    if (!f) throw Error("cannot write plot file " + a.plot);
    f << sweep_plot(rows, theta, panel);
  }
  return res;
}

Result cmd_teleport(const Globals& g, const TeleportArgs& a) {
  const double theta = angle(g, a.theta);
  const auto averages = teleport_averages(a.p, theta);  // validates p and theta
  const std::uint64_t samples = g.samples.value_or(kTeleportSamples);
  const auto mc = teleport_monte_carlo(a.p, theta, std::max<std::uint64_t>(samples, 1), g.seed);

  const auto resource = TeleportResource::noisy_non_max(a.p, theta);
  const auto channel = teleport_channel(resource);
  double output_residual = 0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    CounterStream rng(g.seed, i);
    const auto phi = haar_sample_qubit(rng);
    const auto rho = apply_channel(channel, phi);
    output_residual = std::max(output_residual,
                               (rho.matrix() - noisy_non_max_output(a.p, theta, phi)).cwiseAbs().maxCoeff());
  }
  bool ok = output_residual <= kCrossCheck;

  json j = base_record("teleport", g, samples);
  j["parameters"]["p"] = a.p;
  j["parameters"]["theta"] = theta;
  j["f_bar"] = averages.fidelity;
  j["q_bar"] = averages.randomness;
  auto z = [](double est, double exact, double se) { return se > 0 ? (est - exact) / se : 0.0; };
  j["monte_carlo"] = {{"f_bar", mc.mean.fidelity},
                      {"q_bar", mc.mean.randomness},
                      {"f_stderr", mc.fidelity_stderr},
                      {"q_stderr", mc.randomness_stderr},
                      {"f_z", z(mc.mean.fidelity, averages.fidelity, mc.fidelity_stderr)},
                      {"q_z", z(mc.mean.randomness, averages.randomness, mc.randomness_stderr)}};
  j["channel"] = {{"kraus_ops", channel.kraus_ops().size()},
                  {"trace_preservation_defect", channel.trace_preservation_defect()},
                  {"output_residual", output_residual}};

  std::optional<TeleportPointStats> point, simulated;
  if (a.mu) {
    const double mu = angle(g, *a.mu);
    const double nu = angle(g, a.nu.value_or(0.0));
    point = teleport_point_stats(a.p, theta, mu, nu);
    simulated = teleport_point_stats_simulated(a.p, theta, mu, nu);
    const double fr = std::abs(point->fidelity - simulated->fidelity);
    const double qr = std::abs(point->randomness - simulated->randomness);
    ok = ok && fr <= kCrossCheck && qr <= kCrossCheck;
    j["point"] = {{"mu", mu},
                  {"nu", nu},
                  {"fidelity", point->fidelity},
                  {"randomness", point->randomness},
                  {"simulated_fidelity", simulated->fidelity},
                  {"simulated_randomness", simulated->randomness},
                  {"fidelity_residual", fr},
                  {"randomness_residual", qr}};
  }
  j["cross_validation_passed"] = ok;

  Result res;
  res.code = ok ? kSuccess : kCrossValidation;
  if (want_csv(g)) {
    res.body = "p,theta,f_bar,q_bar,mc_f_bar,mc_q_bar,mc_f_stderr,mc_q_stderr,mu,nu,fidelity,randomness\n";
    res.body += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}\n", num(a.p), num(theta), num(averages.fidelity),
                            num(averages.randomness), num(mc.mean.fidelity), num(mc.mean.randomness),
                            num(mc.fidelity_stderr), num(mc.randomness_stderr), point ? num(point->mu) : "",
                            point ? num(point->nu) : "", point ? num(point->fidelity) : "",
                            point ? num(point->randomness) : "");
  } else {
    res.body = j.dump(2) + "\n";
  }
  return res;
}

Result cmd_report(const Globals& g, const ReportArgs& a) {
  const double theta = angle(g, a.theta);
  check_clone_theta(theta);
  const Panel panel = parse_panel(a.panel);
  if (g.grid < 64) throw Error("report: --grid must be at least 64");
  const auto r = optimality_report(theta, panel, {g.grid, g.tol});

  json j = base_record("report", g, 0);
  j["parameters"]["theta"] = theta;
  j["parameters"]["panel"] = std::string(to_string(panel));
  j["argmax_f"] = extremum_set_json(r.argmax_f);
  j["argmin_q"] = extremum_set_json(r.argmin_q);
  j["argmax_q"] = extremum_set_json(r.argmax_q);
  j["argmin_ratio"] = extremum_set_json(r.argmin_ratio);
  j["max_f"] = r.max_f;
  j["min_q"] = r.min_q;
  j["min_ratio"] = r.min_ratio;
  j["coincide_q_ratio"] = r.coincide_q_ratio;
  j["ratio_minima_within_q_minima"] = r.ratio_minima_within_q_minima;
  j["separation_f_vs_q"] = r.separation_f_vs_q;
  if (panel == Panel::Left) {
    const auto sp = sd_stationary_points(theta);
    json maxima = json::array(), rejected = json::array();
    for (const auto& m : sp.maxima)
      maxima.push_back({{"delta", m.delta}, {"label", m.label}, {"second_derivative", m.second_derivative}});
    for (const auto& b : sp.rejected) rejected.push_back({{"condition", b.condition}, {"reason", b.reason}});
    j["analytic"] = {{"phi", sp.phi}, {"gamma", sp.gamma}, {"delta0", sp.delta0}, {"maxima", maxima},
                     {"rejected", rejected}};
  } else {
    j["panel_convention"] = "right panel orders the outputs aa, beta, alpha, bb with gaps (delta, gamma, phi - delta - gamma)";
  }
  j["cross_validation_passed"] = r.cross_validation_passed;
  j["diagnostics"] = r.diagnostics;
  j["notes"] = r.notes;

  Result res;
  res.code = r.cross_validation_passed ? kSuccess : kCrossValidation;
  res.body = j.dump(2) + "\n";
  return res;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fidelity and quantum process randomness for cloning and teleportation", "qpr"};
  Globals g;
  app.add_option("--seed", g.seed, "Seed for Monte Carlo sampling")->capture_default_str();
  app.add_option("--samples", g.samples, "Monte Carlo sample count");
  app.add_option("--grid", g.grid, "Grid points for delta scans and sweeps")->capture_default_str();
  app.add_option("--tol", g.tol, "Extremum refinement tolerance")->capture_default_str();
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", g.out, "Write output to this file instead of stdout");
  app.add_flag("--degrees", g.degrees, "Angles on the command line are in degrees");
  app.require_subcommand(1);

  auto* bh = app.add_subcommand("bh", "Buzek-Hillery universal cloner");
  bh->fallthrough();

  CloneArgs clone;
  auto* sd = app.add_subcommand("clone-sd", "State-dependent cloner for the ensemble {|a>, |b>}");
  sd->add_option("--theta", clone.theta, "Ensemble angle, overlap <a|b> = sin 2theta")->required();
  sd->add_option("--delta", clone.delta, "Angle between |aa> and the first output");
  sd->add_option("--panel", clone.panel, "Output ordering")->check(CLI::IsMember({"left", "right"}))->capture_default_str();
  sd->add_flag("--sweep", clone.sweep, "Sweep delta over [0, pi/2]");
  sd->add_option("--plot", clone.plot, "Write an SVG plot of the sweep");
  sd->fallthrough();

  TeleportArgs tele;
  auto* tp = app.add_subcommand("teleport", "Teleportation through a noisy non-maximally entangled state");
  tp->add_option("--p", tele.p, "Noise parameter in [-1/3, 1]")->required();
  tp->add_option("--theta", tele.theta, "Resource angle in [0, pi/4]")->required();
  tp->add_option("--mu", tele.mu, "Input polar angle");
  tp->add_option("--nu", tele.nu, "Input azimuthal angle");
  tp->fallthrough();

  ReportArgs rep;
  auto* rp = app.add_subcommand("report", "Optimality report for the state-dependent cloner");
  rp->add_option("--theta", rep.theta, "Ensemble angle")->required();
  rp->add_option("--panel", rep.panel, "Output ordering")->check(CLI::IsMember({"left", "right"}))->capture_default_str();
  rp->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    Result r;
    if (*bh) r = cmd_bh(g);
    else if (*sd) r = cmd_clone_sd(g, clone);
    else if (*tp) r = cmd_teleport(g, tele);
    else r = cmd_report(g, rep);

    if (g.out.empty()) {
      out << r.body;
    } else {
      std::ofstream f(g.out, std::ios::binary);
      if (!f) throw Error("cannot write output file " + g.out);
      f << r.body;
    }
    if (r.code == kCrossValidation) err << "error: internal cross-validation failed\n";
    return r.code;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace qpr::cli
