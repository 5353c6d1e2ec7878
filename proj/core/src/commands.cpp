#include "hepasim/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "hepasim/csv.hpp"
#include "hepasim/elliptic.hpp"
#include "hepasim/errors.hpp"
#include "hepasim/functionals.hpp"
#include "hepasim/integrator.hpp"
#include "hepasim/svg.hpp"
#include "hepasim/verify.hpp"

namespace fs = std::filesystem;

namespace hepasim {
namespace {

// Verification keeps at most this many evenly spaced pointwise snapshots.
constexpr std::size_t kVerifySnapshots = 100;

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  os << text;
}

std::string time_tag(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", t);
  return buf;
}

SimState initial_state(const ScenarioConfig& cfg, const Grid& grid) {
  SimState s = constant_state(grid, cfg.init.u0, cfg.init.v0);
  if (!cfg.init.u_file.empty()) s.u = read_field_csv(cfg.init.u_file, grid);
  if (!cfg.init.v_file.empty()) s.v = read_field_csv(cfg.init.v_file, grid);
  return s;
}

Tolerances tolerances_for(const ScenarioConfig& cfg) {
  Tolerances tol;
  tol.envelope_constant = cfg.envelope_constant;
  return tol;
}

struct RunOutcome {
  Trajectory traj;
  BoundsReport report;
  std::optional<ThetaEstimate> theta;
  std::vector<std::pair<double, SimState>> written;  // configured snapshot times
};

/// Runs a scenario and evaluates every enabled check on it.
RunOutcome run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  const Grid grid = cfg.grid();
  const PortalField portal = build_chi(grid, cfg.portal);
  const SimState init = initial_state(cfg, grid);

  const double span = std::max(0.0, cfg.control.t_final - init.t);
  const auto n_steps = static_cast<std::size_t>(std::ceil(span / cfg.control.dt - 1e-9));
  const std::size_t n_samples = n_steps / cfg.control.snapshot_every + 2;
  const std::size_t stride = std::max<std::size_t>(1, n_samples / kVerifySnapshots);

  std::vector<double> pending = cfg.snapshot_times;
  std::sort(pending.begin(), pending.end());
  std::size_t next_pending = 0;

  RunOutcome out;
  std::vector<SimState> verify_snaps;
  ThetaTracker theta(2.0);
  std::size_t sample = 0;
  auto sink = [&](const DiagnosticsRecord& rec, const SimState& s) {
    if (sample++ % stride == 0) verify_snaps.push_back(s);
    theta.observe(s);
    while (next_pending < pending.size() && rec.t >= pending[next_pending] - 1e-9) {
      out.written.emplace_back(pending[next_pending], s);
      ++next_pending;
    }
  };
  out.traj = run(init, cfg.params, portal, cfg.control, sink);
  out.report = check_trajectory(out.traj, verify_snaps, portal.chi, tolerances_for(cfg), cfg.checks);
  out.report.course = classify_course(out.traj, cfg.thresholds);
  try {
    out.theta = theta.result();
  } catch (const NoValidSamples&) {
  }
  return out;
}

void write_outputs(const ScenarioConfig& cfg, const RunOutcome& outcome) {
  const fs::path dir(cfg.output_dir);
  fs::create_directories(dir);
  write_trajectory_csv((dir / "trajectory.csv").string(), outcome.traj);
  write_text(dir / "config.cfg", to_config_text(cfg));
  write_text(dir / "report.txt", outcome.report.to_text());
  write_text(dir / "report.csv", outcome.report.to_csv());
  for (const auto& [t, state] : outcome.written) {
    write_field_csv((dir / ("u_t" + time_tag(t) + ".csv")).string(), state.u);
    write_field_csv((dir / ("v_t" + time_tag(t) + ".csv")).string(), state.v);
  }
}

ScenarioConfig resolve_plot_config(const std::string& trajectory_path,
                                   const std::optional<ScenarioConfig>& cfg) {
  if (cfg) return *cfg;
  const fs::path side = fs::path(trajectory_path).parent_path() / "config.cfg";
  if (!fs::exists(side)) {
    throw InvalidArgument("no model parameters: pass --preset/--config or keep config.cfg next to " +
                          trajectory_path);
  }
  return load_config(side.string());
}

Trajectory load_trajectory(const std::string& path, const ScenarioConfig& cfg) {
  Trajectory traj;
  traj.records = read_trajectory_csv(path);
  traj.params = cfg.params;
  traj.grid = GridMeta{cfg.nx, cfg.ny, cfg.lx, cfg.ly};
  return traj;
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

}  // namespace

int cmd_simulate(const ScenarioConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunOutcome outcome = run_scenario(cfg);
    write_outputs(cfg, outcome);
    const auto& last = outcome.traj.records.back();
    out << "scenario " << cfg.name << ": t = " << csv::format_double(last.t)
        << ", U = " << csv::format_double(last.U) << ", V = " << csv::format_double(last.V) << '\n';
    if (outcome.theta) {
      out << "theta(rho=2) = " << csv::format_double(outcome.theta->theta) << " after t = "
          << csv::format_double(outcome.theta->onset_time)
          << (outcome.theta->settled ? "" : " (not settled)") << '\n';
    }
    out << outcome.report.to_text();
    out << "outputs written to " << cfg.output_dir << '\n';
    return outcome.report.all_passed() ? kExitOk : kExitViolation;
  });
}

int cmd_bounds(const ScenarioConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    cfg.validate();
    const Grid grid = cfg.grid();
    const PortalField portal = build_chi(grid, cfg.portal);
    SolverOptions opts;
    opts.tol = cfg.elliptic_tol;

    const EllipticSolution aux = solve_aux(grid, portal.chi, cfg.params, opts);
    const EllipticSolution vstar = solve_vstar(grid, portal.chi, cfg.params, opts);
    const double omega = grid.area();
    const SigmaRegion sigma = sigma_region(cfg.params, omega);
    const double vstar_max = vstar.field.max();

    std::vector<std::tuple<std::string, double, std::string>> rows = {
        {"omega_area", omega, "|Omega| = lx * ly"},
        {"portal_cells", static_cast<double>(portal.cell_count), "cells with center inside the portal disc"},
        {"chi_max", portal.chi_max(), "max of the normalized inflow profile"},
        {"v_up", sigma.v_up, "(1/gamma)(eta + 1 + gamma delta / eta) |Omega|"},
        {"sigma_slope", sigma.slope, "upper edge V = v_up - (eta/gamma) U"},
        {"sigma_v_at_u_max", sigma.upper_v(omega), "upper edge at U = |Omega|"},
        {"phi_cap", cfg.params.gamma * sigma.v_up, "eta U + gamma V stays below this"},
        {"M", envelope_constant(cfg.params, portal.chi_max(), omega, EnvelopeConstant::WithChiMax),
         "delta chi_max |Omega| V_up"},
        {"M_without_chi_max",
         envelope_constant(cfg.params, portal.chi_max(), omega, EnvelopeConstant::WithoutChiMax),
         "delta |Omega| V_up"},
        {"v_thr", v_threshold(aux, portal.mask), "min of v_aux over the portal"},
        {"v_aux_max", aux.field.max(), ""},
        {"v_aux_mass_times_eta", cfg.params.eta * quadrature(aux.field), "should equal 1"},
        {"v_aux_residual", aux.residual_norm, ""},
        {"v_aux_iterations", static_cast<double>(aux.iterations), ""},
        {"vstar_max", vstar_max, "max of the zero-mean v*"},
        {"vstar_min", vstar.field.min(), ""},
        {"vstar_mean", quadrature(vstar.field) / omega, "zero by normalization"},
        {"vstar_residual", vstar.residual_norm, ""},
        {"vstar_iterations", static_cast<double>(vstar.iterations), ""},
        {"linf_partial_bound", cfg.params.delta * omega * vstar_max,
         "delta |Omega| max v*; the remaining part of the pointwise bound is not computable"},
    };

    const fs::path dir(cfg.output_dir);
    fs::create_directories(dir);
    std::ostringstream csvout;
    csvout << "quantity,value,note\n";
    for (const auto& [name, value, note] : rows) {
      csvout << name << ',' << csv::format_double(value) << ',' << note << '\n';
      out << name << " = " << csv::format_double(value) << '\n';
    }
    write_text(dir / "bounds.csv", csvout.str());
    out << "bounds written to " << (dir / "bounds.csv").string() << '\n';
    return kExitOk;
  });
}

PlotKind parse_plot_kind(const std::string& name) {
  if (name == "timeseries") return PlotKind::Timeseries;
  if (name == "phase") return PlotKind::Phase;
  if (name == "envelope") return PlotKind::Envelope;
  throw InvalidArgument("unknown plot kind '" + name + "' (timeseries, phase, envelope)");
}

int cmd_plot(const std::string& trajectory_path, PlotKind kind,
             const std::optional<ScenarioConfig>& cfg, const std::string& svg_path,
             std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ScenarioConfig scenario = resolve_plot_config(trajectory_path, cfg);
    const Trajectory traj = load_trajectory(trajectory_path, scenario);
    std::vector<double> t, U, V, psi;
    for (const auto& r : traj.records) {
      t.push_back(r.t);
      U.push_back(r.U);
      V.push_back(r.V);
      psi.push_back(r.psi);
    }

    std::string svg_text;
    switch (kind) {
      case PlotKind::Timeseries: {
        svg::LineChart chart("Total virus U and T cells V", "t", "amount");
        chart.add_line("U", "U(t)", "#c0392b", t, U);
        chart.add_line("V", "V(t)", "#2471a3", t, V);
        svg_text = chart.render();
        break;
      }
      case PlotKind::Phase: {
        const SigmaRegion s = sigma_region(traj.params, traj.grid.area());
        svg::LineChart chart("Phase space (U, V) and trapezoid", "U", "V");
        chart.add_polygon("sigma", "trapezoid", "#7d7d7d", {0.0, s.omega_area, s.omega_area, 0.0},
                          {0.0, 0.0, s.upper_v(s.omega_area), s.v_up});
        chart.add_line("trajectory", "(U(t), V(t))", "#2471a3", U, V);
        svg_text = chart.render();
        break;
      }
      case PlotKind::Envelope: {
        const PortalField portal = build_chi(scenario.grid(), scenario.portal);
        const auto env = envelope_E(traj, portal.chi_max(), scenario.envelope_constant);
        std::vector<double> E;
        for (const auto& p : env) E.push_back(p.E);
        svg::LineChart chart("Psi(t) and envelope E(t)", "t", "value");
        chart.add_line("envelope", "E(t)", "#c0392b", t, E);
        chart.add_line("psi", "Psi(t)", "#2471a3", t, psi);
        svg_text = chart.render();
        break;
      }
    }
    const fs::path target(svg_path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    write_text(target, svg_text);
    out << "plot written to " << target.string() << '\n';
    return kExitOk;
  });
}

int cmd_verify(const std::string& trajectory_path, const std::optional<ScenarioConfig>& cfg,
               std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ScenarioConfig scenario = resolve_plot_config(trajectory_path, cfg);
    const Trajectory traj = load_trajectory(trajectory_path, scenario);
    const PortalField portal = build_chi(scenario.grid(), scenario.portal);
    BoundsReport report = check_trajectory(traj, {}, portal.chi, tolerances_for(scenario), scenario.checks);
    report.course = classify_course(traj, scenario.thresholds);
    out << report.to_text();
    return report.all_passed() ? kExitOk : kExitViolation;
  });
}

SweepAxis parse_sweep_axis(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos) throw ParseError("sweep axis must look like key=v1,v2,...");
  SweepAxis axis;
  axis.key = std::string(csv::trim(std::string_view(spec).substr(0, eq)));
  if (axis.key.empty()) throw ParseError("sweep axis has an empty key");
  const auto rest = std::string_view(spec).substr(eq + 1);
  if (!csv::trim(rest).empty()) {
    for (const auto& v : csv::split(rest)) {
      const auto item = csv::trim(v);
      if (item.empty()) throw ParseError("sweep axis " + axis.key + " has an empty value");
      axis.values.emplace_back(item);
    }
  }
  // Reject unknown keys and unparsable values before anything runs.
  ScenarioConfig probe;
  for (const auto& v : axis.values) set_config_value(probe, axis.key, v);
  return axis;
}

std::vector<ScenarioConfig> expand_sweep(const ScenarioConfig& tmpl,
                                         const std::vector<SweepAxis>& axes) {
  std::vector<ScenarioConfig> out{tmpl};
  for (const auto& axis : axes) {
    if (axis.values.empty()) continue;
    std::vector<ScenarioConfig> next;
    for (const auto& base : out) {
      for (const auto& v : axis.values) {
        ScenarioConfig c = base;
        set_config_value(c, axis.key, v);
        next.push_back(std::move(c));
      }
    }
    out = std::move(next);
  }
  return out;
}

int cmd_sweep(const ScenarioConfig& tmpl, const std::vector<SweepAxis>& axes, std::ostream& out,
              std::ostream& err, std::size_t threads) {
  return guarded(err, [&] {
    std::vector<ScenarioConfig> runs = expand_sweep(tmpl, axes);
    const fs::path root(tmpl.output_dir);
    fs::create_directories(root);
    for (std::size_t i = 0; i < runs.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof name, "run_%03zu", i);
      runs[i].output_dir = (root / name).string();
    }

    if (threads == 0) {
      if (const char* env = std::getenv("HEPASIM_THREADS")) threads = std::strtoul(env, nullptr, 10);
      if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = std::min(threads, runs.size());

    const auto check_names = checks::all();
    std::vector<std::string> rows(runs.size());
    std::atomic<std::size_t> next{0};
    std::mutex log_mutex;

    auto worker = [&] {
      for (std::size_t i = next++; i < runs.size(); i = next++) {
        const ScenarioConfig& cfg = runs[i];
        std::ostringstream row;
        row << i;
        for (const auto& axis : axes) {
          if (!axis.values.empty()) row << ',' << get_config_value(cfg, axis.key);
        }
        try {
          const RunOutcome outcome = run_scenario(cfg);
          write_outputs(cfg, outcome);
          const auto& last = outcome.traj.records.back();
          row << ',' << (outcome.report.all_passed() ? "ok" : "violation") << ','
              << to_string(*outcome.report.course) << ',' << csv::format_double(last.U) << ','
              << csv::format_double(last.V);
          for (const auto& name : check_names) {
            const CheckEntry* e = outcome.report.find(name);
            row << ',' << (e && e->status != CheckStatus::Skipped ? csv::format_double(e->worst_margin) : "");
          }
          row << ',';
        } catch (const std::exception& e) {
          row << ",error,,,";
          for (std::size_t k = 0; k < check_names.size(); ++k) row << ',';
          std::string msg = e.what();
          std::replace(msg.begin(), msg.end(), ',', ';');
          row << ',' << msg;
        }
        rows[i] = row.str();
        std::lock_guard lock(log_mutex);
        out << "run " << i << " done\n";
      }
    };

    std::vector<std::thread> pool;
    for (std::size_t k = 1; k < threads; ++k) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    std::ostringstream table;
    table << "run";
    for (const auto& axis : axes) {
      if (!axis.values.empty()) table << ',' << axis.key;
    }
    table << ",status,course,final_U,final_V";
    for (const auto& name : check_names) table << ",margin_" << name;
    table << ",error\n";
    for (const auto& r : rows) table << r << '\n';
    write_text(root / "sweep.csv", table.str());
    out << runs.size() << " runs summarized in " << (root / "sweep.csv").string() << '\n';
    return kExitOk;
  });
}

}  // namespace hepasim
