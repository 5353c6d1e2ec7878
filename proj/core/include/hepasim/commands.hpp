#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hepasim/config.hpp"

namespace hepasim {

/// Exit codes shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitViolation = 2;

/// Runs the scenario and writes into cfg.output_dir:
///   trajectory.csv, report.txt, report.csv, config.cfg, and
///   u_t<time>.csv / v_t<time>.csv for each configured snapshot time.
int cmd_simulate(const ScenarioConfig& cfg, std::ostream& out, std::ostream& err);

/// Stationary computations only; writes bounds.csv (`quantity,value,note`).
int cmd_bounds(const ScenarioConfig& cfg, std::ostream& out, std::ostream& err);

enum class PlotKind { Timeseries, Phase, Envelope };

/// Throws InvalidArgument for names other than timeseries, phase, envelope.
PlotKind parse_plot_kind(const std::string& name);

/// Renders an SVG from a trajectory CSV. Model parameters come from `cfg`
/// or, if absent, from config.cfg next to the trajectory file.
int cmd_plot(const std::string& trajectory_path, PlotKind kind,
             const std::optional<ScenarioConfig>& cfg, const std::string& svg_path,
             std::ostream& out, std::ostream& err);

/// Re-runs the trajectory-level checks on an existing trajectory CSV.
int cmd_verify(const std::string& trajectory_path, const std::optional<ScenarioConfig>& cfg,
               std::ostream& out, std::ostream& err);

struct SweepAxis {
  std::string key;              // any config key, e.g. model.delta
  std::vector<std::string> values;
};

/// Parses `key=v1,v2,...`. Throws ParseError.
SweepAxis parse_sweep_axis(const std::string& spec);

/// Cartesian product of the axis values applied to the template.
std::vector<ScenarioConfig> expand_sweep(const ScenarioConfig& tmpl,
                                         const std::vector<SweepAxis>& axes);

/// Runs every combination on up to `threads` workers (0 reads HEPASIM_THREADS,
/// falling back to the hardware concurrency) and writes sweep.csv.
int cmd_sweep(const ScenarioConfig& tmpl, const std::vector<SweepAxis>& axes,
              std::ostream& out, std::ostream& err, std::size_t threads = 0);

}  // namespace hepasim
