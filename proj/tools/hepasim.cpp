#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hepasim/commands.hpp"
#include "hepasim/config.hpp"
#include "hepasim/errors.hpp"

namespace {

struct CommonOptions {
  std::string preset;
  std::string config;
  std::string out;
  std::size_t nx = 0;
  std::size_t ny = 0;
  double dt = 0.0;
  double t_final = -1.0;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--preset", o.preset, "Scenario preset (healing | chronic)");
  cmd->add_option("--config", o.config, "Config file with key = value lines");
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_option("--nx", o.nx, "Cells along x");
  cmd->add_option("--ny", o.ny, "Cells along y");
  cmd->add_option("--dt", o.dt, "Time step");
  cmd->add_option("--t-final", o.t_final, "End time");
}

bool has_scenario(const CommonOptions& o) { return !o.preset.empty() || !o.config.empty(); }

// Preset first, then the config file on top, then command-line overrides.
hepasim::ScenarioConfig resolve(const CommonOptions& o) {
  hepasim::ScenarioConfig cfg = hepasim::preset(o.preset.empty() ? "healing" : o.preset);
  if (!o.config.empty()) cfg = hepasim::load_config(o.config, cfg);
  if (!o.out.empty()) cfg.output_dir = o.out;
  if (o.nx) cfg.nx = o.nx;
  if (o.ny) cfg.ny = o.ny;
  if (o.dt > 0.0) cfg.control.dt = o.dt;
  if (o.t_final >= 0.0) cfg.control.t_final = o.t_final;
  return cfg;
}

std::optional<hepasim::ScenarioConfig> resolve_optional(const CommonOptions& o) {
  if (!has_scenario(o)) return std::nullopt;
  return resolve(o);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hepasim: virus / T-cell reaction-diffusion simulator and bound checker"};
  app.require_subcommand(1);

  CommonOptions simulate_opts, bounds_opts, plot_opts, sweep_opts, verify_opts;

  auto* simulate = app.add_subcommand("simulate", "Run a scenario and check every bound");
  add_common(simulate, simulate_opts);

  auto* bounds = app.add_subcommand("bounds", "Solve the stationary problems and report the bounds");
  add_common(bounds, bounds_opts);

  auto* plot = app.add_subcommand("plot", "Render an SVG from a trajectory CSV");
  add_common(plot, plot_opts);
  std::string plot_input, plot_kind = "timeseries", plot_svg;
  plot->add_option("--input", plot_input, "Trajectory CSV")->required();
  plot->add_option("--kind", plot_kind, "timeseries | phase | envelope");
  plot->add_option("--svg", plot_svg, "Output SVG path (default <out>/<kind>.svg)");

  auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep over a template scenario");
  add_common(sweep, sweep_opts);
  std::vector<std::string> axis_specs;
  std::size_t threads = 0;
  sweep->add_option("--axis", axis_specs, "Axis as key=v1,v2,... (repeatable)");
  sweep->add_option("--threads", threads, "Worker count (default: HEPASIM_THREADS or all cores)");

  auto* verify = app.add_subcommand("verify", "Re-check the bounds on an existing trajectory CSV");
  add_common(verify, verify_opts);
  std::string verify_input;
  verify->add_option("--input", verify_input, "Trajectory CSV")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) return hepasim::cmd_simulate(resolve(simulate_opts), std::cout, std::cerr);
    if (*bounds) return hepasim::cmd_bounds(resolve(bounds_opts), std::cout, std::cerr);
    if (*plot) {
      const auto kind = hepasim::parse_plot_kind(plot_kind);
      const auto cfg = resolve_optional(plot_opts);
      std::string target = plot_svg;
      if (target.empty()) {
        const std::string dir = plot_opts.out.empty() ? "." : plot_opts.out;
        target = dir + "/" + plot_kind + ".svg";
      }
      return hepasim::cmd_plot(plot_input, kind, cfg, target, std::cout, std::cerr);
    }
    if (*sweep) {
      std::vector<hepasim::SweepAxis> axes;
      for (const auto& spec : axis_specs) axes.push_back(hepasim::parse_sweep_axis(spec));
      return hepasim::cmd_sweep(resolve(sweep_opts), axes, std::cout, std::cerr, threads);
    }
    if (*verify) return hepasim::cmd_verify(verify_input, resolve_optional(verify_opts), std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return hepasim::kExitError;
  }
  return hepasim::kExitError;
}
