#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "hepasim/elliptic.hpp"
#include "hepasim/grid.hpp"
#include "hepasim/integrator.hpp"
#include "hepasim/model.hpp"
#include "hepasim/verify.hpp"

namespace hepasim {

struct InitialCondition {
  double u0 = 1.0;
  double v0 = 0.0;
  std::string u_file;  // field CSV; overrides u0 when set
  std::string v_file;

  friend bool operator==(const InitialCondition&, const InitialCondition&) = default;
};

/// A fully resolved scenario. Serialized as flat `key = value` lines with
/// dotted section prefixes; see config_keys() for the schema.
struct ScenarioConfig {
  std::string name = "custom";
  std::size_t nx = 64;
  std::size_t ny = 64;
  double lx = 1.0;
  double ly = 1.0;
  PortalSpec portal;
  ModelParams params;
  StepControl control;
  InitialCondition init;
  std::string output_dir = "out";
  std::vector<double> snapshot_times;
  std::vector<std::string> checks;  // empty enables all
  CourseThresholds thresholds;
  double elliptic_tol = 1e-10;
  EnvelopeConstant envelope_constant = EnvelopeConstant::WithChiMax;

  Grid grid() const { return Grid(nx, ny, lx, ly); }

  /// Parameter invariants plus existence of referenced files.
  void validate() const;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Throws UnknownPreset for names other than "healing" and "chronic".
ScenarioConfig preset(std::string_view name);

/// Applies one `key = value` assignment. Throws ParseError on unknown keys or bad values.
void set_config_value(ScenarioConfig& cfg, std::string_view key, std::string_view value);

/// Serialized value of one key. Throws ParseError on unknown keys.
std::string get_config_value(const ScenarioConfig& cfg, std::string_view key);

/// Parses config text on top of `base`. Blank lines and `#` comments are ignored.
ScenarioConfig parse_config(std::string_view text, ScenarioConfig base = {});
ScenarioConfig load_config(const std::string& path, ScenarioConfig base = {});

std::string to_config_text(const ScenarioConfig& cfg);

/// Every accepted key, in serialization order.
std::vector<std::string> config_keys();

}  // namespace hepasim
