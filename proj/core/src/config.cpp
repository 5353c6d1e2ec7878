#include "hepasim/config.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "hepasim/csv.hpp"
#include "hepasim/errors.hpp"

namespace hepasim {
namespace {

std::size_t parse_size(std::string_view text, std::string_view key) {
  const std::string_view s = csv::trim(text);
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError("invalid integer for " + std::string(key) + ": '" + std::string(text) + "'");
  }
  return value;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ',';
    out += items[i];
  }
  return out;
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  if (csv::trim(text).empty()) return out;
  for (const auto& item : csv::split(text)) out.emplace_back(csv::trim(item));
  return out;
}

struct Field {
  std::string key;
  std::function<void(ScenarioConfig&, std::string_view)> set;
  std::function<std::string(const ScenarioConfig&)> get;
};

Field real(std::string key, double ScenarioConfig::*member) {
  return {key,
          [key, member](ScenarioConfig& c, std::string_view v) { c.*member = csv::parse_double(v, key); },
          [member](const ScenarioConfig& c) { return csv::format_double(c.*member); }};
}

template <typename Get>
Field real_at(std::string key, Get access) {
  return {key,
          [key, access](ScenarioConfig& c, std::string_view v) { access(c) = csv::parse_double(v, key); },
          [access](const ScenarioConfig& c) {
            return csv::format_double(access(c));
          }};
}

template <typename Get>
Field count_at(std::string key, Get access) {
  return {key,
          [key, access](ScenarioConfig& c, std::string_view v) { access(c) = parse_size(v, key); },
          [access](const ScenarioConfig& c) {
            return std::to_string(access(c));
          }};
}

template <typename Get>
Field text_at(std::string key, Get access) {
  return {key,
          [access](ScenarioConfig& c, std::string_view v) { access(c) = std::string(csv::trim(v)); },
          [access](const ScenarioConfig& c) { return access(c); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back(text_at("name", [](auto& c) -> auto& { return c.name; }));
    f.push_back(count_at("grid.nx", [](auto& c) -> auto& { return c.nx; }));
    f.push_back(count_at("grid.ny", [](auto& c) -> auto& { return c.ny; }));
    f.push_back(real("grid.lx", &ScenarioConfig::lx));
    f.push_back(real("grid.ly", &ScenarioConfig::ly));
    f.push_back(real_at("portal.x", [](auto& c) -> auto& { return c.portal.center_x; }));
    f.push_back(real_at("portal.y", [](auto& c) -> auto& { return c.portal.center_y; }));
    f.push_back(real_at("portal.radius", [](auto& c) -> auto& { return c.portal.radius; }));
    f.push_back(real_at("model.alpha", [](auto& c) -> auto& { return c.params.alpha; }));
    f.push_back(real_at("model.beta", [](auto& c) -> auto& { return c.params.beta; }));
    f.push_back(real_at("model.gamma", [](auto& c) -> auto& { return c.params.gamma; }));
    f.push_back(real_at("model.delta", [](auto& c) -> auto& { return c.params.delta; }));
    f.push_back(real_at("model.eta", [](auto& c) -> auto& { return c.params.eta; }));
    f.push_back(real_at("model.u_min", [](auto& c) -> auto& { return c.params.u_min; }));
    f.push_back(real_at("model.kappa", [](auto& c) -> auto& { return c.params.kappa; }));
    f.push_back(real_at("run.dt", [](auto& c) -> auto& { return c.control.dt; }));
    f.push_back(real_at("run.t_final", [](auto& c) -> auto& { return c.control.t_final; }));
    f.push_back(count_at("run.snapshot_every",
                         [](auto& c) -> auto& { return c.control.snapshot_every; }));
    f.push_back(real_at("run.implicit_tol",
                        [](auto& c) -> auto& { return c.control.implicit_tol; }));
    f.push_back(count_at("run.implicit_max_iters",
                         [](auto& c) -> auto& { return c.control.implicit_max_iters; }));
    f.push_back(real_at("init.u0", [](auto& c) -> auto& { return c.init.u0; }));
    f.push_back(real_at("init.v0", [](auto& c) -> auto& { return c.init.v0; }));
    f.push_back(text_at("init.u_file", [](auto& c) -> auto& { return c.init.u_file; }));
    f.push_back(text_at("init.v_file", [](auto& c) -> auto& { return c.init.v_file; }));
    f.push_back(text_at("output.dir", [](auto& c) -> auto& { return c.output_dir; }));
    f.push_back({"output.snapshot_times",
                 [](ScenarioConfig& c, std::string_view v) {
                   c.snapshot_times.clear();
                   for (const auto& item : split_list(v)) {
                     c.snapshot_times.push_back(csv::parse_double(item, "output.snapshot_times"));
                   }
                 },
                 [](const ScenarioConfig& c) {
                   std::vector<std::string> items;
                   for (double t : c.snapshot_times) items.push_back(csv::format_double(t));
                   return join(items);
                 }});
    f.push_back({"checks.enabled",
                 [](ScenarioConfig& c, std::string_view v) { c.checks = split_list(v); },
                 [](const ScenarioConfig& c) { return join(c.checks); }});
    f.push_back(real_at("classify.eps_heal",
                        [](auto& c) -> auto& { return c.thresholds.eps_heal; }));
    f.push_back(real_at("classify.window_fraction",
                        [](auto& c) -> auto& { return c.thresholds.window_fraction; }));
    f.push_back(real_at("classify.stationarity_tol",
                        [](auto& c) -> auto& { return c.thresholds.stationarity_tol; }));
    f.push_back(real("elliptic.tol", &ScenarioConfig::elliptic_tol));
    f.push_back({"envelope.constant",
                 [](ScenarioConfig& c, std::string_view v) {
                   const auto s = csv::trim(v);
                   if (s == "with_chi_max") {
                     c.envelope_constant = EnvelopeConstant::WithChiMax;
                   } else if (s == "without_chi_max") {
                     c.envelope_constant = EnvelopeConstant::WithoutChiMax;
                   } else {
                     throw ParseError("envelope.constant must be with_chi_max or without_chi_max");
                   }
                 },
                 [](const ScenarioConfig& c) {
                   return std::string(c.envelope_constant == EnvelopeConstant::WithChiMax
                                          ? "with_chi_max"
                                          : "without_chi_max");
                 }});
    return f;
  }();
  return table;
}

}  // namespace

void ScenarioConfig::validate() const {
  (void)grid();
  params.validate();
  if (!(portal.radius > 0.0)) throw InvalidArgument("portal.radius must be positive");
  if (!(control.dt > 0.0)) throw InvalidArgument("run.dt must be positive");
  if (!(control.t_final >= 0.0)) throw InvalidArgument("run.t_final must be non-negative");
  if (control.snapshot_every == 0) throw InvalidArgument("run.snapshot_every must be at least 1");
  if (!(control.implicit_tol > 0.0)) throw InvalidArgument("run.implicit_tol must be positive");
  if (!(init.u0 >= 0.0) || !(init.v0 >= 0.0)) {
    throw InvalidArgument("initial values must be non-negative");
  }
  if (!(elliptic_tol > 0.0)) throw InvalidArgument("elliptic.tol must be positive");
  if (!(thresholds.eps_heal > 0.0) || !(thresholds.window_fraction > 0.0) ||
      !(thresholds.window_fraction <= 1.0) || !(thresholds.stationarity_tol > 0.0)) {
    throw InvalidArgument("classification thresholds out of range");
  }
  for (const auto* file : {&init.u_file, &init.v_file}) {
    if (!file->empty() && !std::filesystem::exists(*file)) {
      throw InvalidArgument("initial-condition file not found: " + *file);
    }
  }
  const auto known = checks::all();
  for (const auto& c : checks) {
    if (std::find(known.begin(), known.end(), c) == known.end()) {
      throw InvalidArgument("unknown check '" + c + "'");
    }
  }
}

ScenarioConfig preset(std::string_view name) {
  ScenarioConfig cfg;
  cfg.name = std::string(name);
  if (name == "healing") {
    cfg.control.t_final = 10.0;
  } else if (name == "chronic") {
    cfg.params.delta = 0.7;
    cfg.params.eta = 0.9;
    cfg.control.t_final = 30.0;
  } else {
    throw UnknownPreset("unknown preset '" + std::string(name) + "' (expected healing or chronic)");
  }
  return cfg;
}

void set_config_value(ScenarioConfig& cfg, std::string_view key, std::string_view value) {
  for (const auto& f : fields()) {
    if (f.key == key) {
      f.set(cfg, value);
      return;
    }
  }
  throw ParseError("unknown config key '" + std::string(key) + "'");
}

std::string get_config_value(const ScenarioConfig& cfg, std::string_view key) {
  for (const auto& f : fields()) {
    if (f.key == key) return f.get(cfg);
  }
  throw ParseError("unknown config key '" + std::string(key) + "'");
}

ScenarioConfig parse_config(std::string_view text, ScenarioConfig base) {
  std::size_t line_no = 0;
  std::istringstream is{std::string(text)};
  std::string line;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string_view s = csv::trim(line);
    if (s.empty() || s.front() == '#') continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    set_config_value(base, csv::trim(s.substr(0, eq)), s.substr(eq + 1));
  }
  return base;
}

ScenarioConfig load_config(const std::string& path, ScenarioConfig base) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ParseError("cannot open config file " + path);
  std::stringstream buf;
  buf << is.rdbuf();
  return parse_config(buf.str(), std::move(base));
}

std::string to_config_text(const ScenarioConfig& cfg) {
  std::string out;
  for (const auto& f : fields()) out += f.key + " = " + f.get(cfg) + "\n";
  return out;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& f : fields()) keys.push_back(f.key);
  return keys;
}

}  // namespace hepasim
