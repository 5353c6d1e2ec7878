#include "hepasim/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hepasim/csv.hpp"
#include "hepasim/errors.hpp"

namespace hepasim {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Tracks the smallest margin seen and when it happened.
struct WorstMargin {
  double margin = kInf;
  double time = 0.0;

  void update(double m, double t) {
    if (m < margin) {
      margin = m;
      time = t;
    }
  }
};

CheckEntry make_entry(const char* name, const char* statement) {
  CheckEntry e;
  e.name = name;
  e.statement = statement;
  return e;
}

void finish(CheckEntry& e, const WorstMargin& w, bool ok) {
  e.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
  e.worst_margin = std::isfinite(w.margin) ? w.margin : 0.0;
  e.worst_time = w.time;
}

void skip(CheckEntry& e, std::string why) {
  e.status = CheckStatus::Skipped;
  e.detail = std::move(why);
}

void check_snapshot_times(const Trajectory& traj, std::span<const SimState> snapshots) {
  for (const auto& s : snapshots) {
    if (s.u.grid().nx() != traj.grid.nx || s.u.grid().ny() != traj.grid.ny) {
      throw InconsistentInputs("snapshot grid does not match the trajectory grid");
    }
    const double tol = 1e-12 * std::max(1.0, std::abs(s.t));
    const bool found = std::any_of(traj.records.begin(), traj.records.end(),
                                   [&](const DiagnosticsRecord& r) { return std::abs(r.t - s.t) <= tol; });
    if (!found) {
      throw InconsistentInputs("snapshot at t = " + csv::format_double(s.t) +
                               " matches no trajectory sample");
    }
  }
}

}  // namespace

const char* to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Skipped: return "skipped";
  }
  return "?";
}

const char* to_string(Course course) {
  switch (course) {
    case Course::Healing: return "healing";
    case Course::Chronic: return "chronic";
    case Course::Undecided: return "undecided";
  }
  return "?";
}

std::vector<std::string> checks::all() {
  return {kNonNegativity, kUpperBoundU, kTotalVirus, kSigma, kEnvelope, kDifferential};
}

bool BoundsReport::all_passed() const {
  return std::none_of(entries.begin(), entries.end(),
                      [](const CheckEntry& e) { return e.status == CheckStatus::Fail; });
}

const CheckEntry* BoundsReport::find(const std::string& name) const {
  for (const auto& e : entries) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

std::string BoundsReport::to_text() const {
  std::ostringstream os;
  for (const auto& e : entries) {
    os << e.name << ' ' << to_string(e.status) << ' ' << csv::format_double(e.worst_margin);
    if (!e.detail.empty()) os << " # " << e.detail;
    os << '\n';
  }
  if (course) os << "course " << to_string(*course) << '\n';
  return os.str();
}

std::string BoundsReport::to_csv() const {
  std::ostringstream os;
  os << "check,statement,status,worst_margin,worst_time\n";
  for (const auto& e : entries) {
    os << e.name << ',' << e.statement << ',' << to_string(e.status) << ','
       << csv::format_double(e.worst_margin) << ',' << csv::format_double(e.worst_time) << '\n';
  }
  if (course) os << "course,classification," << to_string(*course) << ",0,0\n";
  return os.str();
}

DifferentialSlack differential_slack(const Trajectory& traj, double M) {
  DifferentialSlack out;
  WorstMargin worst;
  const double eta = traj.params.eta;
  for (std::size_t i = 0; i + 1 < traj.records.size(); ++i) {
    const auto& a = traj.records[i];
    const auto& b = traj.records[i + 1];
    const double rate = (b.psi - a.psi) / (b.t - a.t);
    const double bound = M - 2.0 * eta * a.xi * a.psi;
    worst.update(bound - rate, a.t);
  }
  out.worst_margin = std::isfinite(worst.margin) ? worst.margin : 0.0;
  out.worst_time = worst.time;
  out.max_excess = std::max(0.0, -out.worst_margin);
  return out;
}

BoundsReport check_trajectory(const Trajectory& traj, std::span<const SimState> snapshots,
                              const ScalarField& chi, const Tolerances& tol,
                              const std::vector<std::string>& enabled) {
  if (traj.records.empty()) throw InconsistentInputs("trajectory has no samples");
  check_snapshot_times(traj, snapshots);

  const auto is_enabled = [&](const char* name) {
    return enabled.empty() || std::find(enabled.begin(), enabled.end(), name) != enabled.end();
  };
  for (const auto& name : enabled) {
    const auto known = checks::all();
    if (std::find(known.begin(), known.end(), name) == known.end()) {
      throw InvalidArgument("unknown check '" + name + "'");
    }
  }

  const auto& records = traj.records;
  const ModelParams& params = traj.params;
  const double omega = traj.grid.area();
  const auto& first = records.front();
  const bool u0_le_one = first.u_max <= 1.0 + tol.one;

  BoundsReport report;

  if (is_enabled(checks::kNonNegativity)) {
    CheckEntry e = make_entry(checks::kNonNegativity, "u >= 0 and v >= 0");
    WorstMargin w;
    for (const auto& r : records) w.update(r.u_min, r.t);
    for (const auto& s : snapshots) {
      w.update(s.u.min(), s.t);
      w.update(s.v.min(), s.t);
    }
    finish(e, w, w.margin >= -tol.neg);
    report.entries.push_back(std::move(e));
  }

  if (is_enabled(checks::kUpperBoundU)) {
    CheckEntry e = make_entry(checks::kUpperBoundU, "u <= 1");
    if (!u0_le_one) {
      skip(e, "initial u exceeds 1");
    } else {
      WorstMargin w;
      for (const auto& r : records) w.update(1.0 - r.u_max, r.t);
      for (const auto& s : snapshots) w.update(1.0 - s.u.max(), s.t);
      finish(e, w, w.margin >= -tol.one);
    }
    report.entries.push_back(std::move(e));
  }

  if (is_enabled(checks::kTotalVirus)) {
    CheckEntry e = make_entry(checks::kTotalVirus, "U <= |Omega|");
    if (!u0_le_one) {
      skip(e, "initial u exceeds 1");
    } else {
      WorstMargin w;
      for (const auto& r : records) w.update(omega - r.U, r.t);
      finish(e, w, w.margin >= -tol.bound);
    }
    report.entries.push_back(std::move(e));
  }

  if (is_enabled(checks::kSigma)) {
    CheckEntry e = make_entry(checks::kSigma, "trajectory in Sigma");
    const SigmaRegion region = sigma_region(params, omega);
    if (!sigma_contains(region, first.U, first.V, tol.bound)) {
      skip(e, "initial (U, V) lies outside the trapezoid");
    } else {
      WorstMargin w;
      bool ok = true;
      for (const auto& r : records) {
        w.update(sigma_margin(region, r.U, r.V), r.t);
        ok = ok && sigma_contains(region, r.U, r.V, tol.bound);
      }
      finish(e, w, ok);
    }
    report.entries.push_back(std::move(e));
  }

  if (is_enabled(checks::kEnvelope)) {
    CheckEntry e = make_entry(checks::kEnvelope, "Psi <= E");
    const auto env = envelope_E(traj, chi.max(), tol.envelope_constant);
    WorstMargin w;
    bool ok = true;
    for (std::size_t i = 0; i < records.size(); ++i) {
      const double E = env[i].E;
      w.update(E - records[i].psi, records[i].t);
      ok = ok && records[i].psi <= E + tol.envelope * std::max(1.0, E);
    }
    finish(e, w, ok);
    report.entries.push_back(std::move(e));
  }

  if (is_enabled(checks::kDifferential)) {
    CheckEntry e = make_entry(checks::kDifferential, "dPsi/dt <= -2 eta xi Psi + M");
    if (records.size() < 2) {
      skip(e, "needs at least two samples");
    } else {
      const double M = envelope_constant(params, chi.max(), omega, tol.envelope_constant);
      const DifferentialSlack slack = differential_slack(traj, M);
      WorstMargin w{slack.worst_margin, slack.worst_time};
      finish(e, w, slack.max_excess <= tol.differential * std::max(1.0, M));
    }
    report.entries.push_back(std::move(e));
  }

  return report;
}

double trailing_relative_change(const Trajectory& traj, double window_fraction) {
  const auto& rec = traj.records;
  if (rec.size() < 2) return kInf;
  const double t_end = rec.back().t;
  const double t_start = t_end - window_fraction * (t_end - rec.front().t);

  double u_lo = kInf, u_hi = -kInf, v_lo = kInf, v_hi = -kInf;
  std::size_t count = 0;
  for (const auto& r : rec) {
    if (r.t < t_start - 1e-12 * std::max(1.0, std::abs(t_start))) continue;
    u_lo = std::min(u_lo, r.U);
    u_hi = std::max(u_hi, r.U);
    v_lo = std::min(v_lo, r.V);
    v_hi = std::max(v_hi, r.V);
    ++count;
  }
  if (count < 2) return kInf;

  const auto relative = [](double lo, double hi, double final_value) {
    if (hi == lo) return 0.0;
    if (final_value == 0.0) return kInf;
    return (hi - lo) / std::abs(final_value);
  };
  return std::max(relative(u_lo, u_hi, rec.back().U), relative(v_lo, v_hi, rec.back().V));
}

Course classify_course(const Trajectory& traj, const CourseThresholds& th) {
  if (traj.records.empty()) return Course::Undecided;
  const double final_u = traj.records.back().U;
  const double omega = traj.grid.area();
  if (final_u < th.eps_heal * omega) return Course::Healing;
  if (trailing_relative_change(traj, th.window_fraction) < th.stationarity_tol) {
    return Course::Chronic;
  }
  return Course::Undecided;
}

}  // namespace hepasim
