#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hepasim/functionals.hpp"
#include "hepasim/integrator.hpp"

namespace hepasim {

struct Tolerances {
  double neg = 1e-10;       // pointwise lower bound slack
  double one = 1e-10;       // pointwise u <= 1 slack
  double bound = 1e-8;      // absolute slack on U <= |Omega| and on Sigma
  double envelope = 1e-8;   // relative slack on Psi <= E, scaled by max(1, E)
  double differential = 1e-8;  // relative slack on the Psi inequality, scaled by max(1, M)
  EnvelopeConstant envelope_constant = EnvelopeConstant::WithChiMax;
};

enum class CheckStatus { Pass, Fail, Skipped };

const char* to_string(CheckStatus status);

struct CheckEntry {
  std::string name;
  std::string statement;
  CheckStatus status = CheckStatus::Skipped;
  double worst_margin = 0.0;  // bound minus value; negative means violated
  double worst_time = 0.0;
  std::string detail;
};

namespace checks {
inline constexpr const char* kNonNegativity = "nonnegativity";
inline constexpr const char* kUpperBoundU = "u_upper_bound";
inline constexpr const char* kTotalVirus = "total_virus_bound";
inline constexpr const char* kSigma = "sigma_containment";
inline constexpr const char* kEnvelope = "l2_envelope";
inline constexpr const char* kDifferential = "psi_differential_inequality";

/// All checks in report order.
std::vector<std::string> all();
}  // namespace checks

enum class Course { Healing, Chronic, Undecided };

const char* to_string(Course course);

struct CourseThresholds {
  double eps_heal = 0.01;          // healing if final U < eps_heal |Omega|
  double window_fraction = 0.1;    // trailing part of the run used for stationarity
  double stationarity_tol = 1e-3;  // max relative spread of U and V over the window

  friend bool operator==(const CourseThresholds&, const CourseThresholds&) = default;
};

struct BoundsReport {
  std::vector<CheckEntry> entries;
  std::optional<Course> course;

  bool all_passed() const;
  const CheckEntry* find(const std::string& name) const;

  /// One line per check: `name status margin`, then the course if set.
  std::string to_text() const;
  /// Header `check,statement,status,worst_margin,worst_time`.
  std::string to_csv() const;
};

/// Slack of the discrete Psi inequality: the largest positive excess of the
/// forward difference of Psi over M - 2 eta xi Psi (zero when always satisfied).
struct DifferentialSlack {
  double max_excess = 0.0;
  double worst_margin = 0.0;
  double worst_time = 0.0;
};

DifferentialSlack differential_slack(const Trajectory& traj, double M);

/// Evaluates the enabled checks over the trajectory and the pointwise snapshots.
///
/// Snapshots must be recorded at trajectory sample times (InconsistentInputs
/// otherwise). An empty `enabled` list enables every check.
BoundsReport check_trajectory(const Trajectory& traj, std::span<const SimState> snapshots,
                              const ScalarField& chi, const Tolerances& tol = {},
                              const std::vector<std::string>& enabled = {});

/// Relative spread max over {U, V} of (max - min) / |final| over the trailing window.
double trailing_relative_change(const Trajectory& traj, double window_fraction);

Course classify_course(const Trajectory& traj, const CourseThresholds& thresholds = {});

}  // namespace hepasim
