#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "hepasim/grid.hpp"
#include "hepasim/integrator.hpp"
#include "hepasim/model.hpp"

namespace hepasim {

struct DiagnosticsRecord {
  double t = 0.0;
  double U = 0.0;      // integral of u
  double V = 0.0;      // integral of v
  double phi = 0.0;    // eta U + gamma V
  double psi = 0.0;    // half the squared L2 norm of v
  double xi = 1.0;     // (1-u)-weighted mean with weight v^2
  double u_min = 0.0;
  double u_max = 0.0;
  double v_max = 0.0;
};

struct GridMeta {
  std::size_t nx = 0;
  std::size_t ny = 0;
  double lx = 1.0;
  double ly = 1.0;

  double area() const noexcept { return lx * ly; }
};

struct Trajectory {
  std::vector<DiagnosticsRecord> records;  // strictly increasing t
  ModelParams params;
  GridMeta grid;
};

/// Trajectory CSV: `t,U,V,phi,psi,xi,u_min,u_max,v_max`, 17 significant digits.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
void write_trajectory_csv(const std::string& path, const Trajectory& traj);
/// Throws ParseError on a missing/misnamed header, malformed rows, or zero rows.
std::vector<DiagnosticsRecord> read_trajectory_csv(std::istream& is);
std::vector<DiagnosticsRecord> read_trajectory_csv(const std::string& path);

/// Below this value of the integral of v^2 the mean xi is defined as 1.
inline constexpr double kDegenerateV2 = 1e-14;

DiagnosticsRecord compute_record(const SimState& state, const ModelParams& params);

/// The trapezoid {0 <= U <= |Omega|, 0 <= V <= v_up - (eta/gamma) U}.
struct SigmaRegion {
  double omega_area = 1.0;
  double v_up = 0.0;
  double slope = 0.0;  // eta / gamma

  double upper_v(double U) const noexcept { return v_up - slope * U; }
};

SigmaRegion sigma_region(const ModelParams& params, double omega_area);

bool sigma_contains(const SigmaRegion& region, double U, double V, double tol);

/// Signed distance-like margin: the smallest of the four edge slacks
/// (positive inside, negative outside).
double sigma_margin(const SigmaRegion& region, double U, double V);

struct ThetaEstimate {
  double theta = 0.0;       // max ratio after onset
  double onset_time = 0.0;  // first time after which the ratio stays below 1
  bool settled = false;     // ratio below 1 at the last valid sample
  std::size_t valid_samples = 0;
};

/// Streaming estimate of theta for the bound int u v^rho <= theta int v^rho.
class ThetaTracker {
 public:
  explicit ThetaTracker(double rho = 2.0);

  void observe(const SimState& state);
  /// Throws NoValidSamples if every observed denominator was degenerate.
  ThetaEstimate result() const;

  static double ratio(const SimState& state, double rho, bool& degenerate);

 private:
  struct Sample {
    double t;
    double ratio;
  };
  double rho_;
  std::vector<Sample> samples_;
};

ThetaEstimate estimate_theta(std::span<const SimState> states, double rho = 2.0);

/// Which constant feeds the envelope: delta chi_max |Omega| V_up (default)
/// or the variant without chi_max.
enum class EnvelopeConstant { WithChiMax, WithoutChiMax };

double envelope_constant(const ModelParams& params, double chi_max, double omega_area,
                         EnvelopeConstant kind = EnvelopeConstant::WithChiMax);

struct EnvelopePoint {
  double t;
  double E;
};

/// E(t) = exp(-2 eta X(t)) (M' int_0^t exp(2 eta X(s)) ds + Psi(0)), X(t) = int_0^t xi,
/// with both integrals taken by the trapezoidal rule over the recorded samples.
std::vector<EnvelopePoint> envelope_E(const Trajectory& traj, double chi_max,
                                      EnvelopeConstant kind = EnvelopeConstant::WithChiMax);

struct LinfIngredients {
  double max_vstar = 0.0;
  double partial_bound = 0.0;  // delta |Omega| max v*
};

LinfIngredients linf_bound_ingredients(const ModelParams& params, const ScalarField& chi,
                                       const Grid& grid, const SolverOptions& opts = {});

}  // namespace hepasim
