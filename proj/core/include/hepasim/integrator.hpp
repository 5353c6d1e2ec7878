#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "hepasim/elliptic.hpp"
#include "hepasim/grid.hpp"
#include "hepasim/model.hpp"

namespace hepasim {

struct DiagnosticsRecord;
struct Trajectory;

struct SimState {
  double t = 0.0;
  ScalarField u;
  ScalarField v;
};

/// Constant initial data u0, v0 on the grid.
SimState constant_state(const Grid& grid, double u0, double v0, double t = 0.0);

struct StepControl {
  double dt = 1e-3;
  double t_final = 10.0;
  std::size_t snapshot_every = 10;
  /// Implicit solves stop at residual <= implicit_tol * |rhs|_inf.
  double implicit_tol = 1e-13;
  std::size_t implicit_max_iters = 0;  // 0 selects 50 * (nx + ny)

  friend bool operator==(const StepControl&, const StepControl&) = default;
};

/// Values in [-kClipLimit, 0) are treated as roundoff and set to zero.
inline constexpr double kClipLimit = 1e-12;

/// Largest |w(u)| over [0, max(1, u_cap)].
double growth_rate_bound(const ModelParams& params, double u_cap = 1.0);

/// Explicit-reaction stability bound
/// 0.5 / (|w|_max + gamma v_cap + eta + delta chi_max |Omega|).
double dt_max(const ModelParams& params, double chi_max, double omega_area, double v_cap,
              double u_cap = 1.0);

/// One first-order IMEX step: explicit reaction and inflow, implicit diffusion.
///
/// Throws StabilityViolation if dt exceeds dt_max for the current state,
/// NoConvergence from the implicit solves, and InvariantViolation when a
/// value ends up below -kClipLimit.
SimState step(const SimState& state, const ModelParams& params, const PortalField& portal,
              const StepControl& ctrl);

/// Diffusion increments of the previous step, used to warm-start the
/// implicit solves of the next one. Only affects iteration counts.
struct StepWorkspace {
  std::vector<double> du;
  std::vector<double> dv;
};

SimState step(const SimState& state, const ModelParams& params, const PortalField& portal,
              const StepControl& ctrl, StepWorkspace& workspace);

using DiagnosticsSink = std::function<void(const DiagnosticsRecord&, const SimState&)>;

/// Advances until t >= t_final, recording diagnostics at t0, every
/// snapshot_every steps, and at the final step. The sink, when set, sees each
/// recorded sample together with the state it was computed from.
Trajectory run(const SimState& initial, const ModelParams& params, const PortalField& portal,
               const StepControl& ctrl, const DiagnosticsSink& sink = {});

}  // namespace hepasim
