#include "hepasim/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hepasim/errors.hpp"
#include "hepasim/functionals.hpp"

namespace hepasim {
namespace {

void clip_roundoff(ScalarField& f, const char* name) {
  for (double& x : f.values()) {
    if (x < -kClipLimit) {
      throw InvariantViolation(std::string(name) + " dropped to " + std::to_string(x) +
                               ", below the roundoff clipping limit");
    }
    if (x < 0.0) x = 0.0;
  }
}

ScalarField implicit_diffusion(const ScalarField& rhs, double coefficient,
                               const StepControl& ctrl, std::vector<double>* increment) {
  const double scale = rhs.max_abs();
  if (scale == 0.0) {
    if (increment) increment->assign(rhs.size(), 0.0);
    return ScalarField(rhs.grid());
  }
  SolverOptions opts;
  opts.tol = ctrl.implicit_tol * scale;
  opts.max_iters = ctrl.implicit_max_iters;
  std::vector<double> guess(rhs.values().begin(), rhs.values().end());
  if (increment && increment->size() == guess.size()) {
    for (std::size_t k = 0; k < guess.size(); ++k) guess[k] += (*increment)[k];
  }
  ScalarField out = solve_helmholtz(rhs.grid(), 1.0, coefficient, rhs.values(), opts,
                                    std::span<const double>(guess))
                        .field;
  if (increment) {
    increment->resize(out.size());
    for (std::size_t k = 0; k < out.size(); ++k) (*increment)[k] = out[k] - rhs[k];
  }
  return out;
}

SimState step_impl(const SimState& state, const ModelParams& params, const PortalField& portal,
                   const StepControl& ctrl, StepWorkspace* ws) {
  const Grid& grid = state.u.grid();
  if (!(ctrl.dt > 0.0)) throw InvalidArgument("time step must be positive");
  const double limit = dt_max(params, portal.chi_max(), grid.area(), state.v.max(), state.u.max());
  if (ctrl.dt > limit) {
    throw StabilityViolation("dt = " + std::to_string(ctrl.dt) + " exceeds dt_max = " +
                             std::to_string(limit));
  }

  ScalarField u_star = reaction_u(state.u, state.v, params);
  ScalarField v_star = reaction_v(state.u, state.v, portal.chi, params);
  for (std::size_t k = 0; k < u_star.size(); ++k) {
    u_star[k] = state.u[k] + ctrl.dt * u_star[k];
    v_star[k] = state.v[k] + ctrl.dt * v_star[k];
  }

  SimState next{state.t + ctrl.dt,
                implicit_diffusion(u_star, ctrl.dt * params.alpha, ctrl, ws ? &ws->du : nullptr),
                implicit_diffusion(v_star, ctrl.dt * params.beta, ctrl, ws ? &ws->dv : nullptr)};
  clip_roundoff(next.u, "u");
  clip_roundoff(next.v, "v");
  return next;
}

}  // namespace

SimState constant_state(const Grid& grid, double u0, double v0, double t) {
  return SimState{t, ScalarField(grid, u0), ScalarField(grid, v0)};
}

double growth_rate_bound(const ModelParams& p, double u_cap) {
  // On [0, 1] the rate is -s + b - c/s with s = u + kappa, so the positive
  // hump peaks at s = sqrt(c); the negative end is w(0) = -u_min/kappa.
  const double b = 1.0 + 2.0 * p.kappa + p.u_min;
  const double c = (1.0 + p.kappa) * (p.kappa + p.u_min);
  double bound = std::max(p.u_min / p.kappa, b - 2.0 * std::sqrt(c));
  if (u_cap > 1.0) bound = std::max(bound, std::abs(growth_rate(u_cap, p)));
  return bound;
}

double dt_max(const ModelParams& p, double chi_max, double omega_area, double v_cap,
              double u_cap) {
  const double rate = growth_rate_bound(p, u_cap) + p.gamma * std::max(0.0, v_cap) + p.eta +
                      p.delta * chi_max * omega_area;
  return 0.5 / rate;
}

SimState step(const SimState& state, const ModelParams& params, const PortalField& portal,
              const StepControl& ctrl) {
  return step_impl(state, params, portal, ctrl, nullptr);
}

SimState step(const SimState& state, const ModelParams& params, const PortalField& portal,
              const StepControl& ctrl, StepWorkspace& workspace) {
  return step_impl(state, params, portal, ctrl, &workspace);
}

Trajectory run(const SimState& initial, const ModelParams& params, const PortalField& portal,
               const StepControl& ctrl, const DiagnosticsSink& sink) {
  if (!(ctrl.dt > 0.0)) throw InvalidArgument("time step must be positive");
  if (ctrl.snapshot_every == 0) throw InvalidArgument("snapshot_every must be at least 1");
  const Grid& grid = initial.u.grid();

  Trajectory traj;
  traj.params = params;
  traj.grid = GridMeta{grid.nx(), grid.ny(), grid.lx(), grid.ly()};

  auto record = [&](const SimState& s) {
    traj.records.push_back(compute_record(s, params));
    if (sink) sink(traj.records.back(), s);
  };

  record(initial);
  const double t0 = initial.t;
  std::size_t n_steps = 0;
  if (ctrl.t_final > t0) {
    n_steps = static_cast<std::size_t>(std::ceil((ctrl.t_final - t0) / ctrl.dt - 1e-9));
  }

  SimState state = initial;
  StepWorkspace workspace;
  for (std::size_t k = 1; k <= n_steps; ++k) {
    state = step(state, params, portal, ctrl, workspace);
    state.t = t0 + static_cast<double>(k) * ctrl.dt;
    if (k % ctrl.snapshot_every == 0 || k == n_steps) record(state);
  }
  return traj;
}

}  // namespace hepasim
