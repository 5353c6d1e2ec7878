#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hepasim/grid.hpp"
#include "hepasim/model.hpp"

namespace hepasim {

struct SolverOptions {
  double tol = 1e-10;          // max-norm of the discrete residual
  std::size_t max_iters = 0;   // 0 selects 50 * (nx + ny)
};

struct EllipticSolution {
  ScalarField field;
  double residual_norm = 0.0;
  std::size_t iterations = 0;
};

/// Conjugate-gradient solve of (shift * I - diffusion * Laplacian) x = rhs with
/// zero-flux boundaries.
///
/// With shift == 0 the operator is singular; the right-hand side and every
/// iterate are then projected onto the zero-mean subspace. `initial_guess`
/// warm-starts the iteration. Throws NoConvergence when `opts.tol` is not
/// reached within the iteration budget.
EllipticSolution solve_helmholtz(const Grid& grid, double shift, double diffusion,
                                 std::span<const double> rhs, const SolverOptions& opts,
                                 std::optional<std::span<const double>> initial_guess = {});

/// Max-norm of rhs - (shift * I - diffusion * Laplacian) x.
double helmholtz_residual(const Grid& grid, double shift, double diffusion,
                          std::span<const double> rhs, std::span<const double> x);

/// Auxiliary stationary problem -beta Lap w + eta w = chi.
EllipticSolution solve_aux(const Grid& grid, const ScalarField& chi, const ModelParams& params,
                           const SolverOptions& opts = {});

/// Minimum of the solution over the portal cells. Throws EmptyPortal for an empty mask.
double v_threshold(const EllipticSolution& sol, std::span<const unsigned char> theta_mask);

/// Zero-mean solution of -beta Lap v = chi - 1/|Omega|.
///
/// Throws SolvabilityViolated when the quadrature of chi differs from one by more than 1e-8.
EllipticSolution solve_vstar(const Grid& grid, const ScalarField& chi, const ModelParams& params,
                             const SolverOptions& opts = {});

}  // namespace hepasim
