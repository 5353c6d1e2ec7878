#pragma once

#include "hepasim/grid.hpp"

namespace hepasim {

/// Coefficients of the virus / T-cell reaction-diffusion system.
struct ModelParams {
  double alpha = 0.6;   // diffusion of u
  double beta = 0.3;    // diffusion of v
  double gamma = 0.9;   // predation rate
  double delta = 3.7;   // inflow strength
  double eta = 0.2;     // decay rate of v
  double u_min = 0.05;  // Allee threshold
  double kappa = 0.01;  // growth-shape parameter

  /// Throws InvalidArgument unless every coefficient is positive and u_min < 1.
  void validate() const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Allee-type growth rate (1 - u)(u - u_min)/(u + kappa). Throws PoleInput for u <= -kappa.
double growth_rate(double u, const ModelParams& params);

/// Non-local inflow delta * U * chi, with U the integral of u.
ScalarField inflow_field(const ScalarField& u, const ScalarField& chi, const ModelParams& params);

/// u w(u) - gamma u v, pointwise.
ScalarField reaction_u(const ScalarField& u, const ScalarField& v, const ModelParams& params);

/// j[u] - eta (1 - u) v, pointwise.
ScalarField reaction_v(const ScalarField& u, const ScalarField& v, const ScalarField& chi,
                       const ModelParams& params);

}  // namespace hepasim
