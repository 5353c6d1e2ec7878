#include "hepasim/model.hpp"

#include <cmath>
#include <string>

#include "hepasim/errors.hpp"

namespace hepasim {

void ModelParams::validate() const {
  const auto positive = [](double x, const char* name) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw InvalidArgument(std::string("model parameter ") + name + " must be positive");
    }
  };
  positive(alpha, "alpha");
  positive(beta, "beta");
  positive(gamma, "gamma");
  positive(delta, "delta");
  positive(eta, "eta");
  positive(u_min, "u_min");
  positive(kappa, "kappa");
  if (!(u_min < 1.0)) throw InvalidArgument("model parameter u_min must be below 1");
}

double growth_rate(double u, const ModelParams& p) {
  if (!(u > -p.kappa)) throw PoleInput("growth rate undefined for u <= -kappa");
  return (1.0 - u) * (u - p.u_min) / (u + p.kappa);
}

ScalarField inflow_field(const ScalarField& u, const ScalarField& chi, const ModelParams& p) {
  if (!(u.grid() == chi.grid())) throw InvalidArgument("u and chi live on different grids");
  const double scale = p.delta * quadrature(u);
  ScalarField out(chi.grid());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = scale * chi[k];
  return out;
}

ScalarField reaction_u(const ScalarField& u, const ScalarField& v, const ModelParams& p) {
  if (!(u.grid() == v.grid())) throw InvalidArgument("u and v live on different grids");
  ScalarField out(u.grid());
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = u[k] * growth_rate(u[k], p) - p.gamma * u[k] * v[k];
  }
  return out;
}

ScalarField reaction_v(const ScalarField& u, const ScalarField& v, const ScalarField& chi,
                       const ModelParams& p) {
  if (!(u.grid() == v.grid())) throw InvalidArgument("u and v live on different grids");
  ScalarField out = inflow_field(u, chi, p);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] -= p.eta * (1.0 - u[k]) * v[k];
  return out;
}

}  // namespace hepasim
