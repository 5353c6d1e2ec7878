#include "hepasim/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "hepasim/errors.hpp"

namespace hepasim {
namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double max_abs(std::span<const double> a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

void remove_mean(std::span<double> a) {
  const double mean = std::accumulate(a.begin(), a.end(), 0.0) / static_cast<double>(a.size());
  for (double& x : a) x -= mean;
}

class HelmholtzOperator {
 public:
  HelmholtzOperator(const Grid& grid, double shift, double diffusion)
      : grid_(grid), shift_(shift), diffusion_(diffusion) {}

  void apply(std::span<const double> x, std::span<double> out) const {
    apply_laplacian(grid_, x, out);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = shift_ * x[k] - diffusion_ * out[k];
  }

  void residual(std::span<const double> b, std::span<const double> x, std::span<double> r) const {
    apply(x, r);
    for (std::size_t k = 0; k < r.size(); ++k) r[k] = b[k] - r[k];
  }

 private:
  const Grid& grid_;
  double shift_;
  double diffusion_;
};

std::size_t resolve_max_iters(const Grid& grid, const SolverOptions& opts) {
  return opts.max_iters > 0 ? opts.max_iters : 50 * (grid.nx() + grid.ny());
}

}  // namespace

double helmholtz_residual(const Grid& grid, double shift, double diffusion,
                          std::span<const double> rhs, std::span<const double> x) {
  std::vector<double> r(grid.size());
  HelmholtzOperator(grid, shift, diffusion).residual(rhs, x, r);
  return max_abs(r);
}

EllipticSolution solve_helmholtz(const Grid& grid, double shift, double diffusion,
                                 std::span<const double> rhs, const SolverOptions& opts,
                                 std::optional<std::span<const double>> initial_guess) {
  const std::size_t n = grid.size();
  if (rhs.size() != n) throw InvalidArgument("right-hand side does not match the grid");
  if (shift < 0.0 || !(diffusion > 0.0)) {
    throw InvalidArgument("Helmholtz operator needs shift >= 0 and diffusion > 0");
  }
  const bool singular = shift == 0.0;
  const std::size_t max_iters = resolve_max_iters(grid, opts);
  const HelmholtzOperator op(grid, shift, diffusion);

  std::vector<double> b(rhs.begin(), rhs.end());
  std::vector<double> x(n, 0.0);
  if (initial_guess) {
    if (initial_guess->size() != n) throw InvalidArgument("initial guess does not match the grid");
    std::copy(initial_guess->begin(), initial_guess->end(), x.begin());
  }
  if (singular) {
    remove_mean(b);
    remove_mean(x);
  }

  std::vector<double> r(n), p(n), ap(n);
  op.residual(b, x, r);
  if (singular) remove_mean(r);
  p = r;
  double rr = dot(r, r);
  double r_max = max_abs(r);

  auto true_residual = [&] {
    op.residual(b, x, r);
    if (singular) remove_mean(r);
    return max_abs(r);
  };

  std::size_t it = 0;
  while (true) {
    if (r_max <= opts.tol) {
      // The recurrence residual drifts from b - Ax; only the true one counts.
      r_max = true_residual();
      if (r_max <= opts.tol) {
        return EllipticSolution{ScalarField(grid, std::move(x)), r_max, it};
      }
      p = r;
      rr = dot(r, r);
    }
    if (it >= max_iters) throw NoConvergence(max_iters, true_residual());

    op.apply(p, ap);
    const double pap = dot(p, ap);
    if (!(pap > 0.0)) {
      r_max = true_residual();
      if (r_max <= opts.tol) {
        return EllipticSolution{ScalarField(grid, std::move(x)), r_max, it};
      }
      throw NoConvergence(it, r_max);
    }
    const double step = rr / pap;
    double rr_next = 0.0;
    r_max = 0.0;
    if (singular) {
      for (std::size_t k = 0; k < n; ++k) {
        x[k] += step * p[k];
        r[k] -= step * ap[k];
      }
      remove_mean(r);
      remove_mean(x);
      rr_next = dot(r, r);
      r_max = max_abs(r);
    } else {
      for (std::size_t k = 0; k < n; ++k) {
        x[k] += step * p[k];
        const double rk = r[k] - step * ap[k];
        r[k] = rk;
        rr_next += rk * rk;
        r_max = std::max(r_max, std::abs(rk));
      }
    }
    const double beta = rr_next / rr;
    for (std::size_t k = 0; k < n; ++k) p[k] = r[k] + beta * p[k];
    rr = rr_next;
    ++it;
  }
}

EllipticSolution solve_aux(const Grid& grid, const ScalarField& chi, const ModelParams& params,
                           const SolverOptions& opts) {
  if (!(params.eta > 0.0) || !(params.beta > 0.0)) {
    throw InvalidArgument("auxiliary problem needs eta > 0 and beta > 0");
  }
  if (!(chi.grid() == grid)) throw InvalidArgument("chi does not live on the solver grid");
  return solve_helmholtz(grid, params.eta, params.beta, chi.values(), opts);
}

double v_threshold(const EllipticSolution& sol, std::span<const unsigned char> theta_mask) {
  if (theta_mask.size() != sol.field.size()) {
    throw InvalidArgument("portal mask does not match the solution grid");
  }
  double lowest = 0.0;
  bool any = false;
  for (std::size_t k = 0; k < theta_mask.size(); ++k) {
    if (!theta_mask[k]) continue;
    lowest = any ? std::min(lowest, sol.field[k]) : sol.field[k];
    any = true;
  }
  if (!any) throw EmptyPortal("portal mask selects no cells");
  return lowest;
}

EllipticSolution solve_vstar(const Grid& grid, const ScalarField& chi, const ModelParams& params,
                             const SolverOptions& opts) {
  if (!(params.beta > 0.0)) throw InvalidArgument("v* problem needs beta > 0");
  if (!(chi.grid() == grid)) throw InvalidArgument("chi does not live on the solver grid");
  const double mass = quadrature(chi);
  if (std::abs(mass - 1.0) > 1e-8) {
    throw SolvabilityViolated("inflow profile integrates to " + std::to_string(mass) +
                              ", expected 1");
  }
  const double background = 1.0 / grid.area();
  std::vector<double> rhs(grid.size());
  for (std::size_t k = 0; k < rhs.size(); ++k) rhs[k] = chi[k] - background;
  return solve_helmholtz(grid, 0.0, params.beta, rhs, opts);
}

}  // namespace hepasim
