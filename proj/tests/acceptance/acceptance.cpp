// Acceptance suite: one pass/fail line per criterion, exit status 1 if any fails.

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "hepasim/config.hpp"
#include "hepasim/elliptic.hpp"
#include "hepasim/functionals.hpp"
#include "hepasim/integrator.hpp"
#include "hepasim/verify.hpp"

using namespace hepasim;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += "[FAILED " + what + "] ";
    }
  }
  void note(const std::string& text) { detail += text + "; "; }
};

std::string fmt(const char* format, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, value);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// Pointwise extremes over every recorded state of a run.
struct Pointwise {
  double min_u = kInf;
  double min_v = kInf;
  double max_u = -kInf;

  void observe(const SimState& s) {
    min_u = std::min(min_u, s.u.min());
    min_v = std::min(min_v, s.v.min());
    max_u = std::max(max_u, s.u.max());
  }
};

struct ScenarioRun {
  std::string name;
  Trajectory traj;
  Pointwise pointwise;
  std::vector<SimState> snapshots;  // evenly thinned, for check_trajectory
  double chi_max = 0.0;
  ScalarField chi{Grid(4, 4)};
  double seconds = 0.0;
};

ScenarioRun simulate(const ScenarioConfig& cfg) {
  ScenarioRun out;
  out.name = cfg.name;
  const Grid grid = cfg.grid();
  const PortalField portal = build_chi(grid, cfg.portal);
  out.chi = portal.chi;
  out.chi_max = portal.chi_max();
  const auto n_steps = static_cast<std::size_t>(std::ceil(cfg.control.t_final / cfg.control.dt - 1e-9));
  const std::size_t stride = std::max<std::size_t>(1, n_steps / cfg.control.snapshot_every / 100);
  std::size_t sample = 0;
  const auto t0 = std::chrono::steady_clock::now();
  out.traj = run(constant_state(grid, cfg.init.u0, cfg.init.v0), cfg.params, portal, cfg.control,
                 [&](const DiagnosticsRecord&, const SimState& s) {
                   out.pointwise.observe(s);
                   if (sample++ % stride == 0) out.snapshots.push_back(s);
                 });
  out.seconds = seconds_since(t0);
  return out;
}

ScenarioConfig scenario(const char* name, std::size_t n, std::size_t snapshot_every = 10) {
  ScenarioConfig cfg = preset(name);
  cfg.nx = cfg.ny = n;
  cfg.control.snapshot_every = snapshot_every;
  return cfg;
}

/// Largest relative spread of U and V over samples with t >= t_from.
double spread_since(const Trajectory& traj, double t_from) {
  double u_lo = kInf, u_hi = -kInf, v_lo = kInf, v_hi = -kInf;
  for (const auto& r : traj.records) {
    if (r.t < t_from - 1e-9) continue;
    u_lo = std::min(u_lo, r.U);
    u_hi = std::max(u_hi, r.U);
    v_lo = std::min(v_lo, r.V);
    v_hi = std::max(v_hi, r.V);
  }
  const auto& last = traj.records.back();
  return std::max((u_hi - u_lo) / std::abs(last.U), (v_hi - v_lo) / std::abs(last.V));
}

Verdict criterion_vup() {
  Verdict v;
  const double v_up = sigma_region(preset("healing").params, 1.0).v_up;
  v.require(std::abs(v_up - 19.833) <= 1e-3, "V_up within 1e-3 of 19.833");
  v.note("V_up = " + fmt("%.6f", v_up));
  return v;
}

Verdict criterion_regimes(const ScenarioRun& heal, const ScenarioRun& chronic,
                          const ScenarioRun& heal_fine, const ScenarioRun& chronic_fine) {
  Verdict v;
  const auto& h = heal.traj.records.back();
  v.require(classify_course(heal.traj) == Course::Healing, "healing preset classified healing");
  v.require(std::abs(h.t - 10.0) < 1e-9 && h.U < 0.01, "healing U(10) < 0.01");
  v.note("healing U(10) = " + fmt("%.3e", h.U) + ", " + fmt("%.1f s", heal.seconds));

  const auto& c = chronic.traj.records.back();
  const double spread = spread_since(chronic.traj, 27.0);
  v.require(classify_course(chronic.traj) == Course::Chronic, "chronic preset classified chronic");
  v.require(c.U > 0.0 && c.V > 0.0, "chronic final U, V > 0");
  v.require(spread < 1e-3, "chronic relative change over [27, 30] < 1e-3");
  v.note("chronic U(30) = " + fmt("%.6f", c.U) + ", V(30) = " + fmt("%.6f", c.V) +
         ", spread = " + fmt("%.2e", spread) + ", " + fmt("%.1f s", chronic.seconds));

  v.require(heal.seconds < 120.0 && chronic.seconds < 120.0, "runtime under 2 min each at 64x64");

  v.require(classify_course(heal_fine.traj) == Course::Healing, "healing at 128x128");
  v.require(classify_course(chronic_fine.traj) == Course::Chronic, "chronic at 128x128");
  v.note("128x128: healing U(10) = " + fmt("%.3e", heal_fine.traj.records.back().U) +
         ", chronic U(30) = " + fmt("%.6f", chronic_fine.traj.records.back().U));
  return v;
}

Verdict criterion_sigma(const std::vector<const ScenarioRun*>& runs) {
  Verdict v;
  for (const auto* r : runs) {
    const SigmaRegion region = sigma_region(r->traj.params, r->traj.grid.area());
    double worst = kInf;
    bool ok = true;
    for (const auto& rec : r->traj.records) {
      ok = ok && sigma_contains(region, rec.U, rec.V, 1e-8);
      worst = std::min(worst, sigma_margin(region, rec.U, rec.V));
    }
    v.require(ok, r->name + " inside the trapezoid at every sample");
    v.note(r->name + " min margin " + fmt("%.3e", worst) + " over " +
           std::to_string(r->traj.records.size()) + " samples");
  }
  return v;
}

Verdict criterion_envelope(const std::vector<const ScenarioRun*>& runs) {
  Verdict v;
  for (const auto* r : runs) {
    const auto env = envelope_E(r->traj, r->chi_max);
    bool ok = true;
    double ratio = 0.0;
    for (std::size_t i = 0; i < env.size(); ++i) {
      const double psi = r->traj.records[i].psi;
      ok = ok && psi <= env[i].E + 1e-8 * std::max(1.0, env[i].E);
      if (env[i].E > 0.0) ratio = std::max(ratio, psi / env[i].E);
    }
    v.require(ok, r->name + " Psi <= E at every sample");
    v.note(r->name + " max Psi/E = " + fmt("%.3e", ratio));
  }
  return v;
}

Verdict criterion_pointwise(const std::vector<const ScenarioRun*>& runs, const ScenarioRun& above) {
  Verdict v;
  for (const auto* r : runs) {
    const Pointwise& p = r->pointwise;
    bool ok = p.min_u >= -1e-10 && p.min_v >= -1e-10 && p.max_u <= 1.0 + 1e-10;
    for (const auto& rec : r->traj.records) ok = ok && rec.u_min >= -1e-10 && rec.u_max <= 1.0 + 1e-10;
    v.require(ok, r->name + " pointwise bounds at every sample");
    v.note(r->name + " min u " + fmt("%.2e", p.min_u) + ", min v " + fmt("%.2e", p.min_v) +
           ", max u - 1 = " + fmt("%.2e", p.max_u - 1.0));
  }

  // Started at u = 1.2: find the first sample with max u < 1, then demand it stays there.
  const auto& rec = above.traj.records;
  std::size_t cross = rec.size();
  for (std::size_t i = 0; i < rec.size(); ++i) {
    if (rec[i].u_max < 1.0) {
      cross = i;
      break;
    }
  }
  v.require(cross < rec.size(), "max u drops below 1 when started at 1.2");
  bool stays = cross < rec.size();
  for (std::size_t i = cross; i < rec.size(); ++i) stays = stays && rec[i].u_max <= 1.0;
  v.require(stays, "max u never returns above 1");
  if (cross < rec.size()) v.note("u0 = 1.2 crosses 1 at t = " + fmt("%.3f", rec[cross].t));
  v.require(above.pointwise.min_u >= -1e-10 && above.pointwise.min_v >= -1e-10,
            "u0 = 1.2 run stays non-negative");
  return v;
}

Verdict criterion_differential(const ScenarioRun& coarse, const ScenarioRun& fine) {
  Verdict v;
  const double m = envelope_constant(coarse.traj.params, coarse.chi_max, coarse.traj.grid.area());
  const DifferentialSlack a = differential_slack(coarse.traj, m);
  const DifferentialSlack b = differential_slack(fine.traj, m);
  v.require(b.max_excess <= 0.5 * a.max_excess, "slack at dt = 5e-4 at most half of slack at dt = 1e-3");
  v.note("slack(1e-3) = " + fmt("%.3e", a.max_excess) + ", slack(5e-4) = " + fmt("%.3e", b.max_excess) +
         ", min margin " + fmt("%.4g", a.worst_margin) + " / " + fmt("%.4g", b.worst_margin) +
         " of M = " + fmt("%.4g", m));
  const double m_tight = envelope_constant(coarse.traj.params, coarse.chi_max, coarse.traj.grid.area(),
                                           EnvelopeConstant::WithoutChiMax);
  v.note("without chi_max: slack " + fmt("%.3e", differential_slack(coarse.traj, m_tight).max_excess) +
         " / " + fmt("%.3e", differential_slack(fine.traj, m_tight).max_excess));
  return v;
}

/// Max-norm distance between a coarse field and the block average of a finer one.
double block_error(const ScalarField& coarse, const ScalarField& fine) {
  const std::size_t r = fine.grid().nx() / coarse.grid().nx();
  double err = 0.0;
  for (std::size_t j = 0; j < coarse.grid().ny(); ++j) {
    for (std::size_t i = 0; i < coarse.grid().nx(); ++i) {
      double avg = 0.0;
      for (std::size_t b = 0; b < r; ++b) {
        for (std::size_t a = 0; a < r; ++a) avg += fine.at(i * r + a, j * r + b);
      }
      avg /= static_cast<double>(r * r);
      err = std::max(err, std::abs(avg - coarse.at(i, j)));
    }
  }
  return err;
}

/// Smooth normalized bump centered on the portal corner.
ScalarField smooth_density(const Grid& g) {
  ScalarField f(g);
  for (std::size_t j = 0; j < g.ny(); ++j) {
    for (std::size_t i = 0; i < g.nx(); ++i) {
      const double dx = g.x(i) - 1.0, dy = g.y(j) - 1.0;
      f.at(i, j) = std::exp(-(dx * dx + dy * dy) / 0.02);
    }
  }
  const double mass = quadrature(f);
  for (double& x : f.values()) x /= mass;
  return f;
}

Verdict criterion_elliptic() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  const ModelParams p = preset("healing").params;
  SolverOptions opts;
  opts.tol = 1e-10;

  for (std::size_t n : {64u, 128u}) {
    const Grid g(n, n);
    const PortalField portal = build_chi(g, PortalSpec{});
    const EllipticSolution aux = solve_aux(g, portal.chi, p, opts);
    const double mass = p.eta * quadrature(aux.field);
    v.require(std::abs(mass - 1.0) <= 1e-8, "eta * int v_aux = 1 at n = " + std::to_string(n));

    const EllipticSolution vs = solve_vstar(g, portal.chi, p, opts);
    ScalarField rhs = portal.chi;
    for (double& x : rhs.values()) x -= 1.0 / g.area();
    const double res = helmholtz_residual(g, 0.0, p.beta, rhs.values(), vs.field.values());
    const double mean = quadrature(vs.field) / g.area();
    v.require(res <= 1e-10, "v* residual <= 1e-10 at n = " + std::to_string(n));
    v.require(std::abs(mean) <= 1e-10, "v* zero mean at n = " + std::to_string(n));
    v.note("n = " + std::to_string(n) + ": |eta int w - 1| = " + fmt("%.1e", std::abs(mass - 1.0)) +
           ", v* residual " + fmt("%.1e", res) + ", mean " + fmt("%.1e", mean));
  }

  // Convergence against a 512x512 reference. Roundoff in the 1/h^2 stencil puts
  // the reachable max-norm residual near 1e-10 there, so the reference uses 1e-8,
  // which is far below the discretization error being measured.
  SolverOptions ref_opts;
  ref_opts.tol = 1e-8;
  auto ratios = [&](const std::function<ScalarField(const Grid&)>& density) {
    std::vector<ScalarField> aux, vs;
    for (std::size_t n : {64u, 128u, 512u}) {
      const Grid g(n, n);
      const ScalarField chi = density(g);
      const SolverOptions& o = n == 512 ? ref_opts : opts;
      aux.push_back(solve_aux(g, chi, p, o).field);
      vs.push_back(solve_vstar(g, chi, p, o).field);
    }
    return std::pair{block_error(aux[0], aux[2]) / block_error(aux[1], aux[2]),
                     block_error(vs[0], vs[2]) / block_error(vs[1], vs[2])};
  };

  const auto [aux_ratio, vs_ratio] = ratios(smooth_density);
  v.require(aux_ratio >= 3.5 && aux_ratio <= 4.5, "v_aux convergence ratio in [3.5, 4.5]");
  v.require(vs_ratio >= 3.5 && vs_ratio <= 4.5, "v* convergence ratio in [3.5, 4.5]");
  v.note("smooth portal density: ratio v_aux " + fmt("%.3f", aux_ratio) + ", v* " + fmt("%.3f", vs_ratio));

  const auto [aux_disc, vs_disc] =
      ratios([](const Grid& g) { return build_chi(g, PortalSpec{}).chi; });
  v.note("default disc portal (not gated, cell-membership staircase): ratio v_aux " +
         fmt("%.3f", aux_disc) + ", v* " + fmt("%.3f", vs_disc));

  const double secs = seconds_since(t0);
  v.require(secs < 60.0, "runtime under 1 min");
  v.note(fmt("%.1f s", secs));
  return v;
}

/// The same IMEX step written against an assembled dense Laplacian.
std::pair<Eigen::VectorXd, Eigen::VectorXd> dense_step(const Grid& g, const Eigen::VectorXd& u,
                                                       const Eigen::VectorXd& v,
                                                       const Eigen::VectorXd& chi,
                                                       const ModelParams& p, double dt) {
  const int nx = static_cast<int>(g.nx()), ny = static_cast<int>(g.ny()), n = nx * ny;
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  const double cx = 1.0 / (g.hx() * g.hx()), cy = 1.0 / (g.hy() * g.hy());
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int k = j * nx + i;
      // A mirrored ghost contributes nothing, so only interior faces appear.
      const std::pair<int, double> nbrs[] = {{i > 0 ? k - 1 : -1, cx},
                                             {i + 1 < nx ? k + 1 : -1, cx},
                                             {j > 0 ? k - nx : -1, cy},
                                             {j + 1 < ny ? k + nx : -1, cy}};
      for (const auto& [nb, c] : nbrs) {
        if (nb < 0) continue;
        L(k, nb) += c;
        L(k, k) -= c;
      }
    }
  }
  const double U = u.sum() * g.cell_area();
  Eigen::VectorXd us(n), vs(n);
  for (int k = 0; k < n; ++k) {
    const double w = (1.0 - u[k]) * (u[k] - p.u_min) / (u[k] + p.kappa);
    us[k] = u[k] + dt * (u[k] * w - p.gamma * u[k] * v[k]);
    vs[k] = v[k] + dt * (p.delta * U * chi[k] - p.eta * (1.0 - u[k]) * v[k]);
  }
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  const Eigen::VectorXd un = (I - dt * p.alpha * L).partialPivLu().solve(us);
  const Eigen::VectorXd vn = (I - dt * p.beta * L).partialPivLu().solve(vs);
  return {un, vn};
}

Verdict criterion_dense_oracle() {
  Verdict v;
  const Grid g(8, 8);
  const PortalField portal = build_chi(g, PortalSpec{});
  const ModelParams p = preset("healing").params;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    SimState s = constant_state(g, 0.0, 0.0);
    Eigen::VectorXd u(64), w(64), chi(64);
    for (int k = 0; k < 64; ++k) {
      s.u[k] = u[k] = unit(rng);
      s.v[k] = w[k] = 2.0 * unit(rng);
      chi[k] = portal.chi[k];
    }
    StepControl ctrl;
    ctrl.dt = (0.1 + 0.9 * unit(rng)) * dt_max(p, portal.chi_max(), g.area(), s.v.max(), s.u.max());
    const SimState next = step(s, p, portal, ctrl);
    const auto [un, vn] = dense_step(g, u, w, chi, p, ctrl.dt);
    double du = 0.0, dv = 0.0;
    for (int k = 0; k < 64; ++k) {
      du = std::max(du, std::abs(next.u[k] - un[k]));
      dv = std::max(dv, std::abs(next.v[k] - vn[k]));
    }
    const double rel = std::max(du / un.cwiseAbs().maxCoeff(), dv / vn.cwiseAbs().maxCoeff());
    worst = std::max(worst, rel);
  }
  v.require(worst <= 1e-12, "max relative difference <= 1e-12 over 20 random states");
  v.note("worst relative difference " + fmt("%.2e", worst));
  return v;
}

Verdict criterion_negative_controls(const ScenarioRun& base) {
  Verdict v;
  const BoundsReport clean = check_trajectory(base.traj, base.snapshots, base.chi);
  v.require(clean.all_passed(), "unmodified run passes");

  const auto fails = [&](const char* check, const Trajectory& traj, const std::vector<SimState>& snaps,
                         double expected_time) {
    const BoundsReport rep = check_trajectory(traj, snaps, base.chi);
    const CheckEntry* e = rep.find(check);
    const bool ok = e && e->status == CheckStatus::Fail && std::abs(e->worst_time - expected_time) < 1e-9;
    v.require(ok, std::string(check) + " detects its violation");
    if (ok) v.note(std::string(check) + " fails at t = " + fmt("%.3g", e->worst_time));
  };

  const std::size_t mid = base.traj.records.size() / 2;
  const double t_mid = base.traj.records[mid].t;

  std::vector<SimState> snaps = base.snapshots;
  SimState& tampered = snaps[snaps.size() / 2];
  tampered.v[0] = -1e-6;
  fails(checks::kNonNegativity, base.traj, snaps, tampered.t);

  Trajectory t = base.traj;
  t.records[mid].u_max = 1.0 + 1e-6;
  fails(checks::kUpperBoundU, t, base.snapshots, t_mid);

  t = base.traj;
  t.records[mid].U = t.grid.area() + 1e-6;
  fails(checks::kTotalVirus, t, base.snapshots, t_mid);

  t = base.traj;
  t.records[mid].V = sigma_region(t.params, t.grid.area()).v_up + 1.0;
  fails(checks::kSigma, t, base.snapshots, t_mid);

  t = base.traj;
  const auto env = envelope_E(t, base.chi_max);
  t.records.back().psi = 2.0 * env.back().E + 1.0;
  fails(checks::kEnvelope, t, base.snapshots, t.records.back().t);

  t = base.traj;
  const double m = envelope_constant(t.params, base.chi_max, t.grid.area());
  const double gap = t.records[mid + 1].t - t.records[mid].t;
  const double jump = 2.0 * m * gap;
  for (std::size_t i = mid + 1; i < t.records.size(); ++i) t.records[i].psi += jump;
  fails(checks::kDifferential, t, base.snapshots, t_mid);
  return v;
}

}  // namespace

int main() {
  int failures = 0;
  const auto report = [&](int number, const char* title, const Verdict& v) {
    std::printf("criterion %d %s: %s -- %s\n", number, v.pass ? "PASS" : "FAIL", title, v.detail.c_str());
    std::fflush(stdout);
    if (!v.pass) ++failures;
  };

  report(1, "V_up reproduction", criterion_vup());

  const ScenarioRun heal = simulate(scenario("healing", 64, 1));
  const ScenarioRun chronic = simulate(scenario("chronic", 64));
  const ScenarioRun heal_fine = simulate(scenario("healing", 128));
  const ScenarioRun chronic_fine = simulate(scenario("chronic", 128));
  ScenarioConfig above_cfg = scenario("healing", 64, 1);
  above_cfg.name = "u0=1.2";
  above_cfg.init.u0 = 1.2;
  const ScenarioRun above = simulate(above_cfg);
  ScenarioConfig half_cfg = scenario("healing", 64, 1);
  half_cfg.control.dt = 5e-4;
  const ScenarioRun heal_half = simulate(half_cfg);

  const std::vector<const ScenarioRun*> presets{&heal, &chronic};
  report(2, "regime reproduction", criterion_regimes(heal, chronic, heal_fine, chronic_fine));
  report(3, "trapezoid containment", criterion_sigma(presets));
  report(4, "L2 envelope", criterion_envelope(presets));
  report(5, "pointwise invariants", criterion_pointwise(presets, above));
  report(6, "discrete differential inequality", criterion_differential(heal, heal_half));
  report(7, "elliptic correctness", criterion_elliptic());
  report(8, "dense oracle equivalence", criterion_dense_oracle());
  report(9, "negative controls", criterion_negative_controls(chronic));

  std::printf("acceptance: %d of 9 criteria passed\n", 9 - failures);
  return failures == 0 ? 0 : 1;
}
