#include "hepasim/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "hepasim/csv.hpp"
#include "hepasim/elliptic.hpp"
#include "hepasim/errors.hpp"

namespace hepasim {
namespace {

constexpr const char* kTrajectoryHeader = "t,U,V,phi,psi,xi,u_min,u_max,v_max";

}  // namespace

DiagnosticsRecord compute_record(const SimState& state, const ModelParams& params) {
  const ScalarField& u = state.u;
  const ScalarField& v = state.v;
  const double area = u.grid().cell_area();

  double su = 0.0, sv = 0.0, sv2 = 0.0, sw = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double v2 = v[k] * v[k];
    su += u[k];
    sv += v[k];
    sv2 += v2;
    sw += (1.0 - u[k]) * v2;
  }

  DiagnosticsRecord r;
  r.t = state.t;
  r.U = su * area;
  r.V = sv * area;
  r.phi = params.eta * r.U + params.gamma * r.V;
  const double v2_integral = sv2 * area;
  r.psi = 0.5 * v2_integral;
  r.xi = v2_integral < kDegenerateV2 ? 1.0 : (sw * area) / v2_integral;
  r.u_min = u.min();
  r.u_max = u.max();
  r.v_max = v.max();
  return r;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << kTrajectoryHeader << '\n';
  for (const auto& r : traj.records) {
    const double cols[] = {r.t, r.U, r.V, r.phi, r.psi, r.xi, r.u_min, r.u_max, r.v_max};
    for (std::size_t c = 0; c < std::size(cols); ++c) {
      if (c) os << ',';
      os << csv::format_double(cols[c]);
    }
    os << '\n';
  }
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path + " for writing");
  write_trajectory_csv(os, traj);
}

std::vector<DiagnosticsRecord> read_trajectory_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || csv::trim(line) != kTrajectoryHeader) {
    throw ParseError(std::string("trajectory: expected header '") + kTrajectoryHeader + "'");
  }
  std::vector<DiagnosticsRecord> records;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (csv::trim(line).empty()) continue;
    const auto cols = csv::split(csv::trim(line));
    if (cols.size() != 9) {
      throw ParseError("trajectory line " + std::to_string(line_no) + ": expected 9 columns");
    }
    DiagnosticsRecord r;
    double* fields[] = {&r.t, &r.U, &r.V, &r.phi, &r.psi, &r.xi, &r.u_min, &r.u_max, &r.v_max};
    for (std::size_t c = 0; c < 9; ++c) {
      *fields[c] = csv::parse_double(cols[c], "trajectory line " + std::to_string(line_no));
    }
    if (!records.empty() && !(r.t > records.back().t)) {
      throw ParseError("trajectory line " + std::to_string(line_no) + ": time not increasing");
    }
    records.push_back(r);
  }
  if (records.empty()) throw ParseError("trajectory has no samples");
  return records;
}

std::vector<DiagnosticsRecord> read_trajectory_csv(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ParseError("cannot open trajectory file " + path);
  return read_trajectory_csv(is);
}

SigmaRegion sigma_region(const ModelParams& p, double omega_area) {
  SigmaRegion s;
  s.omega_area = omega_area;
  s.v_up = (p.eta + 1.0 + p.gamma * p.delta / p.eta) * omega_area / p.gamma;
  s.slope = p.eta / p.gamma;
  return s;
}

bool sigma_contains(const SigmaRegion& region, double U, double V, double tol) {
  return U >= -tol && U <= region.omega_area + tol && V >= -tol && V <= region.upper_v(U) + tol;
}

double sigma_margin(const SigmaRegion& region, double U, double V) {
  return std::min({U, region.omega_area - U, V, region.upper_v(U) - V});
}

ThetaTracker::ThetaTracker(double rho) : rho_(rho) {
  if (!(rho >= 0.0)) throw InvalidArgument("rho must be non-negative");
}

double ThetaTracker::ratio(const SimState& state, double rho, bool& degenerate) {
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < state.u.size(); ++k) {
    const double w = rho == 2.0 ? state.v[k] * state.v[k] : std::pow(state.v[k], rho);
    num += state.u[k] * w;
    den += w;
  }
  const double area = state.u.grid().cell_area();
  degenerate = den * area < kDegenerateV2;
  return degenerate ? 0.0 : num / den;
}

void ThetaTracker::observe(const SimState& state) {
  bool degenerate = false;
  const double r = ratio(state, rho_, degenerate);
  if (!degenerate) samples_.push_back({state.t, r});
}

ThetaEstimate ThetaTracker::result() const {
  if (samples_.empty()) throw NoValidSamples("every sample had a degenerate denominator");
  ThetaEstimate est;
  est.valid_samples = samples_.size();

  std::size_t start = 0;
  for (std::size_t i = samples_.size(); i-- > 0;) {
    if (samples_[i].ratio >= 1.0) {
      start = i + 1;
      break;
    }
  }
  est.settled = start < samples_.size();
  if (!est.settled) {
    est.onset_time = samples_.back().t;
    est.theta = samples_.back().ratio;
    return est;
  }
  est.onset_time = samples_[start].t;
  est.theta = samples_[start].ratio;
  for (std::size_t i = start; i < samples_.size(); ++i) est.theta = std::max(est.theta, samples_[i].ratio);
  return est;
}

ThetaEstimate estimate_theta(std::span<const SimState> states, double rho) {
  ThetaTracker tracker(rho);
  for (const auto& s : states) tracker.observe(s);
  return tracker.result();
}

double envelope_constant(const ModelParams& params, double chi_max, double omega_area,
                         EnvelopeConstant kind) {
  const double v_up = sigma_region(params, omega_area).v_up;
  const double m = params.delta * omega_area * v_up;
  return kind == EnvelopeConstant::WithChiMax ? m * chi_max : m;
}

std::vector<EnvelopePoint> envelope_E(const Trajectory& traj, double chi_max,
                                      EnvelopeConstant kind) {
  if (traj.records.empty()) throw InvalidArgument("envelope needs a non-empty trajectory");
  const double m = envelope_constant(traj.params, chi_max, traj.grid.area(), kind);
  const double two_eta = 2.0 * traj.params.eta;
  const double psi0 = traj.records.front().psi;

  // Carried in damped form F = exp(-2 eta X(t)) int_0^t exp(2 eta X) ds so
  // that long runs never overflow the exponentials.
  std::vector<EnvelopePoint> out;
  out.reserve(traj.records.size());
  out.push_back({traj.records.front().t, psi0});
  double x = 0.0;
  double damped = 0.0;
  for (std::size_t i = 1; i < traj.records.size(); ++i) {
    const auto& a = traj.records[i - 1];
    const auto& b = traj.records[i];
    const double dt = b.t - a.t;
    const double dx = 0.5 * (a.xi + b.xi) * dt;
    const double decay = std::exp(-two_eta * dx);
    x += dx;
    damped = decay * damped + 0.5 * (decay + 1.0) * dt;
    out.push_back({b.t, m * damped + psi0 * std::exp(-two_eta * x)});
  }
  return out;
}

LinfIngredients linf_bound_ingredients(const ModelParams& params, const ScalarField& chi,
                                       const Grid& grid, const SolverOptions& opts) {
  const EllipticSolution vstar = solve_vstar(grid, chi, params, opts);
  LinfIngredients out;
  out.max_vstar = vstar.field.max();
  out.partial_bound = params.delta * grid.area() * out.max_vstar;
  return out;
}

}  // namespace hepasim
