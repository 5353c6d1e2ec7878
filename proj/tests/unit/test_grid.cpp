#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "hepasim/errors.hpp"
#include "hepasim/grid.hpp"

using namespace hepasim;

namespace {

double cosine_laplacian_error(std::size_t n) {
  const Grid g(n, n);
  ScalarField f(g);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) f.at(i, j) = std::cos(std::numbers::pi * g.x(i));
  }
  const ScalarField lap = laplacian_neumann(f);
  double err = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const double exact = -std::numbers::pi * std::numbers::pi * std::cos(std::numbers::pi * g.x(i));
      err = std::max(err, std::abs(lap.at(i, j) - exact));
    }
  }
  return err;
}

}  // namespace

TEST_CASE("grid geometry") {
  const Grid g(8, 4, 2.0, 1.0);
  CHECK(g.size() == 32);
  CHECK(g.hx() == doctest::Approx(0.25));
  CHECK(g.hy() == doctest::Approx(0.25));
  CHECK(g.x(0) == doctest::Approx(0.125));
  CHECK(g.y(3) == doctest::Approx(0.875));
  CHECK(g.index(2, 1) == 10);
  CHECK_THROWS_AS(Grid(3, 8), InvalidArgument);
  CHECK_THROWS_AS(Grid(8, 8, 0.0, 1.0), InvalidArgument);
}

TEST_CASE("fields reject non-finite values") {
  const Grid g(4, 4);
  std::vector<double> vals(16, 1.0);
  vals[5] = std::nan("");
  CHECK_THROWS_AS(ScalarField(g, vals), InvalidArgument);
  CHECK_THROWS_AS(ScalarField(g, std::vector<double>(15, 0.0)), InvalidArgument);
}

TEST_CASE("quadrature of constants") {
  const Grid g(16, 16);
  CHECK(quadrature(ScalarField(g, 1.0)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(quadrature(ScalarField(g, 0.0)) == 0.0);
  const Grid wide(10, 20, 2.0, 3.0);
  CHECK(quadrature(ScalarField(wide, 0.5)) == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("laplacian of a constant vanishes") {
  const Grid g(12, 9);
  const ScalarField lap = laplacian_neumann(ScalarField(g, 3.25));
  CHECK(lap.max_abs() == 0.0);
}

TEST_CASE("laplacian conserves mass for random fields") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (std::size_t n : {4u, 17u, 64u}) {
    const Grid g(n, n + 3, 1.0, 1.5);
    for (int trial = 0; trial < 20; ++trial) {
      ScalarField f(g);
      for (double& x : f.values()) x = dist(rng);
      CHECK(std::abs(quadrature(laplacian_neumann(f))) <= 1e-10 * std::max(1.0, f.max_abs()));
    }
  }
}

TEST_CASE("laplacian is second order on the cosine solution") {
  const double e128 = cosine_laplacian_error(128);
  const double e256 = cosine_laplacian_error(256);
  CHECK(e256 < 1e-3);
  const double ratio = e128 / e256;
  CHECK(ratio >= 3.5);
  CHECK(ratio <= 4.5);
}

TEST_CASE("chi is normalized on the default quarter disc") {
  const Grid g(64, 64);
  const PortalField p = build_chi(g, PortalSpec{});
  CHECK(std::abs(quadrature(p.chi) - 1.0) <= 1e-12);
  CHECK(p.cell_count > 0);
  const double level = 1.0 / (static_cast<double>(p.cell_count) * g.cell_area());
  for (std::size_t k = 0; k < g.size(); ++k) {
    CHECK(p.chi[k] >= 0.0);
    if (p.mask[k]) {
      CHECK(p.chi[k] == doctest::Approx(level).epsilon(1e-14));
    } else {
      CHECK(p.chi[k] == 0.0);
    }
  }
}

TEST_CASE("chi on a disc covering exactly four cells") {
  const Grid g(8, 8);
  // Centers at 0.4375 and 0.5625 are within 0.1 of (0.5, 0.5); the next ring is not.
  const PortalField p = build_chi(g, PortalSpec{0.5, 0.5, 0.1});
  CHECK(p.cell_count == 4);
  CHECK(p.chi.at(3, 3) == doctest::Approx(1.0 / (4.0 * g.cell_area())));
  CHECK(p.chi.at(4, 4) == doctest::Approx(1.0 / (4.0 * g.cell_area())));
  CHECK(p.chi.at(2, 3) == 0.0);
}

TEST_CASE("chi properties for random portals") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> pos(0.0, 1.0);
  std::uniform_real_distribution<double> rad(0.05, 0.5);
  const Grid g(32, 32);
  for (int trial = 0; trial < 50; ++trial) {
    const PortalSpec spec{pos(rng), pos(rng), rad(rng)};
    const PortalField p = build_chi(g, spec);
    CHECK(std::abs(quadrature(p.chi) - 1.0) <= 1e-12);
    CHECK(p.chi.min() >= 0.0);
    for (std::size_t k = 0; k < g.size(); ++k) {
      if (!p.mask[k]) CHECK(p.chi[k] == 0.0);
    }
  }
}

TEST_CASE("portal outside the domain is rejected") {
  const Grid g(16, 16);
  CHECK_THROWS_AS(build_chi(g, PortalSpec{3.0, 3.0, 0.5}), EmptyPortal);
  CHECK_THROWS_AS(build_chi(g, PortalSpec{0.5, 0.5, 0.0}), InvalidArgument);
}

TEST_CASE("field csv layout") {
  const Grid g(4, 4);
  ScalarField f(g);
  for (std::size_t k = 0; k < g.size(); ++k) f[k] = 0.1 * static_cast<double>(k);
  std::ostringstream os;
  write_field_csv(os, f);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "x,y,value");
  std::getline(is, line);
  CHECK(line == "0.125,0.125,0");
  std::getline(is, line);
  CHECK(line == "0.375,0.125,0.10000000000000001");
  CHECK(os.str().find('\r') == std::string::npos);
}
