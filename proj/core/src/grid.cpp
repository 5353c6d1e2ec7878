#include "hepasim/grid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <string>

#include "hepasim/csv.hpp"
#include "hepasim/errors.hpp"

namespace hepasim {

Grid::Grid(std::size_t nx, std::size_t ny, double lx, double ly)
    : nx_(nx), ny_(ny), lx_(lx), ly_(ly) {
  if (nx < 4 || ny < 4) throw InvalidArgument("grid needs at least 4 cells per axis");
  if (!(lx > 0.0) || !(ly > 0.0) || !std::isfinite(lx) || !std::isfinite(ly)) {
    throw InvalidArgument("grid side lengths must be positive and finite");
  }
}

ScalarField::ScalarField(const Grid& grid, double fill) : grid_(grid), values_(grid.size(), fill) {
  if (!std::isfinite(fill)) throw InvalidArgument("field fill value must be finite");
}

ScalarField::ScalarField(const Grid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw InvalidArgument("field has " + std::to_string(values_.size()) + " values, grid has " +
                          std::to_string(grid_.size()) + " cells");
  }
  if (!all_finite()) throw InvalidArgument("field contains non-finite values");
}

double ScalarField::min() const noexcept { return *std::min_element(values_.begin(), values_.end()); }

double ScalarField::max() const noexcept { return *std::max_element(values_.begin(), values_.end()); }

double ScalarField::max_abs() const noexcept {
  double m = 0.0;
  for (double x : values_) m = std::max(m, std::abs(x));
  return m;
}

bool ScalarField::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double x) { return std::isfinite(x); });
}

double quadrature(const ScalarField& f) {
  double sum = 0.0;
  for (double x : f.values()) sum += x;
  return sum * f.grid().cell_area();
}

void apply_laplacian(const Grid& grid, std::span<const double> in, std::span<double> out) {
  const std::size_t nx = grid.nx();
  const std::size_t ny = grid.ny();
  const double cx = 1.0 / (grid.hx() * grid.hx());
  const double cy = 1.0 / (grid.hy() * grid.hy());
  // A mirrored ghost equals the boundary cell, so the face difference vanishes.
  for (std::size_t j = 0; j < ny; ++j) {
    const double* row = in.data() + j * nx;
    const double* south = j > 0 ? row - nx : row;
    const double* north = j + 1 < ny ? row + nx : row;
    double* dst = out.data() + j * nx;
    dst[0] = cx * (row[1] - row[0]) + cy * ((north[0] - row[0]) + (south[0] - row[0]));
    for (std::size_t i = 1; i + 1 < nx; ++i) {
      const double c = row[i];
      dst[i] = cx * ((row[i + 1] - c) + (row[i - 1] - c)) + cy * ((north[i] - c) + (south[i] - c));
    }
    const std::size_t l = nx - 1;
    dst[l] = cx * (row[l - 1] - row[l]) + cy * ((north[l] - row[l]) + (south[l] - row[l]));
  }
}

ScalarField laplacian_neumann(const ScalarField& f) {
  ScalarField out(f.grid());
  apply_laplacian(f.grid(), f.values(), out.values());
  return out;
}

PortalField build_chi(const Grid& grid, const PortalSpec& spec) {
  if (!(spec.radius > 0.0)) throw InvalidArgument("portal radius must be positive");
  std::vector<unsigned char> mask(grid.size(), 0);
  std::size_t count = 0;
  const double r2 = spec.radius * spec.radius;
  for (std::size_t j = 0; j < grid.ny(); ++j) {
    const double dy = grid.y(j) - spec.center_y;
    for (std::size_t i = 0; i < grid.nx(); ++i) {
      const double dx = grid.x(i) - spec.center_x;
      if (dx * dx + dy * dy <= r2) {
        mask[grid.index(i, j)] = 1;
        ++count;
      }
    }
  }
  if (count == 0) throw EmptyPortal("no cell center lies inside the portal disc");

  const double level = 1.0 / (static_cast<double>(count) * grid.cell_area());
  ScalarField chi(grid);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (mask[k]) chi[k] = level;
  }
  return PortalField{std::move(chi), std::move(mask), count};
}

void write_field_csv(std::ostream& os, const ScalarField& f) {
  const Grid& g = f.grid();
  os << "x,y,value\n";
  for (std::size_t j = 0; j < g.ny(); ++j) {
    for (std::size_t i = 0; i < g.nx(); ++i) {
      os << csv::format_double(g.x(i)) << ',' << csv::format_double(g.y(j)) << ','
         << csv::format_double(f.at(i, j)) << '\n';
    }
  }
}

void write_field_csv(const std::string& path, const ScalarField& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path + " for writing");
  write_field_csv(os, f);
}

ScalarField read_field_csv(const std::string& path, const Grid& grid) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ParseError("cannot open field file " + path);
  std::string line;
  if (!std::getline(is, line) || csv::trim(line) != "x,y,value") {
    throw ParseError(path + ": expected header 'x,y,value'");
  }
  std::vector<double> values;
  values.reserve(grid.size());
  while (std::getline(is, line)) {
    if (csv::trim(line).empty()) continue;
    const auto cols = csv::split(csv::trim(line));
    if (cols.size() != 3) throw ParseError(path + ": expected 3 columns in '" + line + "'");
    values.push_back(csv::parse_double(cols[2], "value"));
  }
  if (values.size() != grid.size()) {
    throw ParseError(path + ": " + std::to_string(values.size()) + " rows for a grid of " +
                     std::to_string(grid.size()) + " cells");
  }
  return ScalarField(grid, std::move(values));
}

}  // namespace hepasim
