#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace hepasim {

/// Uniform cell-centered grid over the rectangle [0, lx] x [0, ly].
///
/// Cells are stored row-major: index = j * nx + i, where i runs along x.
class Grid {
 public:
  Grid(std::size_t nx, std::size_t ny, double lx = 1.0, double ly = 1.0);

  std::size_t nx() const noexcept { return nx_; }
  std::size_t ny() const noexcept { return ny_; }
  double lx() const noexcept { return lx_; }
  double ly() const noexcept { return ly_; }
  double hx() const noexcept { return lx_ / static_cast<double>(nx_); }
  double hy() const noexcept { return ly_ / static_cast<double>(ny_); }
  double cell_area() const noexcept { return hx() * hy(); }
  double area() const noexcept { return lx_ * ly_; }
  std::size_t size() const noexcept { return nx_ * ny_; }

  std::size_t index(std::size_t i, std::size_t j) const noexcept { return j * nx_ + i; }
  double x(std::size_t i) const noexcept { return (static_cast<double>(i) + 0.5) * hx(); }
  double y(std::size_t j) const noexcept { return (static_cast<double>(j) + 0.5) * hy(); }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t nx_;
  std::size_t ny_;
  double lx_;
  double ly_;
};

/// One real value per grid cell. All values are finite on construction.
class ScalarField {
 public:
  explicit ScalarField(const Grid& grid, double fill = 0.0);
  ScalarField(const Grid& grid, std::vector<double> values);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  double operator[](std::size_t k) const noexcept { return values_[k]; }
  double& operator[](std::size_t k) noexcept { return values_[k]; }
  double at(std::size_t i, std::size_t j) const noexcept { return values_[grid_.index(i, j)]; }
  double& at(std::size_t i, std::size_t j) noexcept { return values_[grid_.index(i, j)]; }

  double min() const noexcept;
  double max() const noexcept;
  double max_abs() const noexcept;
  bool all_finite() const noexcept;

 private:
  Grid grid_;
  std::vector<double> values_;
};

/// Disc-shaped portal region; the profile is the normalized characteristic function.
struct PortalSpec {
  double center_x = 1.0;
  double center_y = 1.0;
  double radius = 0.2;

  friend bool operator==(const PortalSpec&, const PortalSpec&) = default;
};

/// Discretized inflow profile chi together with its support mask.
struct PortalField {
  ScalarField chi;
  std::vector<unsigned char> mask;  // 1 for cells inside the portal
  std::size_t cell_count = 0;

  double chi_max() const noexcept { return chi.max(); }
};

/// Midpoint-rule integral of f over the domain.
double quadrature(const ScalarField& f);

/// 5-point Laplacian with mirrored ghost cells (zero normal flux on every face).
ScalarField laplacian_neumann(const ScalarField& f);

/// Writes the Laplacian of `in` into `out`; both must share the grid.
void apply_laplacian(const Grid& grid, std::span<const double> in, std::span<double> out);

/// Characteristic function of the cells whose centers lie in the disc,
/// scaled so that its quadrature is exactly one on this grid.
///
/// Throws EmptyPortal when no cell center lies inside the disc.
PortalField build_chi(const Grid& grid, const PortalSpec& spec);

/// CSV snapshot: header `x,y,value`, row-major by cell center, 17 significant digits.
void write_field_csv(std::ostream& os, const ScalarField& f);
void write_field_csv(const std::string& path, const ScalarField& f);

/// Reads a snapshot written by write_field_csv back onto `grid`.
/// Rows must appear in the same row-major order.
ScalarField read_field_csv(const std::string& path, const Grid& grid);

}  // namespace hepasim
