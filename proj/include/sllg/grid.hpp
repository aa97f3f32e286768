#pragma once

#include <cstddef>
#include <stdexcept>

namespace sllg {

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

/// Flat torus [0,lx) x [0,ly) sampled on an nx x ny collocation grid.
/// Point counts must be powers of two so dyadic frequency shells align
/// with the transform sizes.
struct Grid {
  int nx = 0;
  int ny = 0;
  double lx = 1.0;
  double ly = 1.0;

  Grid() = default;
  Grid(int nx_, int ny_, double lx_ = 1.0, double ly_ = 1.0)
      : nx(nx_), ny(ny_), lx(lx_), ly(ly_) {
    if (!is_power_of_two(nx) || !is_power_of_two(ny))
      throw std::invalid_argument("Grid: nx, ny must be powers of two");
    if (!(lx > 0.0) || !(ly > 0.0))
      throw std::invalid_argument("Grid: side lengths must be positive");
  }

  double hx() const { return lx / nx; }
  double hy() const { return ly / ny; }
  std::size_t npoints() const {
    return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
  }
  double area() const { return lx * ly; }
  double cell_area() const { return hx() * hy(); }

  double x(int ix) const { return hx() * ix; }
  double y(int iy) const { return hy() * iy; }

  bool operator==(const Grid&) const = default;
};

}  // namespace sllg
