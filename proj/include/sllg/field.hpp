#pragma once

#include <cmath>
#include <cstring>
#include <vector>

#include "sllg/errors.hpp"
#include "sllg/grid.hpp"

namespace sllg {

/// A multi-component grid function. Components are stored as contiguous
/// planes; within a plane the layout is row-major with x fastest:
/// value(c, iy, ix) = data[(c*ny + iy)*nx + ix].
///
/// Vector fields over R^3 use ncomp = 3, rank-2 (gradient) fields use
/// ncomp = 2*n with plane index c*2 + direction, symmetric 3x3 tensor
/// fields use ncomp = 6.
class Field {
 public:
  Field() = default;
  Field(const Grid& grid, int ncomp)
      : grid_(grid), ncomp_(ncomp), data_(grid.npoints() * ncomp, 0.0) {
    if (ncomp <= 0) throw std::invalid_argument("Field: ncomp must be positive");
  }

  const Grid& grid() const { return grid_; }
  int ncomp() const { return ncomp_; }
  std::size_t size() const { return data_.size(); }

  double* plane(int c) { return data_.data() + static_cast<std::size_t>(c) * grid_.npoints(); }
  const double* plane(int c) const {
    return data_.data() + static_cast<std::size_t>(c) * grid_.npoints();
  }

  double& at(int c, int iy, int ix) {
    return data_[(static_cast<std::size_t>(c) * grid_.ny + iy) * grid_.nx + ix];
  }
  double at(int c, int iy, int ix) const {
    return data_[(static_cast<std::size_t>(c) * grid_.ny + iy) * grid_.nx + ix];
  }

  std::vector<double>& raw() { return data_; }
  const std::vector<double>& raw() const { return data_; }

  bool finite() const {
    for (double v : data_)
      if (!std::isfinite(v)) return false;
    return true;
  }

  Field& operator+=(const Field& o) { return combine(o, +1.0); }
  Field& operator-=(const Field& o) { return combine(o, -1.0); }
  Field& operator*=(double a) {
    for (double& v : data_) v *= a;
    return *this;
  }
  /// this += a*o
  Field& axpy(double a, const Field& o) { return combine(o, a); }

  bool operator==(const Field&) const = default;

 private:
  Field& combine(const Field& o, double a) {
    if (o.grid_ != grid_ || o.ncomp_ != ncomp_)
      throw GridMismatch("Field: shape mismatch in arithmetic");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += a * o.data_[i];
    return *this;
  }

  Grid grid_;
  int ncomp_ = 0;
  std::vector<double> data_;
};

inline Field operator+(Field a, const Field& b) { return a += b; }
inline Field operator-(Field a, const Field& b) { return a -= b; }
inline Field operator*(double s, Field a) { return a *= s; }

inline void require_finite(const Field& f, const char* op) {
  if (!f.finite()) throw NonFiniteField(std::string(op) + ": non-finite input field");
}

inline void require_ncomp(const Field& f, int n, const char* op) {
  if (f.ncomp() != n)
    throw GridMismatch(std::string(op) + ": expected " + std::to_string(n) +
                       " components, got " + std::to_string(f.ncomp()));
}

inline void require_same_grid(const Field& a, const Field& b, const char* op) {
  if (a.grid() != b.grid()) throw GridMismatch(std::string(op) + ": grid mismatch");
}

/// Largest pointwise | |m| - 1 | over the grid; the unit-sphere constraint gauge.
inline double max_unit_norm_error(const Field& m) {
  require_ncomp(m, 3, "max_unit_norm_error");
  const double* x = m.plane(0);
  const double* y = m.plane(1);
  const double* z = m.plane(2);
  double worst = 0.0;
  for (std::size_t i = 0; i < m.grid().npoints(); ++i) {
    double err = std::fabs(std::sqrt(x[i] * x[i] + y[i] * y[i] + z[i] * z[i]) - 1.0);
    if (err > worst) worst = err;
  }
  return worst;
}

/// A 3-component field constrained to the unit sphere pointwise.
/// Construct through project_to_sphere() or adopt_checked().
class Magnetization {
 public:
  static constexpr double kDefaultTol = 1e-12;

  static Magnetization adopt_checked(Field f, double tol = kDefaultTol) {
    require_ncomp(f, 3, "Magnetization");
    require_finite(f, "Magnetization");
    double err = max_unit_norm_error(f);
    if (err > tol)
      throw ConstraintViolation("Magnetization: | |m|-1 | = " + std::to_string(err) +
                                " exceeds tolerance");
    return Magnetization(std::move(f));
  }

  /// For integrator internals that re-establish the constraint themselves.
  static Magnetization adopt_unchecked(Field f) { return Magnetization(std::move(f)); }

  const Field& field() const { return f_; }
  operator const Field&() const { return f_; }
  const Grid& grid() const { return f_.grid(); }

 private:
  explicit Magnetization(Field f) : f_(std::move(f)) {}
  Field f_;
};

}  // namespace sllg
