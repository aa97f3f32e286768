#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "sllg/field.hpp"
#include "sllg/grid.hpp"

namespace sllg {

/// Fourier-collocation engine for one grid. Plans and wavenumber tables are
/// built once per grid and shared; all operations are pure functions of
/// their field arguments and may run concurrently.
///
/// Transform convention: the forward transform is unnormalized, the inverse
/// carries the 1/(nx*ny) factor. Real data uses the half-spectrum layout
/// ny x (nx/2+1), row-major with kx fastest.
///
/// Derivative symbols zero the Nyquist mode on the differentiated axis, and
/// the Laplacian symbol is the sum of squared derivative symbols, so
/// divergence(gradient(f)) == laplacian(f) holds with identical symbols.
class Spectral {
 public:
  using Complex = std::complex<double>;

  /// Shared per-grid instance (cached, thread-safe).
  static std::shared_ptr<const Spectral> get(const Grid& grid);

  ~Spectral();
  Spectral(const Spectral&) = delete;
  Spectral& operator=(const Spectral&) = delete;

  const Grid& grid() const { return grid_; }
  int nkx() const { return grid_.nx / 2 + 1; }
  int nky() const { return grid_.ny; }
  std::size_t nspec() const { return static_cast<std::size_t>(nkx()) * nky(); }

  // Wavenumber tables. Index j over ky rows, i over kx columns.
  double kx(int i) const { return kx_[i]; }          // derivative symbol, Nyquist zeroed
  double ky(int j) const { return ky_[j]; }
  double k2(int j, int i) const { return kx_[i] * kx_[i] + ky_[j] * ky_[j]; }
  /// |kappa| in units of the base frequency 2*pi/lx (dyadic ring radius).
  double ring_radius(int j, int i) const;
  bool kept(int j, int i) const { return dealias_mask_[idx(j, i)] != 0; }
  /// Largest |kappa| over modes kept by the 2/3 rule.
  double top_wavenumber() const { return kmax_kept_; }
  /// Largest ring radius over kept modes.
  double top_ring_radius() const { return rmax_kept_; }

  // Transforms on a single plane (buffers owned by caller).
  void forward(const double* in, Complex* out) const;
  /// Destroys `in`; output scaled by 1/(nx*ny).
  void backward(Complex* in, double* out) const;

  // Field operations.
  Field gradient(const Field& f) const;    // ncomp -> 2*ncomp, plane c*2+d
  Field divergence(const Field& F) const;  // 2*n -> n, contracts direction index
  Field laplacian(const Field& f) const;
  Field dealias(const Field& f) const;  // 2/3-rule truncation
  /// Pointwise real spectral multiplier, one value per (ky,kx) lattice site.
  Field apply_multiplier(const Field& f, const std::vector<double>& mult) const;
  /// Solves (1 - a*Laplacian) u = f, a >= 0.
  Field inverse_helmholtz(const Field& f, double a) const;

  double integrate(const Field& scalar) const;     // hx*hy * sum
  double inner(const Field& a, const Field& b) const;
  double l2_norm(const Field& f) const;            // sqrt(integral of |f|^2)
  double sup_pointwise_norm(const Field& f) const; // max_x sqrt(sum_c f_c^2)

 private:
  explicit Spectral(const Grid& grid);
  std::size_t idx(int j, int i) const { return static_cast<std::size_t>(j) * nkx() + i; }

  Grid grid_;
  std::vector<double> kx_, ky_;       // derivative symbols
  std::vector<char> dealias_mask_;    // per (ky,kx) site
  double kmax_kept_ = 0.0;
  double rmax_kept_ = 0.0;

  struct Plans;
  std::unique_ptr<Plans> plans_;
};

// Free-function façade used across the codebase; fetches the cached engine.
Field gradient(const Field& f);
Field divergence(const Field& F);
Field laplacian(const Field& f);
Field dealias(const Field& f);
double integrate(const Field& scalar);
double field_inner(const Field& a, const Field& b);
double l2_norm(const Field& f);
double sup_pointwise_norm(const Field& f);

/// Pointwise |f|^2 as a scalar field (summed over components).
Field pointwise_norm2(const Field& f);

/// Pointwise normalization m/|m|. Throws NearZeroVector if any |m| < rho_min.
/// Points already unit to a few ulps are passed through untouched, so
/// projection is idempotent and exact fixed points stay bit-stable.
Magnetization project_to_sphere(const Field& m, double rho_min = 1e-8,
                                double unit_tol = Magnetization::kDefaultTol);

/// Cross product c = a x b, pointwise over 3-component fields.
Field cross(const Field& a, const Field& b);
/// Dot product as a scalar field.
Field dot(const Field& a, const Field& b);

}  // namespace sllg
