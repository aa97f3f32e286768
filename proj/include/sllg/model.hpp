#pragma once

#include "sllg/field.hpp"
#include "sllg/spectral.hpp"

namespace sllg {

struct ModelParams {
  double alpha = 1.0;  // Gilbert damping, > 0
  double beta = 0.5;   // spin polarization, in (0,1); diffusion anisotropy
  bool dealias = true; // 2/3-rule truncation inside nonlinear RHS products

  void validate() const {
    if (!(alpha > 0.0))
      throw std::invalid_argument("ModelParams: alpha must be positive");
    if (!(beta > 0.0) || !(beta < 1.0))
      throw std::invalid_argument("ModelParams: beta must lie in (0,1)");
  }
  /// Midpoint of the diffusion spectrum [1-beta, 1]; the implicitly treated
  /// part of the spin diffusion.
  double mean_diffusivity() const { return 1.0 - 0.5 * beta; }
};

/// Symmetric 3x3 matrix field, six planes (a11,a12,a13,a22,a23,a33).
struct CoefficientTensor {
  Field comps;

  const Grid& grid() const { return comps.grid(); }
  /// out_{i,d} = sum_j (A_{ij} - shift*delta_{ij}) G_{j,d} for a rank-2 field G.
  Field apply(const Field& G, double shift = 0.0) const;
  /// Quadratic form xi^T A(x) xi at one grid point.
  double quad_form(std::size_t point, const double xi[3]) const;
  void entries(std::size_t point, double a[3][3]) const;
};

/// A(m) = I - beta m (x) m. Requires |m| = 1 pointwise (enforced by the
/// Magnetization type); its eigenvalues are then {1-beta, 1, 1}.
CoefficientTensor coefficient_tensor(const Magnetization& m, const ModelParams& p);

/// Right-hand side of the spin accumulation equation:
///   dt s = div(A(m) grad s) - s - s x m.
Field spin_rhs(const Field& s, const Magnetization& m, const ModelParams& p);

/// div((A(m) - shift*I) grad s); the explicitly treated deviation part of the
/// spin diffusion when shift = mean_diffusivity().
Field spin_flux_divergence(const Field& s, const Magnetization& m, const ModelParams& p,
                           double shift);

/// Landau-Lifshitz form of dt m:
///   (-m x (lap m + s) - alpha m x (m x (lap m + s))) / (1 + alpha^2).
/// Evaluated pointwise with no dealiasing, so m . rhs vanishes to rounding
/// for any input; kept as the cross-validation route.
Field m_rhs_landau_lifshitz(const Field& s, const Magnetization& m, const ModelParams& p);

/// Gilbert heat-flow form of dt m:
///   (alpha lap m + alpha |grad m|^2 m - m x (lap m + s) - alpha m x (m x s))
///   / (1 + alpha^2).
/// This is the form the integrator uses; it exposes the dissipative
/// alpha*lap(m) term. Nonlinear products are dealiased when p.dealias.
Field m_rhs_gilbert_heat(const Field& s, const Magnetization& m, const ModelParams& p);

/// Residuals of the discrete forms of the pointwise identities
///   m . lap m = -|grad m|^2     and     m x lap m = div(m x grad m),
/// which hold exactly for smooth unit fields. A discretization-quality gauge.
struct IdentityReport {
  double unit_laplacian_l2 = 0.0;  // || m.lap(m) + |grad m|^2 ||_2
  double unit_laplacian_sup = 0.0;
  double curl_form_l2 = 0.0;       // || m x lap m - div(m x grad m) ||_2
  double curl_form_sup = 0.0;
};
IdentityReport check_identities(const Magnetization& m);

}  // namespace sllg
