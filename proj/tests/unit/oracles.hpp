#pragma once

// Test-only oracles, kept independent of the spectral implementation paths
// they check: centered finite differences on the periodic grid and a dense
// Jacobi eigensolver for 3x3 symmetric matrices.

#include <cmath>
#include <cstdint>

#include "sllg/field.hpp"
#include "sllg/rng.hpp"

namespace oracle {

using sllg::Field;
using sllg::Grid;

inline Field fd_gradient(const Field& f) {
  const Grid& g = f.grid();
  Field out(g, f.ncomp() * 2);
  const double ix2 = 1.0 / (2.0 * g.hx());
  const double iy2 = 1.0 / (2.0 * g.hy());
  for (int c = 0; c < f.ncomp(); ++c) {
    const double* v = f.plane(c);
    double* gx = out.plane(c * 2 + 0);
    double* gy = out.plane(c * 2 + 1);
    for (int iy = 0; iy < g.ny; ++iy) {
      int ym = (iy + g.ny - 1) % g.ny, yp = (iy + 1) % g.ny;
      for (int ixx = 0; ixx < g.nx; ++ixx) {
        int xm = (ixx + g.nx - 1) % g.nx, xp = (ixx + 1) % g.nx;
        std::size_t i = static_cast<std::size_t>(iy) * g.nx + ixx;
        gx[i] = (v[static_cast<std::size_t>(iy) * g.nx + xp] -
                 v[static_cast<std::size_t>(iy) * g.nx + xm]) * ix2;
        gy[i] = (v[static_cast<std::size_t>(yp) * g.nx + ixx] -
                 v[static_cast<std::size_t>(ym) * g.nx + ixx]) * iy2;
      }
    }
  }
  return out;
}

inline Field fd_divergence(const Field& F) {
  const Grid& g = F.grid();
  Field out(g, F.ncomp() / 2);
  const double ix2 = 1.0 / (2.0 * g.hx());
  const double iy2 = 1.0 / (2.0 * g.hy());
  for (int c = 0; c < out.ncomp(); ++c) {
    const double* fx = F.plane(c * 2 + 0);
    const double* fy = F.plane(c * 2 + 1);
    double* o = out.plane(c);
    for (int iy = 0; iy < g.ny; ++iy) {
      int ym = (iy + g.ny - 1) % g.ny, yp = (iy + 1) % g.ny;
      for (int ixx = 0; ixx < g.nx; ++ixx) {
        int xm = (ixx + g.nx - 1) % g.nx, xp = (ixx + 1) % g.nx;
        std::size_t i = static_cast<std::size_t>(iy) * g.nx + ixx;
        o[i] = (fx[static_cast<std::size_t>(iy) * g.nx + xp] -
                fx[static_cast<std::size_t>(iy) * g.nx + xm]) * ix2 +
               (fy[static_cast<std::size_t>(yp) * g.nx + ixx] -
                fy[static_cast<std::size_t>(ym) * g.nx + ixx]) * iy2;
      }
    }
  }
  return out;
}

inline Field fd_laplacian(const Field& f) {
  const Grid& g = f.grid();
  Field out(g, f.ncomp());
  const double ax = 1.0 / (g.hx() * g.hx());
  const double ay = 1.0 / (g.hy() * g.hy());
  for (int c = 0; c < f.ncomp(); ++c) {
    const double* v = f.plane(c);
    double* o = out.plane(c);
    for (int iy = 0; iy < g.ny; ++iy) {
      int ym = (iy + g.ny - 1) % g.ny, yp = (iy + 1) % g.ny;
      for (int ixx = 0; ixx < g.nx; ++ixx) {
        int xm = (ixx + g.nx - 1) % g.nx, xp = (ixx + 1) % g.nx;
        std::size_t i = static_cast<std::size_t>(iy) * g.nx + ixx;
        double cc = v[i];
        o[i] = ax * (v[static_cast<std::size_t>(iy) * g.nx + xp] - 2.0 * cc +
                     v[static_cast<std::size_t>(iy) * g.nx + xm]) +
               ay * (v[static_cast<std::size_t>(yp) * g.nx + ixx] - 2.0 * cc +
                     v[static_cast<std::size_t>(ym) * g.nx + ixx]);
      }
    }
  }
  return out;
}

/// Cyclic Jacobi for a symmetric 3x3 matrix; eigenvalues ascending.
inline void jacobi_eigensystem_3x3(const double in[3][3], double evals[3],
                                   double evecs[3][3]) {
  double a[3][3];
  double v[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a[i][j] = in[i][j];

  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = std::fabs(a[0][1]) + std::fabs(a[0][2]) + std::fabs(a[1][2]);
    if (off < 1e-300) break;
    for (int p = 0; p < 2; ++p)
      for (int q = p + 1; q < 3; ++q) {
        if (std::fabs(a[p][q]) < 1e-300) continue;
        double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (int k = 0; k < 3; ++k) {
          double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (int k = 0; k < 3; ++k) {
          double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (int k = 0; k < 3; ++k) {
          double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
  }
  int order[3] = {0, 1, 2};
  for (int i = 0; i < 2; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (a[order[j]][order[j]] < a[order[i]][order[i]]) std::swap(order[i], order[j]);
  for (int i = 0; i < 3; ++i) {
    evals[i] = a[order[i]][order[i]];
    for (int k = 0; k < 3; ++k) evecs[k][i] = v[k][order[i]];
  }
}

/// Random trigonometric polynomial with |kx|,|ky| <= band, built directly in
/// physical space (test input generator, deterministic by seed).
inline Field random_band_field(const Grid& g, int band, int ncomp, std::uint64_t seed,
                               double amplitude = 1.0) {
  sllg::Rng rng(seed);
  Field out(g, ncomp);
  const double tau = 6.283185307179586476925286766559;
  const double norm =
      amplitude / std::sqrt(static_cast<double>((2 * band + 1) * (2 * band + 1)));
  for (int c = 0; c < ncomp; ++c) {
    double* p = out.plane(c);
    for (int ky = -band; ky <= band; ++ky)
      for (int kx = -band; kx <= band; ++kx) {
        double ca = rng.normal() * norm;
        double sa = rng.normal() * norm;
        if (kx == 0 && ky == 0) sa = 0.0;
        for (int iy = 0; iy < g.ny; ++iy)
          for (int ix = 0; ix < g.nx; ++ix) {
            double ph = tau * (kx * g.x(ix) / g.lx + ky * g.y(iy) / g.ly);
            p[static_cast<std::size_t>(iy) * g.nx + ix] +=
                ca * std::cos(ph) + sa * std::sin(ph);
          }
      }
  }
  return out;
}

/// Near-band-limited exactly-unit field: pointwise normalization of a small
/// band-limited perturbation of a constant direction. The function |m|^2 - 1
/// vanishes to ~1e-15 as a trigonometric identity, so the continuum unit-m
/// identities hold discretely to rounding.
inline Field random_unit_field(const Grid& g, std::uint64_t seed, double amplitude = 0.15,
                               int band = 1) {
  Field m = random_band_field(g, band, 3, seed, amplitude);
  sllg::Rng rng(seed ^ 0x9e3779b97f4a7c15ull);
  double dir[3];
  rng.unit_vector3(dir);
  for (int c = 0; c < 3; ++c) {
    double* p = m.plane(c);
    for (std::size_t i = 0; i < g.npoints(); ++i) p[i] += dir[c];
  }
  for (std::size_t i = 0; i < g.npoints(); ++i) {
    double x = m.plane(0)[i], y = m.plane(1)[i], z = m.plane(2)[i];
    double inv = 1.0 / std::sqrt(x * x + y * y + z * z);
    m.plane(0)[i] *= inv;
    m.plane(1)[i] *= inv;
    m.plane(2)[i] *= inv;
  }
  return m;
}

inline double sup_diff(const Field& a, const Field& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.raw().size(); ++i)
    worst = std::max(worst, std::fabs(a.raw()[i] - b.raw()[i]));
  return worst;
}

inline double sup_abs(const Field& a) {
  double worst = 0.0;
  for (double v : a.raw()) worst = std::max(worst, std::fabs(v));
  return worst;
}

}  // namespace oracle
