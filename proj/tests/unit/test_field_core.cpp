#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "sllg/spectral.hpp"

using namespace sllg;

namespace {
constexpr double kTau = 6.283185307179586476925286766559;

Field single_mode_x(const Grid& g, int k) {
  Field f(g, 3);
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix)
      f.at(0, iy, ix) = std::sin(kTau * k * g.x(ix) / g.lx);
  return f;
}
}  // namespace

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(Grid(48, 64), std::invalid_argument);
  CHECK_THROWS_AS(Grid(0, 64), std::invalid_argument);
  CHECK_THROWS_AS(Grid(64, 64, -1.0, 1.0), std::invalid_argument);
  Grid g(64, 32, 2.0, 1.0);
  CHECK(g.hx() == doctest::Approx(2.0 / 64));
  CHECK(g.npoints() == 2048);
}

TEST_CASE("gradient of a constant field vanishes") {
  Grid g(32, 32);
  Field f(g, 3);
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < g.npoints(); ++i) f.plane(c)[i] = 0.7 * (c + 1);
  CHECK(oracle::sup_abs(gradient(f)) < 1e-13);
}

TEST_CASE("gradient of a pure mode matches the analytic derivative") {
  for (double lx : {1.0, 2.5}) {
    Grid g(64, 64, lx, lx);
    Field f = single_mode_x(g, 1);
    Field grad = gradient(f);
    double scale = kTau / lx;
    double worst = 0.0;
    for (int iy = 0; iy < g.ny; ++iy)
      for (int ix = 0; ix < g.nx; ++ix) {
        double expect = scale * std::cos(kTau * g.x(ix) / lx);
        worst = std::max(worst, std::fabs(grad.at(0, iy, ix) - expect));
      }
    CHECK(worst / scale < 1e-12);
    // all other planes stay zero
    for (int c = 1; c < 6; ++c)
      if (c != 0)
        for (std::size_t i = 0; i < g.npoints(); ++i)
          CHECK(std::fabs(grad.plane(c)[i]) < 1e-12 * scale);
  }
}

TEST_CASE("gradient agrees with centered differences at O(h^2)") {
  double err[3];
  int idx = 0;
  for (int n : {32, 64, 128}) {
    Grid g(n, n);
    Field f = oracle::random_band_field(g, 3, 2, 42);
    err[idx++] = oracle::sup_diff(gradient(f), oracle::fd_gradient(f));
  }
  CHECK(std::log2(err[0] / err[1]) > 1.8);
  CHECK(std::log2(err[1] / err[2]) > 1.8);
}

TEST_CASE("laplacian eigenvalue on pure modes") {
  Grid g(64, 64, 1.0, 1.0);
  Field f = single_mode_x(g, 3);
  Field lap = laplacian(f);
  double ev = -std::pow(kTau * 3.0, 2);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.npoints(); ++i)
    worst = std::max(worst, std::fabs(lap.plane(0)[i] - ev * f.plane(0)[i]));
  CHECK(worst / std::fabs(ev) < 1e-12);

  Field c(g, 1);
  for (std::size_t i = 0; i < g.npoints(); ++i) c.plane(0)[i] = 4.2;
  CHECK(oracle::sup_abs(laplacian(c)) < 1e-12);
}

TEST_CASE("laplacian agrees with the 5-point stencil at O(h^2)") {
  double err[3];
  int idx = 0;
  for (int n : {32, 64, 128}) {
    Grid g(n, n);
    Field f = oracle::random_band_field(g, 3, 1, 7);
    err[idx++] = oracle::sup_diff(laplacian(f), oracle::fd_laplacian(f));
  }
  CHECK(std::log2(err[0] / err[1]) > 1.8);
  CHECK(std::log2(err[1] / err[2]) > 1.8);
}

TEST_CASE("divergence of gradient is exactly the laplacian") {
  Grid g(64, 32, 1.0, 0.5);
  // Full-spectrum random data: the operators share symbols by construction.
  Rng rng(11);
  Field f(g, 3);
  for (double& v : f.raw()) v = rng.normal();
  Field a = divergence(gradient(f));
  Field b = laplacian(f);
  double scale = oracle::sup_abs(b) + 1.0;
  CHECK(oracle::sup_diff(a, b) / scale < 1e-12);
}

TEST_CASE("divergence: constant tensor field and shape checks") {
  Grid g(32, 32);
  Field F(g, 6);
  for (int c = 0; c < 6; ++c)
    for (std::size_t i = 0; i < g.npoints(); ++i) F.plane(c)[i] = c - 2.5;
  CHECK(oracle::sup_abs(divergence(F)) < 1e-12);

  Field odd(g, 3);
  CHECK_THROWS_AS(divergence(odd), GridMismatch);
}

TEST_CASE("divergence agrees with centered differences at O(h^2)") {
  double err[3];
  int idx = 0;
  for (int n : {32, 64, 128}) {
    Grid g(n, n);
    Field F = oracle::random_band_field(g, 3, 6, 13);
    err[idx++] = oracle::sup_diff(divergence(F), oracle::fd_divergence(F));
  }
  CHECK(std::log2(err[0] / err[1]) > 1.8);
  CHECK(std::log2(err[1] / err[2]) > 1.8);
}

TEST_CASE("integrate: exact values and periodicity") {
  Grid g(64, 64, 2.0, 1.5);
  Field one(g, 1);
  for (double& v : one.raw()) v = 1.0;
  CHECK(integrate(one) == doctest::Approx(3.0).epsilon(1e-14));

  Field s2(g, 1);
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix)
      s2.at(0, iy, ix) = std::pow(std::sin(kTau * g.x(ix) / g.lx), 2);
  CHECK(std::fabs(integrate(s2) - 0.5 * g.area()) < 1e-12 * g.area());

  Field f = oracle::random_band_field(g, 4, 1, 99);
  for (double& v : f.raw()) v = v * v;  // nonnegative
  CHECK(integrate(f) >= 0.0);

  Field h = oracle::random_band_field(g, 5, 1, 100);
  Field dh = gradient(h);
  Field dx_only(g, 1);
  for (std::size_t i = 0; i < g.npoints(); ++i) dx_only.plane(0)[i] = dh.plane(0)[i];
  CHECK(std::fabs(integrate(dx_only)) < 1e-10 * l2_norm(h));
}

TEST_CASE("project_to_sphere") {
  Grid g(16, 16);

  SUBCASE("scales (2,0,0) to (1,0,0)") {
    Field m(g, 3);
    for (std::size_t i = 0; i < g.npoints(); ++i) m.plane(0)[i] = 2.0;
    Magnetization p = project_to_sphere(m);
    for (std::size_t i = 0; i < g.npoints(); ++i) {
      CHECK(p.field().plane(0)[i] == doctest::Approx(1.0).epsilon(1e-15));
      CHECK(p.field().plane(1)[i] == 0.0);
    }
  }

  SUBCASE("random magnitudes in [0.5,2] normalize to 1e-15 and idempotently") {
    Rng rng(5);
    Field m(g, 3);
    for (std::size_t i = 0; i < g.npoints(); ++i) {
      double v[3];
      rng.unit_vector3(v);
      double r = rng.uniform(0.5, 2.0);
      m.plane(0)[i] = r * v[0];
      m.plane(1)[i] = r * v[1];
      m.plane(2)[i] = r * v[2];
    }
    Magnetization p = project_to_sphere(m);
    CHECK(max_unit_norm_error(p.field()) < 1e-15);
    Magnetization q = project_to_sphere(p.field());
    CHECK(q.field().raw() == p.field().raw());  // bitwise fixed point
  }

  SUBCASE("near-zero vector rejected") {
    Field m(g, 3);
    m.plane(2)[5] = 1e-9;
    for (std::size_t i = 0; i < g.npoints(); ++i)
      if (i != 5) m.plane(2)[i] = 1.0;
    CHECK_THROWS_AS(project_to_sphere(m), NearZeroVector);
  }

  SUBCASE("1-Lipschitz outside the unit ball") {
    Rng rng(17);
    for (int trial = 0; trial < 1000; ++trial) {
      double u[3], v[3];
      rng.unit_vector3(u);
      rng.unit_vector3(v);
      double ru = rng.uniform(1.0, 3.0), rv = rng.uniform(1.0, 3.0);
      Field fu(Grid(2, 2), 3), fv(Grid(2, 2), 3);
      for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < 4; ++i) {
          fu.plane(c)[i] = ru * u[c];
          fv.plane(c)[i] = rv * v[c];
        }
      Field pu = project_to_sphere(fu).field();
      Field pv = project_to_sphere(fv).field();
      double before = 0.0, after = 0.0;
      for (int c = 0; c < 3; ++c) {
        before += std::pow(ru * u[c] - rv * v[c], 2);
        after += std::pow(pu.plane(c)[0] - pv.plane(c)[0], 2);
      }
      CHECK(std::sqrt(after) <= std::sqrt(before) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("non-finite inputs are rejected") {
  Grid g(16, 16);
  Field f(g, 3);
  f.plane(1)[3] = std::nan("");
  CHECK_THROWS_AS(gradient(f), NonFiniteField);
  CHECK_THROWS_AS(laplacian(f), NonFiniteField);
  Field s(g, 1);
  s.plane(0)[0] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(integrate(s), NonFiniteField);
}

TEST_CASE("dealias keeps low modes and removes the top third") {
  Grid g(64, 64);
  Field low = oracle::random_band_field(g, 5, 1, 3);
  CHECK(oracle::sup_diff(dealias(low), low) < 1e-12);

  Field high(g, 1);
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix)
      high.at(0, iy, ix) = std::cos(kTau * 30 * g.x(ix) / g.lx);
  CHECK(oracle::sup_abs(dealias(high)) < 1e-12);
}
