#include "sllg/model.hpp"

#include <cmath>

namespace sllg {

namespace {
// Dealias a freshly formed nonlinear product when the model asks for it.
Field nl(Field f, const ModelParams& p) {
  if (!p.dealias) return f;
  return dealias(f);
}
}  // namespace

Field CoefficientTensor::apply(const Field& G, double shift) const {
  require_ncomp(G, 6, "CoefficientTensor::apply");
  require_same_grid(G, comps, "CoefficientTensor::apply");
  Field out(G.grid(), 6);
  const double* a11 = comps.plane(0);
  const double* a12 = comps.plane(1);
  const double* a13 = comps.plane(2);
  const double* a22 = comps.plane(3);
  const double* a23 = comps.plane(4);
  const double* a33 = comps.plane(5);
  for (int d = 0; d < 2; ++d) {
    const double* g1 = G.plane(0 * 2 + d);
    const double* g2 = G.plane(1 * 2 + d);
    const double* g3 = G.plane(2 * 2 + d);
    double* o1 = out.plane(0 * 2 + d);
    double* o2 = out.plane(1 * 2 + d);
    double* o3 = out.plane(2 * 2 + d);
    for (std::size_t i = 0; i < comps.grid().npoints(); ++i) {
      o1[i] = (a11[i] - shift) * g1[i] + a12[i] * g2[i] + a13[i] * g3[i];
      o2[i] = a12[i] * g1[i] + (a22[i] - shift) * g2[i] + a23[i] * g3[i];
      o3[i] = a13[i] * g1[i] + a23[i] * g2[i] + (a33[i] - shift) * g3[i];
    }
  }
  return out;
}

double CoefficientTensor::quad_form(std::size_t i, const double xi[3]) const {
  const double* a11 = comps.plane(0);
  const double* a12 = comps.plane(1);
  const double* a13 = comps.plane(2);
  const double* a22 = comps.plane(3);
  const double* a23 = comps.plane(4);
  const double* a33 = comps.plane(5);
  return a11[i] * xi[0] * xi[0] + a22[i] * xi[1] * xi[1] + a33[i] * xi[2] * xi[2] +
         2.0 * (a12[i] * xi[0] * xi[1] + a13[i] * xi[0] * xi[2] + a23[i] * xi[1] * xi[2]);
}

void CoefficientTensor::entries(std::size_t i, double a[3][3]) const {
  a[0][0] = comps.plane(0)[i];
  a[0][1] = a[1][0] = comps.plane(1)[i];
  a[0][2] = a[2][0] = comps.plane(2)[i];
  a[1][1] = comps.plane(3)[i];
  a[1][2] = a[2][1] = comps.plane(4)[i];
  a[2][2] = comps.plane(5)[i];
}

CoefficientTensor coefficient_tensor(const Magnetization& m, const ModelParams& p) {
  p.validate();
  const Field& f = m.field();
  CoefficientTensor A{Field(f.grid(), 6)};
  const double* mx = f.plane(0);
  const double* my = f.plane(1);
  const double* mz = f.plane(2);
  const double b = p.beta;
  for (std::size_t i = 0; i < f.grid().npoints(); ++i) {
    A.comps.plane(0)[i] = 1.0 - b * mx[i] * mx[i];
    A.comps.plane(1)[i] = -b * mx[i] * my[i];
    A.comps.plane(2)[i] = -b * mx[i] * mz[i];
    A.comps.plane(3)[i] = 1.0 - b * my[i] * my[i];
    A.comps.plane(4)[i] = -b * my[i] * mz[i];
    A.comps.plane(5)[i] = 1.0 - b * mz[i] * mz[i];
  }
  return A;
}

Field spin_flux_divergence(const Field& s, const Magnetization& m, const ModelParams& p,
                           double shift) {
  require_ncomp(s, 3, "spin_flux_divergence");
  require_same_grid(s, m.field(), "spin_flux_divergence");
  CoefficientTensor A = coefficient_tensor(m, p);
  Field flux = nl(A.apply(gradient(s), shift), p);
  return divergence(flux);
}

Field spin_rhs(const Field& s, const Magnetization& m, const ModelParams& p) {
  Field out = spin_flux_divergence(s, m, p, 0.0);
  out -= s;
  out -= cross(s, m.field());
  return out;
}

Field m_rhs_landau_lifshitz(const Field& s, const Magnetization& m, const ModelParams& p) {
  p.validate();
  require_ncomp(s, 3, "m_rhs_landau_lifshitz");
  require_same_grid(s, m.field(), "m_rhs_landau_lifshitz");
  Field h = laplacian(m.field());
  h += s;
  Field mxh = cross(m.field(), h);
  Field out = cross(m.field(), mxh);
  out *= -p.alpha;
  out -= mxh;
  out *= 1.0 / (1.0 + p.alpha * p.alpha);
  return out;
}

Field m_rhs_gilbert_heat(const Field& s, const Magnetization& m, const ModelParams& p) {
  p.validate();
  require_ncomp(s, 3, "m_rhs_gilbert_heat");
  require_same_grid(s, m.field(), "m_rhs_gilbert_heat");
  const Field& mf = m.field();
  const double a = p.alpha;

  Field lap_m = laplacian(mf);
  Field grad_m = gradient(mf);
  // |grad m|^2 dealiased before multiplying by m; the cubic term drives the
  // energy-identity residual.
  Field g2 = nl(pointwise_norm2(grad_m), p);
  Field cubic(mf.grid(), 3);
  for (int c = 0; c < 3; ++c) {
    const double* g = g2.plane(0);
    const double* mc = mf.plane(c);
    double* o = cubic.plane(c);
    for (std::size_t i = 0; i < mf.grid().npoints(); ++i) o[i] = g[i] * mc[i];
  }

  Field h = lap_m;
  h += s;
  Field precession = nl(cross(mf, h), p);
  Field damping = nl(cross(mf, nl(cross(mf, s), p)), p);

  Field out = lap_m;
  out *= a;
  out.axpy(a, cubic);
  out -= precession;
  out.axpy(-a, damping);
  out *= 1.0 / (1.0 + a * a);
  return out;
}

IdentityReport check_identities(const Magnetization& m) {
  const Field& mf = m.field();
  Field lap_m = laplacian(mf);
  Field grad_m = gradient(mf);

  Field r1 = dot(mf, lap_m);
  r1 += pointwise_norm2(grad_m);

  // m x grad m, per direction
  Field mxg(mf.grid(), 6);
  for (int d = 0; d < 2; ++d) {
    const double* m0 = mf.plane(0);
    const double* m1 = mf.plane(1);
    const double* m2 = mf.plane(2);
    const double* g0 = grad_m.plane(0 * 2 + d);
    const double* g1 = grad_m.plane(1 * 2 + d);
    const double* g2 = grad_m.plane(2 * 2 + d);
    double* o0 = mxg.plane(0 * 2 + d);
    double* o1 = mxg.plane(1 * 2 + d);
    double* o2 = mxg.plane(2 * 2 + d);
    for (std::size_t i = 0; i < mf.grid().npoints(); ++i) {
      o0[i] = m1[i] * g2[i] - m2[i] * g1[i];
      o1[i] = m2[i] * g0[i] - m0[i] * g2[i];
      o2[i] = m0[i] * g1[i] - m1[i] * g0[i];
    }
  }
  Field r2 = cross(mf, lap_m);
  r2 -= divergence(mxg);

  IdentityReport rep;
  rep.unit_laplacian_l2 = l2_norm(r1);
  rep.unit_laplacian_sup = sup_pointwise_norm(r1);
  rep.curl_form_l2 = l2_norm(r2);
  rep.curl_form_sup = sup_pointwise_norm(r2);
  return rep;
}

}  // namespace sllg
