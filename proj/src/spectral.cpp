#include "sllg/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace sllg {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// FFTW planning is not thread-safe; executions through the new-array API are.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n) : p(fftw_malloc(n)) {
    if (!p) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(p); }
  FftwBuffer(const FftwBuffer&) = delete;
  void* p;
};

}  // namespace

struct Spectral::Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
  ~Plans() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (r2c) fftw_destroy_plan(r2c);
    if (c2r) fftw_destroy_plan(c2r);
  }
};

Spectral::Spectral(const Grid& grid) : grid_(grid), plans_(new Plans) {
  const int nx = grid_.nx, ny = grid_.ny;

  kx_.resize(nkx());
  for (int i = 0; i < nkx(); ++i) {
    kx_[i] = (i == nx / 2) ? 0.0 : kTwoPi * i / grid_.lx;  // Nyquist zeroed
  }
  ky_.resize(ny);
  for (int j = 0; j < ny; ++j) {
    int k = (j <= ny / 2) ? j : j - ny;
    ky_[j] = (j == ny / 2) ? 0.0 : kTwoPi * k / grid_.ly;
  }

  // 2/3-rule mask, per axis: keep |k'| <= n/3.
  const int cutx = nx / 3, cuty = ny / 3;
  dealias_mask_.assign(nspec(), 0);
  for (int j = 0; j < ny; ++j) {
    int kyi = (j <= ny / 2) ? j : j - ny;
    for (int i = 0; i < nkx(); ++i) {
      bool keep = std::abs(kyi) <= cuty && i <= cutx;
      dealias_mask_[idx(j, i)] = keep ? 1 : 0;
      if (keep) {
        double kk = std::sqrt(k2(j, i));
        kmax_kept_ = std::max(kmax_kept_, kk);
        rmax_kept_ = std::max(rmax_kept_, ring_radius(j, i));
      }
    }
  }

  FftwBuffer rbuf(sizeof(double) * grid_.npoints());
  FftwBuffer cbuf(sizeof(fftw_complex) * nspec());
  std::lock_guard<std::mutex> lock(planner_mutex());
  plans_->r2c = fftw_plan_dft_r2c_2d(ny, nx, static_cast<double*>(rbuf.p),
                                     static_cast<fftw_complex*>(cbuf.p), FFTW_ESTIMATE);
  plans_->c2r = fftw_plan_dft_c2r_2d(ny, nx, static_cast<fftw_complex*>(cbuf.p),
                                     static_cast<double*>(rbuf.p), FFTW_ESTIMATE);
  if (!plans_->r2c || !plans_->c2r) throw std::runtime_error("Spectral: FFTW planning failed");
}

Spectral::~Spectral() = default;

double Spectral::ring_radius(int j, int i) const {
  const double xi0 = kTwoPi / grid_.lx;
  return std::sqrt(k2(j, i)) / xi0;
}

std::shared_ptr<const Spectral> Spectral::get(const Grid& grid) {
  struct Key {
    int nx, ny;
    double lx, ly;
    bool operator<(const Key& o) const {
      return std::tie(nx, ny, lx, ly) < std::tie(o.nx, o.ny, o.lx, o.ly);
    }
  };
  static std::map<Key, std::shared_ptr<const Spectral>> cache;
  static std::mutex mu;
  Key key{grid.nx, grid.ny, grid.lx, grid.ly};
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto sp = std::shared_ptr<const Spectral>(new Spectral(grid));
  cache.emplace(key, sp);
  return sp;
}

void Spectral::forward(const double* in, Complex* out) const {
  // Out-of-place r2c preserves its input.
  fftw_execute_dft_r2c(plans_->r2c, const_cast<double*>(in),
                       reinterpret_cast<fftw_complex*>(out));
}

void Spectral::backward(Complex* in, double* out) const {
  fftw_execute_dft_c2r(plans_->c2r, reinterpret_cast<fftw_complex*>(in), out);
  const double scale = 1.0 / static_cast<double>(grid_.npoints());
  for (std::size_t i = 0; i < grid_.npoints(); ++i) out[i] *= scale;
}

namespace {
struct SpecScratch {
  explicit SpecScratch(std::size_t nspec)
      : buf(sizeof(fftw_complex) * nspec),
        a(static_cast<Spectral::Complex*>(buf.p)) {}
  FftwBuffer buf;
  Spectral::Complex* a;
};
}  // namespace

Field Spectral::gradient(const Field& f) const {
  require_finite(f, "gradient");
  Field out(grid_, f.ncomp() * 2);
  SpecScratch fh(nspec()), gh(nspec());
  for (int c = 0; c < f.ncomp(); ++c) {
    forward(f.plane(c), fh.a);
    // d/dx
    for (int j = 0; j < nky(); ++j)
      for (int i = 0; i < nkx(); ++i)
        gh.a[idx(j, i)] = Complex(0.0, kx_[i]) * fh.a[idx(j, i)];
    backward(gh.a, out.plane(c * 2 + 0));
    // d/dy
    for (int j = 0; j < nky(); ++j)
      for (int i = 0; i < nkx(); ++i)
        gh.a[idx(j, i)] = Complex(0.0, ky_[j]) * fh.a[idx(j, i)];
    backward(gh.a, out.plane(c * 2 + 1));
  }
  return out;
}

Field Spectral::divergence(const Field& F) const {
  require_finite(F, "divergence");
  if (F.ncomp() % 2 != 0)
    throw GridMismatch("divergence: rank-2 field must have 2*n components");
  Field out(grid_, F.ncomp() / 2);
  SpecScratch xh(nspec()), yh(nspec());
  for (int c = 0; c < out.ncomp(); ++c) {
    forward(F.plane(c * 2 + 0), xh.a);
    forward(F.plane(c * 2 + 1), yh.a);
    for (int j = 0; j < nky(); ++j)
      for (int i = 0; i < nkx(); ++i) {
        std::size_t s = idx(j, i);
        xh.a[s] = Complex(0.0, kx_[i]) * xh.a[s] + Complex(0.0, ky_[j]) * yh.a[s];
      }
    backward(xh.a, out.plane(c));
  }
  return out;
}

Field Spectral::laplacian(const Field& f) const {
  require_finite(f, "laplacian");
  Field out(grid_, f.ncomp());
  SpecScratch fh(nspec());
  for (int c = 0; c < f.ncomp(); ++c) {
    forward(f.plane(c), fh.a);
    for (int j = 0; j < nky(); ++j)
      for (int i = 0; i < nkx(); ++i) fh.a[idx(j, i)] *= -k2(j, i);
    backward(fh.a, out.plane(c));
  }
  return out;
}

Field Spectral::dealias(const Field& f) const {
  require_finite(f, "dealias");
  Field out(grid_, f.ncomp());
  SpecScratch fh(nspec());
  for (int c = 0; c < f.ncomp(); ++c) {
    forward(f.plane(c), fh.a);
    for (std::size_t s = 0; s < nspec(); ++s)
      if (!dealias_mask_[s]) fh.a[s] = 0.0;
    backward(fh.a, out.plane(c));
  }
  return out;
}

Field Spectral::apply_multiplier(const Field& f, const std::vector<double>& mult) const {
  require_finite(f, "apply_multiplier");
  if (mult.size() != nspec())
    throw std::invalid_argument("apply_multiplier: multiplier size mismatch");
  Field out(grid_, f.ncomp());
  SpecScratch fh(nspec());
  for (int c = 0; c < f.ncomp(); ++c) {
    forward(f.plane(c), fh.a);
    for (std::size_t s = 0; s < nspec(); ++s) fh.a[s] *= mult[s];
    backward(fh.a, out.plane(c));
  }
  return out;
}

Field Spectral::inverse_helmholtz(const Field& f, double a) const {
  require_finite(f, "inverse_helmholtz");
  if (a < 0.0) throw std::invalid_argument("inverse_helmholtz: a must be nonnegative");
  Field out(grid_, f.ncomp());
  SpecScratch fh(nspec());
  for (int c = 0; c < f.ncomp(); ++c) {
    forward(f.plane(c), fh.a);
    for (int j = 0; j < nky(); ++j)
      for (int i = 0; i < nkx(); ++i) fh.a[idx(j, i)] /= 1.0 + a * k2(j, i);
    backward(fh.a, out.plane(c));
  }
  return out;
}

double Spectral::integrate(const Field& scalar) const {
  require_ncomp(scalar, 1, "integrate");
  require_finite(scalar, "integrate");
  const double* v = scalar.plane(0);
  double sum = 0.0;
  for (std::size_t i = 0; i < grid_.npoints(); ++i) sum += v[i];
  return sum * grid_.cell_area();
}

double Spectral::inner(const Field& a, const Field& b) const {
  require_same_grid(a, b, "inner");
  if (a.ncomp() != b.ncomp()) throw GridMismatch("inner: component mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a.raw()[i] * b.raw()[i];
  return sum * grid_.cell_area();
}

double Spectral::l2_norm(const Field& f) const { return std::sqrt(inner(f, f)); }

double Spectral::sup_pointwise_norm(const Field& f) const {
  double worst = 0.0;
  for (std::size_t i = 0; i < grid_.npoints(); ++i) {
    double n2 = 0.0;
    for (int c = 0; c < f.ncomp(); ++c) {
      double v = f.plane(c)[i];
      n2 += v * v;
    }
    worst = std::max(worst, n2);
  }
  return std::sqrt(worst);
}

Field gradient(const Field& f) { return Spectral::get(f.grid())->gradient(f); }
Field divergence(const Field& F) { return Spectral::get(F.grid())->divergence(F); }
Field laplacian(const Field& f) { return Spectral::get(f.grid())->laplacian(f); }
Field dealias(const Field& f) { return Spectral::get(f.grid())->dealias(f); }
double integrate(const Field& scalar) { return Spectral::get(scalar.grid())->integrate(scalar); }
double field_inner(const Field& a, const Field& b) {
  return Spectral::get(a.grid())->inner(a, b);
}
double l2_norm(const Field& f) { return Spectral::get(f.grid())->l2_norm(f); }
double sup_pointwise_norm(const Field& f) {
  return Spectral::get(f.grid())->sup_pointwise_norm(f);
}

Field pointwise_norm2(const Field& f) {
  Field out(f.grid(), 1);
  double* o = out.plane(0);
  for (std::size_t i = 0; i < f.grid().npoints(); ++i) {
    double n2 = 0.0;
    for (int c = 0; c < f.ncomp(); ++c) {
      double v = f.plane(c)[i];
      n2 += v * v;
    }
    o[i] = n2;
  }
  return out;
}

Magnetization project_to_sphere(const Field& m, double rho_min, double unit_tol) {
  require_ncomp(m, 3, "project_to_sphere");
  require_finite(m, "project_to_sphere");
  Field out = m;
  double* x = out.plane(0);
  double* y = out.plane(1);
  double* z = out.plane(2);
  const double floor2 = rho_min * rho_min;
  // Points already unit to a few ulps pass through, so exact unit data is a
  // bitwise fixed point of the projection.
  const double skip = 8.0 * std::numeric_limits<double>::epsilon();
  for (std::size_t i = 0; i < out.grid().npoints(); ++i) {
    double n2 = x[i] * x[i] + y[i] * y[i] + z[i] * z[i];
    if (n2 < floor2)
      throw NearZeroVector("project_to_sphere: |m| fell below " + std::to_string(rho_min));
    if (std::fabs(n2 - 1.0) <= skip) continue;
    double inv = 1.0 / std::sqrt(n2);
    x[i] *= inv;
    y[i] *= inv;
    z[i] *= inv;
  }
  return Magnetization::adopt_checked(std::move(out), unit_tol);
}

Field cross(const Field& a, const Field& b) {
  require_ncomp(a, 3, "cross");
  require_ncomp(b, 3, "cross");
  require_same_grid(a, b, "cross");
  Field out(a.grid(), 3);
  const double *a0 = a.plane(0), *a1 = a.plane(1), *a2 = a.plane(2);
  const double *b0 = b.plane(0), *b1 = b.plane(1), *b2 = b.plane(2);
  double *o0 = out.plane(0), *o1 = out.plane(1), *o2 = out.plane(2);
  for (std::size_t i = 0; i < a.grid().npoints(); ++i) {
    o0[i] = a1[i] * b2[i] - a2[i] * b1[i];
    o1[i] = a2[i] * b0[i] - a0[i] * b2[i];
    o2[i] = a0[i] * b1[i] - a1[i] * b0[i];
  }
  return out;
}

Field dot(const Field& a, const Field& b) {
  require_same_grid(a, b, "dot");
  if (a.ncomp() != b.ncomp()) throw GridMismatch("dot: component mismatch");
  Field out(a.grid(), 1);
  double* o = out.plane(0);
  for (std::size_t i = 0; i < a.grid().npoints(); ++i) {
    double s = 0.0;
    for (int c = 0; c < a.ncomp(); ++c) s += a.plane(c)[i] * b.plane(c)[i];
    o[i] = s;
  }
  return out;
}

}  // namespace sllg
