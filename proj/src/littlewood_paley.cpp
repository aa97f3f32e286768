#include "sllg/littlewood_paley.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

namespace sllg {

namespace {
double bump_side(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

/// Smooth step: 0 at x<=0, 1 at x>=1, C-infinity in between.
double smooth_step(double x) {
  double g0 = bump_side(x);
  double g1 = bump_side(1.0 - x);
  return g0 / (g0 + g1);
}
}  // namespace

double DyadicPartition::chi(double r) const {
  if (r <= params_.support_lo) return 1.0;
  if (r >= params_.support_hi) return 0.0;
  double t = (r - params_.support_lo) / (params_.support_hi - params_.support_lo);
  return smooth_step(1.0 - t);
}

DyadicPartition DyadicPartition::build(const Grid& grid, const Params& params) {
  if (!(params.support_lo > 0.0) || !(params.support_hi > params.support_lo) ||
      !(params.support_hi < 2.0 * params.support_lo))
    throw std::invalid_argument(
        "DyadicPartition: need 0 < lo < hi < 2*lo for disjoint alternate shells");

  DyadicPartition part;
  part.params_ = params;
  part.sp_ = Spectral::get(grid);
  const auto& sp = *part.sp_;

  // Smallest J with chi(2^-(J+1) r) = 1 across the dealiased band, so the
  // telescoped sum closes exactly there.
  double rmax = sp.top_ring_radius();
  int jmax = 0;
  while (rmax / std::pow(2.0, jmax + 1) > params.support_lo) ++jmax;
  part.jmax_ = jmax;

  part.mult_.assign(jmax + 2, std::vector<double>(sp.nspec(), 0.0));
  part.nonempty_.assign(jmax + 2, 0);
  for (int j = 0; j < sp.nky(); ++j)
    for (int i = 0; i < sp.nkx(); ++i) {
      std::size_t s = static_cast<std::size_t>(j) * sp.nkx() + i;
      double r = sp.ring_radius(j, i);
      part.mult_[0][s] = part.chi(r);
      if (part.mult_[0][s] > 0.0 && sp.kept(j, i)) part.nonempty_[0] = 1;
      double prev = part.chi(r);
      for (int shell = 0; shell <= jmax; ++shell) {
        double next = part.chi(r / std::pow(2.0, shell + 1));
        part.mult_[shell + 1][s] = next - prev;
        if (part.mult_[shell + 1][s] > 0.0 && sp.kept(j, i))
          part.nonempty_[shell + 1] = 1;
        prev = next;
      }
    }

  part.lowpass_.assign(jmax + 2, {});
  for (int jl = 0; jl <= jmax + 1; ++jl) {
    part.lowpass_[jl].assign(sp.nspec(), 0.0);
    for (int j = 0; j < sp.nky(); ++j)
      for (int i = 0; i < sp.nkx(); ++i) {
        std::size_t s = static_cast<std::size_t>(j) * sp.nkx() + i;
        part.lowpass_[jl][s] = part.chi(sp.ring_radius(j, i) / std::pow(2.0, jl));
      }
  }

  int usable = 0;
  for (int shell = 0; shell <= jmax; ++shell)
    if (part.nonempty_[shell + 1]) ++usable;
  if (usable < 3)
    throw std::invalid_argument("DyadicPartition: grid too small, fewer than 3 shells");
  return part;
}

Field DyadicPartition::block(const Field& f, int j) const {
  if (j < -1 || j > jmax_) {
    // Delta_j = 0 outside the available range; mirrors the convention
    // Delta_j f = 0 for j <= -2.
    return Field(f.grid(), f.ncomp());
  }
  return sp_->apply_multiplier(f, multiplier(j));
}

Field DyadicPartition::low_pass(const Field& f, int j) const {
  if (j < 0) return Field(f.grid(), f.ncomp());
  int jl = std::min(j, jmax_ + 1);
  return sp_->apply_multiplier(f, lowpass_[jl]);
}

std::vector<double> DyadicPartition::block_l2_norms(const Field& f) const {
  const auto& sp = *sp_;
  const int nkx = sp.nkx();
  const int nx = grid().nx;
  std::vector<double> acc(jmax_ + 2, 0.0);

  std::vector<Spectral::Complex> fh(sp.nspec());
  for (int c = 0; c < f.ncomp(); ++c) {
    sp.forward(f.plane(c), fh.data());
    for (int j = 0; j < sp.nky(); ++j)
      for (int i = 0; i < nkx; ++i) {
        std::size_t s = static_cast<std::size_t>(j) * nkx + i;
        // Hermitian half-spectrum: interior kx columns count twice.
        double w = (i == 0 || i == nx / 2) ? 1.0 : 2.0;
        double p = std::norm(fh[s]) * w;
        for (int shell = -1; shell <= jmax_; ++shell) {
          double m = mult_[shell + 1][s];
          if (m != 0.0) acc[shell + 1] += m * m * p;
        }
      }
  }
  // Parseval with the unnormalized forward transform:
  // int |f|^2 = (lx*ly) / (nx*ny)^2 * sum |f_hat|^2.
  const double scale = grid().area() / (static_cast<double>(grid().npoints()) *
                                        static_cast<double>(grid().npoints()));
  for (double& v : acc) v = std::sqrt(v * scale);
  return acc;
}

void DyadicPartition::dump_profile(std::ostream& os) const {
  const auto& sp = *sp_;
  std::map<double, char> radii;
  for (int j = 0; j < sp.nky(); ++j)
    for (int i = 0; i < sp.nkx(); ++i) radii.emplace(sp.ring_radius(j, i), 0);
  os << "radius,chi";
  for (int shell = 0; shell <= jmax_; ++shell) os << ",phi_" << shell;
  os << "\n";
  os.precision(17);
  for (const auto& [r, _] : radii) {
    os << r << "," << chi(r);
    for (int shell = 0; shell <= jmax_; ++shell)
      os << "," << (chi(r / std::pow(2.0, shell + 1)) - chi(r / std::pow(2.0, shell)));
    os << "\n";
  }
}

double besov_norm(const Field& f, double s, const DyadicPartition& part) {
  require_finite(f, "besov_norm");
  auto norms = part.block_l2_norms(f);
  double best = 0.0;
  for (int j = -1; j <= part.jmax(); ++j)
    best = std::max(best, std::pow(2.0, j * s) * norms[j + 1]);
  return best;
}

namespace {
Field pointwise_product(const Field& a, const Field& b) {
  require_same_grid(a, b, "pointwise_product");
  if (a.ncomp() != b.ncomp()) throw GridMismatch("pointwise_product: component mismatch");
  Field out(a.grid(), a.ncomp());
  for (int c = 0; c < a.ncomp(); ++c) {
    const double* x = a.plane(c);
    const double* y = b.plane(c);
    double* o = out.plane(c);
    for (std::size_t i = 0; i < a.grid().npoints(); ++i) o[i] = x[i] * y[i];
  }
  return out;
}
}  // namespace

BonyParts bony_decomposition(const Field& u, const Field& v, const DyadicPartition& part) {
  require_same_grid(u, v, "bony_decomposition");
  if (u.ncomp() != v.ncomp()) throw GridMismatch("bony_decomposition: component mismatch");
  const int jm = part.jmax();

  std::vector<Field> ub, vb;
  ub.reserve(jm + 2);
  vb.reserve(jm + 2);
  for (int j = -1; j <= jm; ++j) {
    ub.push_back(part.block(u, j));
    vb.push_back(part.block(v, j));
  }

  BonyParts parts{Field(u.grid(), u.ncomp()), Field(u.grid(), u.ncomp()),
                  Field(u.grid(), u.ncomp())};
  // S_{j-1} vanishes for j <= 0, so the paraproduct sums start at j = 1.
  for (int j = 1; j <= jm; ++j) {
    Field su = part.low_pass(u, j - 1);
    Field sv = part.low_pass(v, j - 1);
    parts.low_high += pointwise_product(su, vb[j + 1]);
    parts.high_low += pointwise_product(sv, ub[j + 1]);
  }
  for (int j = -1; j <= jm; ++j)
    for (int k = std::max(-1, j - 1); k <= std::min(jm, j + 1); ++k)
      parts.resonant += pointwise_product(ub[j + 1], vb[k + 1]);
  return parts;
}

Field commutator_block(const Field& f, const Field& g, int j, const DyadicPartition& part) {
  require_ncomp(f, 1, "commutator_block");
  require_same_grid(f, g, "commutator_block");
  Field grad_g = gradient(g);
  // f (grad g), componentwise scalar multiply
  Field fg(grad_g.grid(), grad_g.ncomp());
  const double* fv = f.plane(0);
  for (int c = 0; c < grad_g.ncomp(); ++c) {
    const double* gv = grad_g.plane(c);
    double* o = fg.plane(c);
    for (std::size_t i = 0; i < f.grid().npoints(); ++i) o[i] = fv[i] * gv[i];
  }
  Field lhs = part.block(fg, j);
  Field bg = part.block(grad_g, j);
  for (int c = 0; c < bg.ncomp(); ++c) {
    const double* gv = bg.plane(c);
    double* o = lhs.plane(c);
    for (std::size_t i = 0; i < f.grid().npoints(); ++i) o[i] -= fv[i] * gv[i];
  }
  return lhs;
}

namespace {
double l4_norm4(const Field& f) {
  Field n2 = pointwise_norm2(f);
  double* v = n2.plane(0);
  for (std::size_t i = 0; i < n2.grid().npoints(); ++i) v[i] *= v[i];
  return integrate(n2);
}
}  // namespace

UniquenessEntry uniqueness_functional(const State& a, const State& b, double beta_exp,
                                      const DyadicPartition& part, const ModelParams& params) {
  if (!(beta_exp > 0.0) || !(beta_exp < 0.5))
    throw std::invalid_argument("uniqueness_functional: beta_exp must lie in (0, 1/2)");
  if (a.grid() != b.grid() || a.grid() != part.grid())
    throw GridMismatch("uniqueness_functional: grid mismatch");

  Field ds = a.s - b.s;
  Field dm = a.m.field() - b.m.field();

  auto ns = part.block_l2_norms(ds);
  auto ngm = part.block_l2_norms(gradient(dm));
  double low_m = part.block_l2_norms(dm)[0];

  UniquenessEntry e;
  e.t = a.t;
  e.Wj.resize(part.jmax() + 2);
  for (int j = -1; j <= part.jmax(); ++j) {
    double wj = ns[j + 1] * ns[j + 1] + ngm[j + 1] * ngm[j + 1] + low_m * low_m;
    e.Wj[j + 1] = wj;
    double weighted = std::pow(2.0, -2.0 * j * beta_exp) * wj;
    if (weighted > e.W) {
      e.W = weighted;
      e.argmax_shell = j;
    }
  }

  // Gronwall weight from the two trajectories themselves.
  Field gm1 = gradient(a.m.field());
  Field gm2 = gradient(b.m.field());
  Field dtm1 = m_rhs_gilbert_heat(a.s, a.m, params);
  Field dtm2 = m_rhs_gilbert_heat(b.s, b.m, params);
  double l4 = l4_norm4(a.s) + l4_norm4(b.s) + l4_norm4(gm1) + l4_norm4(gm2);
  double dtm = field_inner(dtm1, dtm1) + field_inner(dtm2, dtm2);
  auto h1 = [](const Field& f) {
    Field g = gradient(f);
    return field_inner(f, f) + field_inner(g, g);
  };
  e.hbar = 1.0 + l4 + dtm + h1(a.s) + h1(b.s) + h1(gm1) + h1(gm2);
  return e;
}

}  // namespace sllg
