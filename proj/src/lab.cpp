#include "sllg/lab.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <ostream>

#include "sllg/rng.hpp"
#include "sllg/snapshot.hpp"

namespace sllg {

namespace {

constexpr double kPi = 3.14159265358979323846;

double bump_side(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }
double smooth_step(double x) {  // 0 for x<=0, 1 for x>=1
  double g0 = bump_side(x);
  double g1 = bump_side(1.0 - x);
  return g0 / (g0 + g1);
}

double wrap_delta(double d, double period) {
  d = std::fmod(d, period);
  if (d < -0.5 * period) d += period;
  if (d >= 0.5 * period) d -= period;
  return d;
}

/// Random field with modes |kx|,|ky| <= band, assembled directly in physical
/// space so results are bit-identical across platforms. Coefficients are
/// drawn in a fixed order and scaled to O(1) amplitude.
Field band_limited_random(const Grid& g, int band, int ncomp, Rng& rng) {
  Field out(g, ncomp);
  const double norm = 1.0 / std::sqrt(static_cast<double>((2 * band + 1) * (2 * band + 1)));
  for (int c = 0; c < ncomp; ++c) {
    double* p = out.plane(c);
    for (int ky = -band; ky <= band; ++ky)
      for (int kx = -band; kx <= band; ++kx) {
        double ca = rng.normal() * norm;
        double sa = rng.normal() * norm;
        if (kx == 0 && ky == 0) sa = 0.0;
        const double wx = 2.0 * kPi * kx / g.lx;
        const double wy = 2.0 * kPi * ky / g.ly;
        for (int iy = 0; iy < g.ny; ++iy) {
          double phase_y = wy * g.y(iy);
          for (int ix = 0; ix < g.nx; ++ix) {
            double ph = wx * g.x(ix) + phase_y;
            p[static_cast<std::size_t>(iy) * g.nx + ix] +=
                ca * std::cos(ph) + sa * std::sin(ph);
          }
        }
      }
  }
  return out;
}

/// Angle from the south pole for the periodized stereographic bubble.
/// Inside r1 the profile is the exact bubble; beyond it the angle decays
/// along the energy-minimizing sinh profile in log-radius, eased to exactly
/// zero before the cell edge so the field is constant (0,0,-1) there.
struct BubbleProfile {
  double lambda, r1, r_out, theta1, T;

  BubbleProfile(double lambda_, double half_min_side) : lambda(lambda_) {
    r_out = 0.96 * half_min_side;
    r1 = std::clamp(std::sqrt(lambda * r_out), lambda, 0.8 * r_out);
    theta1 = 2.0 * std::atan2(lambda, r1);
    T = std::log(r_out / r1);
  }

  double theta(double r) const {
    if (r >= r_out) return 0.0;
    double exact = 2.0 * std::atan2(lambda, r);  // pi - polar angle of the plane bubble
    if (r <= r1) return exact;
    double tau = std::log(r / r1);
    // Ease sinh(T - tau) flat into zero over the last fifth of the log range.
    double x = T - tau;
    double sigma = x * smooth_step(x / (0.2 * T));
    double tail = theta1 * std::sinh(sigma) / std::sinh(T);
    // Blend away from the exact profile over the first quarter of the range.
    double w = smooth_step(tau / (0.25 * T));
    return (1.0 - w) * exact + w * tail;
  }
};

State make_uniform(const InitialData& d) {
  Field m(d.grid, 3);
  double n = std::sqrt(d.m_direction[0] * d.m_direction[0] +
                       d.m_direction[1] * d.m_direction[1] +
                       d.m_direction[2] * d.m_direction[2]);
  if (!(n > 0.0)) throw std::invalid_argument("make_initial: zero m_direction");
  Field s(d.grid, 3);
  for (int c = 0; c < 3; ++c) {
    std::fill_n(m.plane(c), d.grid.npoints(), d.m_direction[c] / n);
    std::fill_n(s.plane(c), d.grid.npoints(), d.s_value[c]);
  }
  return State(std::move(s), project_to_sphere(m), 0.0);
}

State make_fourier_random(const InitialData& d) {
  Rng rng(d.seed);
  Field w = band_limited_random(d.grid, d.band, 3, rng);
  Field m(d.grid, 3);
  for (int c = 0; c < 3; ++c) {
    const double* wc = w.plane(c);
    double* mc = m.plane(c);
    for (std::size_t i = 0; i < d.grid.npoints(); ++i)
      mc[i] = d.m_direction[c] + d.m_amplitude * wc[i];
  }
  Field s = band_limited_random(d.grid, d.band, 3, rng);
  s *= d.s_amplitude;
  return State(std::move(s), project_to_sphere(m), 0.0);
}

State make_bubble(const InitialData& d) {
  const Grid& g = d.grid;
  BubbleProfile prof(d.bubble_scale, 0.5 * std::min(g.lx, g.ly));
  Field m(g, 3);
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix) {
      double dx = wrap_delta(g.x(ix) - d.center[0], g.lx);
      double dy = wrap_delta(g.y(iy) - d.center[1], g.ly);
      double r = std::sqrt(dx * dx + dy * dy);
      double th = prof.theta(r);         // angle from south pole
      double u = kPi - th;               // polar angle from north
      double phi = std::atan2(dy, dx);
      std::size_t i = static_cast<std::size_t>(iy) * g.nx + ix;
      m.plane(0)[i] = std::sin(u) * std::cos(phi);
      m.plane(1)[i] = std::sin(u) * std::sin(phi);
      m.plane(2)[i] = std::cos(u);
    }
  Field s(g, 3);
  if (d.s_amplitude != 0.0 && d.kind == InitialData::Kind::bubble) {
    Rng rng(d.seed);
    s = band_limited_random(g, d.band, 3, rng);
    s *= d.s_amplitude;
  }
  return State(std::move(s), project_to_sphere(m), 0.0);
}

State make_from_file(const InitialData& d) {
  Field s = read_snapshot(d.s_path);
  Field m = read_snapshot(d.m_path);
  require_ncomp(s, 3, "make_initial(file) s");
  require_ncomp(m, 3, "make_initial(file) m");
  if (s.grid() != m.grid()) throw GridMismatch("make_initial(file): s/m grids differ");
  return State(std::move(s), project_to_sphere(m), 0.0);
}

}  // namespace

State make_initial(const InitialData& d) {
  switch (d.kind) {
    case InitialData::Kind::uniform: return make_uniform(d);
    case InitialData::Kind::fourier_random: return make_fourier_random(d);
    case InitialData::Kind::bubble: return make_bubble(d);
    case InitialData::Kind::file: return make_from_file(d);
  }
  throw std::invalid_argument("make_initial: unknown kind");
}

bool mollifier_under_resolved(const Grid& grid, double eps) {
  return eps < std::max(grid.hx(), grid.hy());
}

Field mollify(const Field& f, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("mollify: eps must be positive");
  require_finite(f, "mollify");
  const Grid& g = f.grid();
  if (mollifier_under_resolved(g, eps))
    std::cerr << "mollify: eps=" << eps << " is below the grid spacing; kernel under-resolved\n";

  // Sample the wrapped bump and renormalize to exact unit discrete mass.
  Field kernel(g, 1);
  double* k = kernel.plane(0);
  double mass = 0.0;
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix) {
      double dx = wrap_delta(g.x(ix), g.lx) / eps;
      double dy = wrap_delta(g.y(iy), g.ly) / eps;
      double q = dx * dx + dy * dy;
      double v = q < 1.0 ? std::exp(-1.0 / (1.0 - q)) : 0.0;
      k[static_cast<std::size_t>(iy) * g.nx + ix] = v;
      mass += v;
    }
  if (!(mass > 0.0)) throw std::invalid_argument("mollify: kernel vanished on the grid");
  for (std::size_t i = 0; i < g.npoints(); ++i) k[i] /= mass;

  auto sp = Spectral::get(g);
  std::vector<Spectral::Complex> kh(sp->nspec());
  sp->forward(k, kh.data());
  // The kernel is even under index negation, so the transform is real; the
  // zero mode is exactly 1 after renormalization.
  std::vector<double> mult(sp->nspec());
  for (std::size_t i = 0; i < sp->nspec(); ++i) mult[i] = kh[i].real();
  mult[0] = 1.0;
  return sp->apply_multiplier(f, mult);
}

namespace {
std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace

std::string UniquenessReport::csv_header() { return "t,W,argmax_shell,hbar,int_hbar,budget"; }

void UniquenessReport::write_csv(std::ostream& os) const {
  os << csv_header() << "\n";
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const UniquenessEntry& e = entries[i];
    double budget = W0 * std::exp(c_hat * int_hbar[i]);
    os << fmt17(e.t) << ',' << fmt17(e.W) << ',' << e.argmax_shell << ',' << fmt17(e.hbar)
       << ',' << fmt17(int_hbar[i]) << ',' << fmt17(budget) << "\n";
  }
}

UniquenessReport twin_run(const TwinRunConfig& cfg, const ModelParams& params) {
  params.validate();
  cfg.step.validate();
  if (!(cfg.horizon >= 0.0)) throw std::invalid_argument("twin_run: horizon must be >= 0");
  if (cfg.delta < 0.0) throw std::invalid_argument("twin_run: delta must be >= 0");

  State a = make_initial(cfg.base);
  State b = a;
  if (cfg.delta > 0.0) {
    Rng rng(cfg.perturb_seed);
    auto perturbation = [&](int planes) {
      Field raw(a.grid(), planes);
      for (int c = 0; c < planes; ++c) {
        double* p = raw.plane(c);
        for (std::size_t i = 0; i < a.grid().npoints(); ++i) p[i] = rng.normal();
      }
      Field smooth = mollify(raw, cfg.mollify_eps);
      double sup = sup_pointwise_norm(smooth);
      if (sup > 0.0) smooth *= 1.0 / sup;
      return smooth;
    };
    if (cfg.perturb != TwinRunConfig::Perturb::m_only) {
      Field ps = perturbation(3);
      b.s.axpy(cfg.delta, ps);
    }
    if (cfg.perturb != TwinRunConfig::Perturb::s_only) {
      Field pm = perturbation(3);
      Field mb = b.m.field();
      mb.axpy(cfg.delta, pm);
      b = State(std::move(b.s), project_to_sphere(mb), b.t);
    }
  }

  DyadicPartition part = DyadicPartition::build(a.grid());
  const double e0 = total_energy(a, params);
  const double e_tol = cfg.step.energy_step_tol * std::max(e0, 1e-300);

  UniquenessReport rep;
  auto observe = [&]() {
    UniquenessEntry e = uniqueness_functional(a, b, cfg.beta_exp, part, params);
    if (rep.entries.empty()) {
      rep.int_hbar.push_back(0.0);
    } else {
      const UniquenessEntry& p = rep.entries.back();
      rep.int_hbar.push_back(rep.int_hbar.back() + 0.5 * (e.t - p.t) * (p.hbar + e.hbar));
    }
    rep.entries.push_back(std::move(e));
  };
  observe();
  rep.W0 = rep.entries.front().W;

  double ea_prev = total_energy(a, params);
  double eb_prev = total_energy(b, params);
  const double t_end = cfg.horizon;
  const double t_eps = 1e-12 * std::max(1.0, t_end);
  long accepted = 0;
  while (a.t < t_end - t_eps) {
    double dt = std::min({cfg.step.dt, suggest_dt(a, cfg.step, params),
                          suggest_dt(b, cfg.step, params), t_end - a.t});
    bool stepped = false;
    while (!stepped) {
      StepConfig attempt = cfg.step;
      attempt.dt = dt;
      bool reject = false;
      std::string cause;
      try {
        State na = step(a, attempt, params);
        State nb = step(b, attempt, params);
        double ea = total_energy(na, params);
        double eb = total_energy(nb, params);
        if (cfg.step.reject_on_energy_increase &&
            (ea > ea_prev + e_tol || eb > eb_prev + e_tol)) {
          reject = true;
          cause = "energy increase";
        } else {
          a = std::move(na);
          b = std::move(nb);
          ea_prev = ea;
          eb_prev = eb;
          stepped = true;
        }
      } catch (const NearZeroVector& e) {
        reject = true;
        cause = e.what();
      }
      if (reject) {
        dt *= 0.5;
        if (dt < cfg.step.min_dt) {
          rep.status = RunStatus::blowup_suspected;
          rep.message = "twin run stopped at t=" + std::to_string(a.t) + ": " + cause;
          rep.steps = accepted;
          return rep;
        }
      }
    }
    ++accepted;
    if (cfg.cadence > 0 && accepted % cfg.cadence == 0) observe();
  }
  if (rep.entries.back().t < a.t - t_eps) observe();
  rep.steps = accepted;

  // Smallest c making W(t) <= W0 exp(c * int hbar) across eligible times.
  const double floor = 10.0 * std::numeric_limits<double>::epsilon() * std::max(e0, 1e-300);
  if (rep.W0 > 0.0) {
    bool any = false;
    double c = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < rep.entries.size(); ++i) {
      double w = rep.entries[i].W;
      double h = rep.int_hbar[i];
      if (w <= floor || h <= 0.0) continue;
      c = std::max(c, std::log(w / rep.W0) / h);
      any = true;
    }
    rep.c_hat = any ? c : 0.0;
  }
  return rep;
}

}  // namespace sllg
