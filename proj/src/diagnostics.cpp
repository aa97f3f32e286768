#include "sllg/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace sllg {

EnergyReport energy(const State& state, const ModelParams& params) {
  params.validate();
  EnergyReport r;
  r.t = state.t;
  r.Es = integrate(pointwise_norm2(state.s));
  Field grad_m = gradient(state.m.field());
  r.Em = integrate(pointwise_norm2(grad_m));
  r.E = r.Es + params.alpha * r.Em;

  Field grad_s = gradient(state.s);
  CoefficientTensor A = coefficient_tensor(state.m, params);
  r.diss_aniso = field_inner(A.apply(grad_s), grad_s);
  r.diss_grad_s = field_inner(grad_s, grad_s);
  Field dtm = m_rhs_gilbert_heat(state.s, state.m, params);
  r.diss_dtm = field_inner(dtm, dtm);
  return r;
}

TrajectorySample make_sample(const State& state, const ModelParams& params) {
  EnergyReport e = energy(state, params);
  TrajectorySample s;
  s.t = e.t;
  s.Es = e.Es;
  s.Em = e.Em;
  s.E = e.E;
  s.diss_aniso = e.diss_aniso;
  s.diss_grad_s = e.diss_grad_s;
  s.diss_dtm = e.diss_dtm;
  s.sup_s = sup_pointwise_norm(state.s);
  s.sup_grad_m = sup_pointwise_norm(gradient(state.m.field()));
  return s;
}

double s_energy_law_residual(std::span<const TrajectorySample> window, double e0) {
  if (window.size() < 2) return 0.0;
  double accum = 0.0;
  for (std::size_t i = 1; i < window.size(); ++i) {
    double dt = window[i].t - window[i - 1].t;
    double f0 = 2.0 * (window[i - 1].diss_aniso + window[i - 1].Es);
    double f1 = 2.0 * (window[i].diss_aniso + window[i].Es);
    accum += 0.5 * dt * (f0 + f1);
  }
  double r = (window.back().Es - window.front().Es) + accum;
  return r / std::max(e0, 1e-300);
}

CoupledEnergyReport coupled_energy_check(std::span<const TrajectorySample> window,
                                         const ModelParams& params, double e0,
                                         double tol_rel) {
  CoupledEnergyReport rep;
  if (window.size() < 2) return rep;
  const double a2 = params.alpha * params.alpha;
  const double cgrad = 2.0 * (1.0 - params.beta);
  auto bundle_at = [&](const TrajectorySample& s) {
    return s.Es + cgrad * s.diss_grad_s + a2 * s.diss_dtm;
  };
  for (std::size_t i = 1; i < window.size(); ++i) {
    rep.worst_step_increase = std::max(rep.worst_step_increase, window[i].E - window[i - 1].E);
    double dt = window[i].t - window[i - 1].t;
    rep.dissipation_bundle += 0.5 * dt * (bundle_at(window[i - 1]) + bundle_at(window[i]));
  }
  rep.slack = window.front().E - window.back().E - rep.dissipation_bundle;
  rep.monotone_within_tol = rep.worst_step_increase <= tol_rel * std::max(e0, 1e-300);
  if (!rep.monotone_within_tol)
    throw MonotonicityViolation("coupled_energy_check: E grew by " +
                                std::to_string(rep.worst_step_increase) + " in one step");
  return rep;
}

BallOffsets BallOffsets::make(const Grid& grid, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("BallOffsets: radius must be positive");
  BallOffsets b;
  b.grid_ = grid;
  b.radius_ = radius;
  const double r2 = radius * radius;
  // Reach is capped below half the period so no wrapped point is counted
  // twice; radii >= l/2 saturate toward the whole torus.
  int reach_x = std::min(grid.nx / 2 - 1, static_cast<int>(std::floor(radius / grid.hx())) + 1);
  int reach_y = std::min(grid.ny / 2 - 1, static_cast<int>(std::floor(radius / grid.hy())) + 1);
  for (int dy = -reach_y; dy <= reach_y; ++dy)
    for (int dx = -reach_x; dx <= reach_x; ++dx) {
      // Torus displacement; reach is capped at half the period per axis.
      double px = dx * grid.hx();
      double py = dy * grid.hy();
      if (px * px + py * py <= r2) b.offsets_.emplace_back(dy, dx);
    }
  return b;
}

double BallOffsets::integrate_over(const Field& density, int cy, int cx) const {
  require_ncomp(density, 1, "BallOffsets::integrate_over");
  const double* v = density.plane(0);
  const int nx = grid_.nx, ny = grid_.ny;
  double sum = 0.0;
  for (const auto& [dy, dx] : offsets_) {
    int iy = cy + dy;
    if (iy < 0) iy += ny;
    if (iy >= ny) iy -= ny;
    int ix = cx + dx;
    if (ix < 0) ix += nx;
    if (ix >= nx) ix -= nx;
    sum += v[static_cast<std::size_t>(iy) * nx + ix];
  }
  return sum * grid_.cell_area();
}

namespace {
LocalEnergyMap scan_density(const Field& density, double radius, int stride) {
  const Grid& g = density.grid();
  if (stride <= 0) throw std::invalid_argument("local energy scan: stride must be positive");
  BallOffsets ball = BallOffsets::make(g, radius);
  LocalEnergyMap map;
  map.radius = radius;
  map.stride = stride;
  for (int iy = 0; iy < g.ny; iy += stride)
    for (int ix = 0; ix < g.nx; ix += stride) {
      double v = ball.integrate_over(density, iy, ix);
      map.centers.emplace_back(iy, ix);
      map.values.push_back(v);
      if (v > map.max_value) {
        map.max_value = v;
        map.argmax = {iy, ix};
      }
    }
  return map;
}
}  // namespace

LocalEnergyMap local_energy_map(const State& state, const ModelParams& params, double radius,
                                int stride) {
  Field density = pointwise_norm2(state.s);
  Field gm2 = pointwise_norm2(gradient(state.m.field()));
  density.axpy(params.alpha, gm2);
  return scan_density(density, radius, stride);
}

LocalEnergyMap local_gradm_energy_map(const Magnetization& m, double radius, int stride) {
  return scan_density(pointwise_norm2(gradient(m.field())), radius, stride);
}

LocalMonotonicityReport local_monotonicity_check(std::span<const State> window,
                                                 const ModelParams& params,
                                                 std::pair<int, int> center, double radius,
                                                 double e0, double c_const) {
  LocalMonotonicityReport rep;
  if (window.empty()) return rep;
  BallOffsets ball_r = BallOffsets::make(window.front().grid(), radius);
  BallOffsets ball_2r = BallOffsets::make(window.front().grid(), 2.0 * radius);

  auto density = [&](const State& st) {
    Field d = pointwise_norm2(st.s);
    d.axpy(params.alpha, pointwise_norm2(gradient(st.m.field())));
    return d;
  };
  const double t0 = window.front().t;
  double e2r0 = ball_2r.integrate_over(density(window.front()), center.first, center.second);

  rep.worst_slack = std::numeric_limits<double>::infinity();
  for (const State& st : window) {
    double t = st.t - t0;
    double lhs = ball_r.integrate_over(density(st), center.first, center.second);
    double bound = e2r0 + c_const * (t / (radius * radius) + t) * e0;
    rep.worst_slack = std::min(rep.worst_slack, bound - lhs);
  }
  rep.holds = rep.worst_slack >= 0.0;
  return rep;
}

void L4InterpolationAudit::add(const State& state) {
  Field f = (which_ == Which::spin) ? state.s : gradient(state.m.field());
  Field n2 = pointwise_norm2(f);
  Field n4 = n2;
  {
    double* v = n4.plane(0);
    for (std::size_t i = 0; i < n4.grid().npoints(); ++i) v[i] *= v[i];
  }
  double l4 = integrate(n4);
  Field gf = gradient(f);
  double grad2 = field_inner(gf, gf);
  double mass2 = integrate(n2);

  LocalEnergyMap local = scan_density(n2, radius_, stride_);
  local_sup_ = std::max(local_sup_, local.max_value);

  if (have_prev_) {
    double dt = state.t - prev_t_;
    lhs_ += 0.5 * dt * (prev_l4_ + l4);
    grad_budget_ += 0.5 * dt * (prev_grad2_ + grad2);
    mass_budget_ += 0.5 * dt * (prev_mass2_ + mass2);
  }
  have_prev_ = true;
  prev_t_ = state.t;
  prev_l4_ = l4;
  prev_grad2_ = grad2;
  prev_mass2_ = mass2;
}

L4InterpolationAudit::Report L4InterpolationAudit::report() const {
  Report r;
  r.lhs = lhs_;
  r.local_sup = local_sup_;
  r.grad_budget = grad_budget_;
  r.mass_budget = mass_budget_;
  r.rhs = local_sup_ * (grad_budget_ + mass_budget_ / (radius_ * radius_));
  r.ratio = (r.rhs > 0.0) ? r.lhs / r.rhs : 0.0;
  return r;
}

const char* to_string(BlowupVerdict v) {
  switch (v) {
    case BlowupVerdict::clear: return "CLEAR";
    case BlowupVerdict::concentrating: return "CONCENTRATING";
    case BlowupVerdict::supnorm_diverging: return "SUPNORM_DIVERGING";
  }
  return "?";
}

BlowupMonitor::BlowupMonitor(BlowupConfig cfg, const ModelParams& params)
    : cfg_(cfg), params_(params) {
  cfg_.validate();
  params_.validate();
}

BlowupVerdict BlowupMonitor::observe(const State& state) {
  Field gm2 = pointwise_norm2(gradient(state.m.field()));
  double em = integrate(gm2);
  if (!have_first_) {
    em0_ = em;
    have_first_ = true;
  }
  LocalEnergyMap local = scan_density(gm2, cfg_.radius0, cfg_.stride);
  last_max_local_ = local.max_value;

  double integrand = sup_pointwise_norm(state.s) + sup_pointwise_norm(gradient(state.m.field()));
  if (have_prev_) {
    supnorm_integral_ += 0.5 * (state.t - prev_t_) * (prev_integrand_ + integrand);
  }
  have_prev_ = true;
  prev_t_ = state.t;
  prev_integrand_ = integrand;
  integrand_history_.emplace_back(state.t, integrand);
  while (integrand_history_.size() > 1 &&
         integrand_history_.front().first < state.t - cfg_.window)
    integrand_history_.erase(integrand_history_.begin());

  // Concentration: local pile-up above epsilon0 without global growth.
  bool em_grew = em > em0_ * (1.0 + 1e-8) + 1e-14;
  if (local.max_value > cfg_.epsilon0 && !em_grew) return BlowupVerdict::concentrating;

  if (integrand_history_.size() >= 2) {
    double start = integrand_history_.front().second;
    if (start > 0.0 && integrand >= cfg_.supnorm_factor * start)
      return BlowupVerdict::supnorm_diverging;
  }
  return BlowupVerdict::clear;
}

DiagnosticsObserver::DiagnosticsObserver(const ModelParams& params, const BlowupConfig& blowup,
                                         bool higher_norms)
    : params_(params), higher_norms_(higher_norms), monitor_(blowup, params) {}

void DiagnosticsObserver::observe(const State& state) {
  TrajectorySample s = make_sample(state, params_);
  if (!have_first_) {
    e0_ = s.E;
    have_first_ = true;
  } else {
    const TrajectorySample& p = samples_.back();
    double dt = s.t - p.t;
    s_law_accum_ += 0.5 * dt *
                    (2.0 * (p.diss_aniso + p.Es) + 2.0 * (s.diss_aniso + s.Es));
    const double a2 = params_.alpha * params_.alpha;
    const double cgrad = 2.0 * (1.0 - params_.beta);
    bundle_accum_ += 0.5 * dt *
                     ((p.Es + cgrad * p.diss_grad_s + a2 * p.diss_dtm) +
                      (s.Es + cgrad * s.diss_grad_s + a2 * s.diss_dtm));
  }
  BlowupVerdict verdict = monitor_.observe(state);

  Row row{};
  row.t = s.t;
  row.Es = s.Es;
  row.Em = s.Em;
  row.E = s.E;
  row.diss_aniso = s.diss_aniso;
  row.diss_dtm = s.diss_dtm;
  double e0 = std::max(e0_, 1e-300);
  row.s_law_residual = ((s.Es - (samples_.empty() ? s.Es : samples_.front().Es)) +
                        s_law_accum_) / e0;
  row.coupled_slack = (samples_.empty() ? 0.0
                                        : samples_.front().E - s.E - bundle_accum_);
  row.max_local_em = monitor_.last_max_local();
  row.supnorm_integral = monitor_.supnorm_integral();
  row.verdict = verdict;
  if (higher_norms_) {
    Field gm = gradient(state.m.field());
    row.h2m = l2_norm(gradient(gm));
    Field gs = gradient(state.s);
    row.h1s = l2_norm(gs);
    row.h2s = l2_norm(gradient(gs));
  }
  rows_.push_back(row);
  samples_.push_back(s);
}

std::string DiagnosticsObserver::csv_header(bool higher_norms) {
  std::string h =
      "t,Es,Em,E,diss_aniso,diss_dtm,s_law_residual,coupled_slack,max_local_em,"
      "supnorm_integral,verdict";
  if (higher_norms) h += ",h2m,h1s,h2s";
  return h;
}

namespace {
std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace

void DiagnosticsObserver::write_csv(std::ostream& os) const {
  os << csv_header(higher_norms_) << "\n";
  for (const Row& r : rows_) {
    os << fmt17(r.t) << ',' << fmt17(r.Es) << ',' << fmt17(r.Em) << ',' << fmt17(r.E) << ','
       << fmt17(r.diss_aniso) << ',' << fmt17(r.diss_dtm) << ',' << fmt17(r.s_law_residual)
       << ',' << fmt17(r.coupled_slack) << ',' << fmt17(r.max_local_em) << ','
       << fmt17(r.supnorm_integral) << ',' << to_string(r.verdict);
    if (higher_norms_)
      os << ',' << fmt17(r.h2m) << ',' << fmt17(r.h1s) << ',' << fmt17(r.h2s);
    os << "\n";
  }
}

}  // namespace sllg
