#include "sllg/integrator.hpp"

#include <algorithm>
#include <cmath>

namespace sllg {

double total_energy(const State& state, const ModelParams& params) {
  double es = integrate(pointwise_norm2(state.s));
  double em = integrate(pointwise_norm2(gradient(state.m.field())));
  return es + params.alpha * em;
}

namespace {

struct PairRhs {
  Field ds;
  Field dm;
};

PairRhs full_rhs(const Field& s, const Field& m_raw, const StepConfig& cfg,
                 const ModelParams& params) {
  Magnetization m = Magnetization::adopt_unchecked(m_raw);
  PairRhs r{spin_rhs(s, m, params), Field(m_raw.grid(), 3)};
  if (!cfg.freeze_m) r.dm = m_rhs_gilbert_heat(s, m, params);
  return r;
}

State step_imex(const State& state, const StepConfig& cfg, const ModelParams& params) {
  const double dt = cfg.dt;
  const double a = params.alpha;
  const double mu = params.mean_diffusivity();
  auto sp = Spectral::get(state.grid());

  // m update first; the s update uses the pre-step m (fully explicit coupling).
  Magnetization m_new = state.m;
  if (!cfg.freeze_m) {
    const Field& mf = state.m.field();
    Field lap_m = laplacian(mf);
    Field grad_m = gradient(mf);
    Field g2 = params.dealias ? dealias(pointwise_norm2(grad_m)) : pointwise_norm2(grad_m);
    Field cubic(mf.grid(), 3);
    for (int c = 0; c < 3; ++c) {
      const double* g = g2.plane(0);
      const double* mc = mf.plane(c);
      double* o = cubic.plane(c);
      for (std::size_t i = 0; i < mf.grid().npoints(); ++i) o[i] = g[i] * mc[i];
    }
    Field h = lap_m;
    h += state.s;
    Field precession = cross(mf, h);
    Field damping = cross(mf, cross(mf, state.s));
    if (params.dealias) {
      precession = dealias(precession);
      damping = dealias(damping);
    }
    // Explicit part of the Gilbert heat form (the alpha*lap m piece is implicit).
    Field fm = cubic;
    fm *= a;
    fm -= precession;
    fm.axpy(-a, damping);
    fm *= 1.0 / (1.0 + a * a);

    Field m_star = state.m.field();
    m_star.axpy(dt, fm);
    m_star = sp->inverse_helmholtz(m_star, dt * a / (1.0 + a * a));
    m_new = project_to_sphere(m_star);
  }

  Field fs = spin_flux_divergence(state.s, state.m, params, mu);
  fs -= state.s;
  fs -= cross(state.s, state.m.field());
  Field s_star = state.s;
  s_star.axpy(dt, fs);
  Field s_new = sp->inverse_helmholtz(s_star, dt * mu);

  return State(std::move(s_new), std::move(m_new), state.t + dt);
}

State step_rk4(const State& state, const StepConfig& cfg, const ModelParams& params) {
  const double dt = cfg.dt;
  const Field& s0 = state.s;
  const Field& m0 = state.m.field();

  PairRhs k1 = full_rhs(s0, m0, cfg, params);

  Field s_tmp = s0;
  s_tmp.axpy(0.5 * dt, k1.ds);
  Field m_tmp = m0;
  m_tmp.axpy(0.5 * dt, k1.dm);
  PairRhs k2 = full_rhs(s_tmp, m_tmp, cfg, params);

  s_tmp = s0;
  s_tmp.axpy(0.5 * dt, k2.ds);
  m_tmp = m0;
  m_tmp.axpy(0.5 * dt, k2.dm);
  PairRhs k3 = full_rhs(s_tmp, m_tmp, cfg, params);

  s_tmp = s0;
  s_tmp.axpy(dt, k3.ds);
  m_tmp = m0;
  m_tmp.axpy(dt, k3.dm);
  PairRhs k4 = full_rhs(s_tmp, m_tmp, cfg, params);

  const double w = dt / 6.0;
  Field s_new = s0;
  s_new.axpy(w, k1.ds);
  s_new.axpy(2.0 * w, k2.ds);
  s_new.axpy(2.0 * w, k3.ds);
  s_new.axpy(w, k4.ds);

  Magnetization m_new = state.m;
  if (!cfg.freeze_m) {
    Field m_acc = m0;
    m_acc.axpy(w, k1.dm);
    m_acc.axpy(2.0 * w, k2.dm);
    m_acc.axpy(2.0 * w, k3.dm);
    m_acc.axpy(w, k4.dm);
    m_new = project_to_sphere(m_acc);
  }
  return State(std::move(s_new), std::move(m_new), state.t + dt);
}

}  // namespace

State step(const State& state, const StepConfig& cfg, const ModelParams& params) {
  cfg.validate();
  params.validate();
  require_finite(state.s, "step");
  if (cfg.scheme == Scheme::imex) return step_imex(state, cfg, params);
  return step_rk4(state, cfg, params);
}

double suggest_dt(const State& state, const StepConfig& cfg, const ModelParams& params) {
  cfg.validate();
  params.validate();
  const double a = params.alpha;
  const double a2 = 1.0 + a * a;
  auto sp = Spectral::get(state.grid());
  const double kmax = sp->top_wavenumber();

  const double snm = sup_pointwise_norm(gradient(state.m.field()));
  const double ss = sup_pointwise_norm(state.s);
  const double activation = 1e-10;

  double rate;
  if (cfg.scheme == Scheme::imex) {
    // Explicit nonlinear rates: precession through lap m scales like
    // kmax * |grad m|, the cubic like alpha |grad m|^2, reaction like 1 + |s|.
    rate = (kmax * snm + a * snm * snm + ss) / a2 + 1.0 + ss;
    if (a < 1.0 && snm > activation) {
      // Frozen-coefficient bound for the explicit precession against the
      // implicit damping: dt <= 2 alpha / ((1-alpha^2) kmax^2).
      rate = std::max(rate, (1.0 - a * a) * kmax * kmax / (2.0 * a));
    }
  } else {
    const double sns = sup_pointwise_norm(gradient(state.s));
    const bool nonuniform = (snm + sns) > activation;
    rate = 1.0 + ss;
    if (nonuniform) rate += kmax * kmax * (1.0 + (snm + ss) / a2) / 2.5;
  }
  return std::min(cfg.max_dt, cfg.cfl_safety / rate);
}

RunResult run(State state, double t_end, const StepConfig& cfg, const ModelParams& params,
              const RunOptions& opts) {
  cfg.validate();
  params.validate();
  if (t_end < state.t) throw std::invalid_argument("run: t_end precedes state.t");

  const double e0 = total_energy(state, params);
  const double e_tol = cfg.energy_step_tol * std::max(e0, 1e-300);
  double e_prev = e0;

  RunResult res{std::move(state)};
  auto notify = [&](double dt_used) {
    RunObservation obs{res.state, res.steps, dt_used};
    for (const auto& f : opts.observers) f(obs);
  };
  notify(0.0);

  const double t_eps = 1e-12 * std::max(1.0, std::fabs(t_end));
  while (res.state.t < t_end - t_eps) {
    double dt = std::min(cfg.dt, suggest_dt(res.state, cfg, params));
    dt = std::min(dt, t_end - res.state.t);

    bool accepted = false;
    while (!accepted) {
      StepConfig attempt = cfg;
      attempt.dt = dt;
      bool reject = false;
      std::string cause;
      double e_new = 0.0;
      State next = res.state;  // placeholder; replaced on success
      try {
        next = step(res.state, attempt, params);
        e_new = total_energy(next, params);
        if (cfg.reject_on_energy_increase && e_new > e_prev + e_tol) {
          reject = true;
          cause = "energy increased by " + std::to_string(e_new - e_prev);
        }
      } catch (const NearZeroVector& e) {
        reject = true;
        cause = e.what();
      }
      if (!reject) {
        res.state = std::move(next);
        res.last_dt = dt;
        res.steps += 1;
        e_prev = e_new;
        accepted = true;
        break;
      }
      res.rejected_steps += 1;
      dt *= 0.5;
      if (dt < cfg.min_dt) {
        if (opts.checkpoint) opts.checkpoint(res.state, res.last_dt, res.steps);
        res.status = RunStatus::blowup_suspected;
        res.message = "dt fell below min_dt at t=" + std::to_string(res.state.t) +
                      " after " + std::to_string(res.steps) + " steps: " + cause;
        return res;
      }
    }

    if (opts.observe_every > 0 && res.steps % opts.observe_every == 0) notify(res.last_dt);
    if (opts.checkpoint && opts.checkpoint_every > 0 && res.steps % opts.checkpoint_every == 0)
      opts.checkpoint(res.state, res.last_dt, res.steps);
  }

  // Final observation if the cadence missed the last step.
  if (res.steps > 0 && opts.observe_every > 0 && res.steps % opts.observe_every != 0)
    notify(res.last_dt);
  return res;
}

}  // namespace sllg
