#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sllg/model.hpp"

namespace sllg {

/// Coupled simulation state: spin accumulation s, unit magnetization m,
/// simulation clock t. Both fields live on the same grid.
struct State {
  Field s;
  Magnetization m;
  double t = 0.0;

  State(Field s_, Magnetization m_, double t_ = 0.0)
      : s(std::move(s_)), m(std::move(m_)), t(t_) {
    require_same_grid(s, m.field(), "State");
    require_ncomp(s, 3, "State");
  }
  const Grid& grid() const { return s.grid(); }
};

enum class Scheme { imex, explicit_rk4 };

struct StepConfig {
  double dt = 1e-3;          // requested step; run() may shrink it
  Scheme scheme = Scheme::imex;
  double cfl_safety = 0.9;   // in (0,1]
  double max_dt = 1e-2;
  double min_dt = 1e-12;     // below this a rejected step becomes a hard stop
  bool freeze_m = false;     // hold m fixed in time (linear s-equation mode)
  double energy_step_tol = 1e-8;  // allowed per-step energy increase, relative to E0
  bool reject_on_energy_increase = true;

  void validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("StepConfig: dt must be positive");
    if (!(cfl_safety > 0.0) || cfl_safety > 1.0)
      throw std::invalid_argument("StepConfig: cfl_safety must lie in (0,1]");
    if (!(max_dt > 0.0) || !(min_dt > 0.0) || min_dt > max_dt)
      throw std::invalid_argument("StepConfig: need 0 < min_dt <= max_dt");
  }
};

/// Total energy E = int |s|^2 + alpha * int |grad m|^2.
double total_energy(const State& state, const ModelParams& params);

/// One time step of size cfg.dt.
///
/// imex: the constant-coefficient stiff parts (alpha/(1+alpha^2) * lap m and
/// the mean-diffusivity Laplacian (1-beta/2) lap s) are inverted in Fourier
/// space; everything else, including the anisotropic deviation
/// div((A(m) - (1-beta/2) I) grad s), is explicit. m is re-projected to the
/// sphere afterwards, so the returned state satisfies the unit constraint to
/// rounding.
///
/// explicit_rk4: classical four-stage Runge-Kutta on the full right-hand
/// side, projection after the combined update.
State step(const State& state, const StepConfig& cfg, const ModelParams& params);

/// Stability-motivated step bound from the measured sup-norms of the state
/// and the top dealiased wavenumber, scaled by cfg.cfl_safety and capped at
/// cfg.max_dt. Monotone nonincreasing in the sup-norms; a state with zero
/// explicit terms gets max_dt.
double suggest_dt(const State& state, const StepConfig& cfg, const ModelParams& params);

enum class RunStatus { completed, blowup_suspected };

struct RunObservation {
  const State& state;
  long step_index;   // accepted steps so far
  double dt;         // dt used for the step that produced this state (0 at t=0)
};
using Observer = std::function<void(const RunObservation&)>;
/// Called with (state, dt, accepted-step counter) at checkpoint cadence and
/// on failure with the last healthy state.
using CheckpointSink = std::function<void(const State&, double, long)>;

struct RunOptions {
  long observe_every = 1;       // observer cadence in accepted steps
  long checkpoint_every = 0;    // 0 = only on failure
  std::vector<Observer> observers;
  CheckpointSink checkpoint;
};

struct RunResult {
  State state;          // final state, or last healthy state on failure
  RunStatus status = RunStatus::completed;
  long steps = 0;
  long rejected_steps = 0;
  double last_dt = 0.0;
  std::string message;  // failure cause when status != completed
};

/// Repeated stepping with dt control: each step uses
/// min(cfg.dt, suggest_dt(state)), truncated to land on t_end. Rejected
/// steps (projection failure, or an energy increase beyond
/// cfg.energy_step_tol * E0) halve dt; once dt would fall below cfg.min_dt
/// the run stops with status blowup_suspected and the last healthy state.
RunResult run(State state, double t_end, const StepConfig& cfg, const ModelParams& params,
              const RunOptions& opts = {});

}  // namespace sllg
