#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>

#include "sllg/integrator.hpp"
#include "sllg/littlewood_paley.hpp"

namespace sllg {

/// Initial data generators. All kinds produce a unit-norm m and a finite s,
/// bit-reproducibly from the seed.
struct InitialData {
  enum class Kind { uniform, fourier_random, bubble, file };
  Kind kind = Kind::uniform;
  Grid grid{64, 64, 1.0, 1.0};
  std::uint64_t seed = 0;

  // uniform
  std::array<double, 3> m_direction{0.0, 0.0, 1.0};
  std::array<double, 3> s_value{0.0, 0.0, 0.0};

  // fourier_random: m = normalize(m_direction + m_amplitude * w), both w and
  // the s field band-limited to |k| <= band per axis.
  int band = 2;
  double m_amplitude = 0.15;
  double s_amplitude = 1.0;

  // bubble: inverse stereographic profile of scale `bubble_scale` centered at
  // `center`, steered smoothly to the constant (0,0,-1) before the cell edge.
  double bubble_scale = 0.125;
  std::array<double, 2> center{0.5, 0.5};

  // file
  std::string s_path;
  std::string m_path;
};

State make_initial(const InitialData& data);

/// Closed-form plane energy of the stereographic bubble profile.
inline constexpr double kBubblePlaneEnergy = 8.0 * 3.14159265358979323846;

/// True when the mollifier kernel at scale eps is narrower than a grid cell.
bool mollifier_under_resolved(const Grid& grid, double eps);

/// Periodic mollification at scale eps > 0: convolution with the unit-mass
/// radial bump exp(-1/(1-|x/eps|^2)), realized as a spectral multiplier.
/// The sampled kernel is renormalized to exact unit discrete mass, so the
/// mean of f is preserved to rounding. Warns on stderr when under-resolved.
Field mollify(const Field& f, double eps);

struct TwinRunConfig {
  InitialData base;
  double delta = 1e-6;  // perturbation magnitude; 0 reproduces the base run twice
  enum class Perturb { s_only, m_only, both } perturb = Perturb::both;
  double beta_exp = 0.25;     // Besov exponent for W, in (0,1/2)
  double horizon = 0.05;
  long cadence = 1;           // observations every this many accepted steps
  StepConfig step;
  double mollify_eps = 0.1;   // smoothing scale of the perturbation field
  std::uint64_t perturb_seed = 1;
};

struct UniquenessReport {
  std::vector<UniquenessEntry> entries;
  std::vector<double> int_hbar;  // running trapezoid of hbar, aligned with entries
  double W0 = 0.0;
  /// Smallest c with W(t) <= W(0) exp(c * int_0^t hbar) across observations
  /// with W above the noise floor; 0 when no observation is eligible.
  double c_hat = 0.0;
  RunStatus status = RunStatus::completed;
  long steps = 0;
  std::string message;

  void write_csv(std::ostream& os) const;
  static std::string csv_header();
};

/// Evolves the base state and its perturbed twin in lockstep with a shared
/// step size and identical integrator settings, recording the uniqueness
/// functional along the way. A blow-up stop in either run truncates the
/// report at the last common time.
UniquenessReport twin_run(const TwinRunConfig& cfg, const ModelParams& params);

}  // namespace sllg
