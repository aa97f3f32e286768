#pragma once

#include <iosfwd>
#include <memory>
#include <vector>

#include "sllg/integrator.hpp"
#include "sllg/spectral.hpp"

namespace sllg {

/// Dyadic frequency decomposition on the discrete torus.
///
/// The low cutoff chi is a smooth radial profile equal to 1 for r <= 3/4 and
/// 0 for r >= 4/3 (the classical exp(-1/x) transition); the annulus profile
/// is the telescoping difference phi(r) = chi(r/2) - chi(r), supported in
/// 3/4 <= r <= 8/3. Radii are measured in units of the base frequency
/// xi0 = 2*pi/lx, so shell j occupies the lattice ring 2^j * [3/4, 8/3].
///
/// Because the shells telescope, chi + sum_j phi(2^-j .) equals
/// chi(2^-(jmax+1) .), which is identically 1 on the whole dealiased band by
/// the choice of jmax; the partition of unity is exact there up to rounding.
/// On a finite grid the shell count is finite and sup over j becomes a max
/// over the available shells.
class DyadicPartition {
 public:
  struct Params {
    double support_lo = 0.75;       // chi == 1 below this radius
    double support_hi = 4.0 / 3.0;  // chi == 0 above this radius
  };

  /// Throws std::invalid_argument when the grid carries fewer than three
  /// usable annulus shells.
  static DyadicPartition build(const Grid& grid, const Params& params);
  static DyadicPartition build(const Grid& grid) { return build(grid, Params{}); }

  const Grid& grid() const { return sp_->grid(); }
  int jmax() const { return jmax_; }
  /// Number of blocks including the low block (j = -1 .. jmax).
  int block_count() const { return jmax_ + 2; }
  /// Shell has lattice sites with positive weight inside the dealiased band.
  bool shell_nonempty(int j) const { return nonempty_.at(j + 1); }

  /// Frequency block Delta_j; j = -1 selects the low block chi(D).
  Field block(const Field& f, int j) const;
  /// Low-pass S_j = chi(2^-j D) = sum_{k <= j-1} Delta_k (exact telescoping).
  Field low_pass(const Field& f, int j) const;

  /// L2 norms of all blocks of f (index j+1), one forward transform per
  /// component, Parseval-weighted.
  std::vector<double> block_l2_norms(const Field& f) const;

  double chi(double r) const;
  double phi(double r) const { return chi(0.5 * r) - chi(r); }

  /// Cutoff values over the distinct lattice radii, for reproducibility
  /// audits. CSV: radius, chi, phi_0 .. phi_jmax.
  void dump_profile(std::ostream& os) const;

 private:
  DyadicPartition() = default;
  const std::vector<double>& multiplier(int j) const { return mult_.at(j + 1); }

  std::shared_ptr<const Spectral> sp_;
  Params params_;
  int jmax_ = 0;
  std::vector<std::vector<double>> mult_;      // index j+1
  std::vector<std::vector<double>> lowpass_;   // chi(2^-j .), index j
  std::vector<char> nonempty_;
};

/// Inhomogeneous Besov norm B^s_{2,inf}: max over blocks of 2^{js} ||Delta_j f||_2.
double besov_norm(const Field& f, double s, const DyadicPartition& part);

/// Bony paraproduct decomposition of the pointwise product u*v
/// (componentwise for multi-component fields):
///   u*v = T_u v + T_v u + R(u,v),
/// with T_u v = sum_j S_{j-1} u Delta_j v and R the resonant part
/// sum_{|j-j'|<=1} Delta_j u Delta_j' v. Exact on dealiased inputs.
struct BonyParts {
  Field low_high;  // T_u v
  Field high_low;  // T_v u
  Field resonant;  // R(u,v)
};
BonyParts bony_decomposition(const Field& u, const Field& v, const DyadicPartition& part);

/// Commutator [Delta_j, f] grad g = Delta_j(f grad g) - f Delta_j(grad g)
/// for scalar f; measures the smoothing gained by commuting a block with a
/// coefficient.
Field commutator_block(const Field& f, const Field& g, int j, const DyadicPartition& part);

/// One observation of the twin-solution uniqueness functional.
/// With differences ds = s1-s2, dm = m1-m2:
///   W_j = ||Delta_j ds||_2^2 + ||Delta_j grad dm||_2^2 + ||Delta_{-1} dm||_2^2,
///   W   = max_{j >= -1} 2^{-2 j beta} W_j,
/// and the Gronwall weight
///   hbar = 1 + sum ||.||_4^4 over {s1,s2,grad m1,grad m2}
///            + sum ||dt m_i||_2^2 + sum ||.||_{H^1}^2 over the same fields,
/// with dt m taken from the evaluated right-hand side.
struct UniquenessEntry {
  double t = 0.0;
  double W = 0.0;
  int argmax_shell = -1;
  double hbar = 0.0;
  std::vector<double> Wj;
};
UniquenessEntry uniqueness_functional(const State& a, const State& b, double beta_exp,
                                      const DyadicPartition& part, const ModelParams& params);

}  // namespace sllg
