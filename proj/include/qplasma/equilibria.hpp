#pragma once

#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include "qplasma/grid.hpp"
#include "qplasma/streams.hpp"

namespace qplasma::equilibria {

enum class Kind { WaterBag1D, ProjectedFD_T0, ProjectedFD_finiteT };

/// Homogeneous velocity distribution f0(v). Works in any consistent unit
/// system; the normalized convention is n0 = 1, v_F = 1.
class Equilibrium {
 public:
  Kind kind() const { return kind_; }
  double n0() const { return n0_; }
  double v_F() const { return v_F_; }
  /// T/T_F (finite-T only, 0 otherwise).
  double t_over_tf() const { return t_; }
  /// Chemical potential in units of E_F = m v_F^2 / 2 (finite-T only; 1 otherwise).
  double mu() const { return mu_; }

  double operator()(double v) const;
  double derivative(double v) const;
  /// Analytic continuation to complex v (ProjectedFD kinds only; the
  /// water-bag is not analytic). Finite-T continuation is valid for
  /// |Im((mu - v^2)/t)| < pi, see continuation_valid().
  std::complex<double> operator()(std::complex<double> v) const;
  std::complex<double> derivative(std::complex<double> v) const;
  bool continuation_valid(std::complex<double> v) const;

  /// |v| beyond which f0 is zero or below 1e-20 of its peak.
  double support() const;
  /// Points where f0 or f0' is non-smooth (or changes fast).
  std::vector<double> breakpoints() const;

  /// int v^order f0 dv by adaptive quadrature.
  double moment(int order) const;

  bool normalized() const { return n0_ == 1.0 && v_F_ == 1.0; }
  std::string name() const;

 private:
  friend Equilibrium waterbag_1d(double, double);
  friend Equilibrium projected_fd_zero_T(double, double);
  friend Equilibrium projected_fd_finite_T(double, double, double);
  Kind kind_ = Kind::WaterBag1D;
  double n0_ = 1.0, v_F_ = 1.0, t_ = 0.0, mu_ = 1.0;
};

/// f0 = n0 / (2 v_F) on |v| <= v_F.
Equilibrium waterbag_1d(double n0 = 1.0, double v_F = 1.0);

/// 1D Fermi velocity pi hbar n0 / (2 m).
double fermi_velocity_1d(double n0, double hbar, double mass);

/// Zero-temperature 3D Fermi-Dirac projected on one axis:
/// (3/4)(n0/v_F)(1 - v^2/v_F^2) on |v| <= v_F.
Equilibrium projected_fd_zero_T(double n0 = 1.0, double v_F = 1.0);

/// Finite-temperature projection
/// (3/4)(n0/v_F)(T/T_F) ln[1 + exp(-(v^2/v_F^2 - mu/E_F)/(T/T_F))]
/// with mu solved from int f0 dv = n0. Requires 0 < T/T_F <= 1.
Equilibrium projected_fd_finite_T(double t_over_tf, double n0 = 1.0, double v_F = 1.0);

/// Construct by config name: waterbag1d, fd3d_projected_T0, fd3d_projected.
Equilibrium by_name(std::string_view name, double t_over_tf = 0.0);

/// Fermi-Dirac stream occupations p = 1/(1 + exp((u^2 - mu)/t)) with u in
/// v_F units and mu in E_F units; t = 0 gives the step. Renormalized to sum
/// to 1, raw values kept in raw_probabilities.
StreamSpec fd_stream_occupations(double t_over_tf, double mu, const std::vector<double>& velocities);

/// Plane waves psi_a = sqrt(n0) exp(i u_a x / hbar), hbar = H/2. Each u_a
/// must make u_a L / (2 pi hbar) an integer.
StreamSet plane_wave_mixture(double n0, const StreamSpec& spec, const SpatialGrid& grid, double H);

/// Velocity on the commensurate lattice 2 pi hbar / L * integer nearest to u.
double snap_velocity(double u, const SpatialGrid& grid, double H);

/// Discrete Wigner transform of a mixture onto `grid` (x nodes must match
/// streams.grid). Exact when the lambda period 2 pi hbar / dv equals a
/// multiple of 2L.
PhaseSpaceField wigner_of_mixture(const StreamSet& streams, const PhaseSpaceGrid& grid);

/// f0 averaged over each velocity cell, constant in x.
PhaseSpaceField sample(const Equilibrium& eq, const PhaseSpaceGrid& grid);

/// f(x, v) (1 + alpha cos(k x)). k must be a multiple of 2 pi / L.
PhaseSpaceField apply_cosine_perturbation(const PhaseSpaceField& f0, double alpha, double k);

/// True when k L / (2 pi) is an integer to 1e-9.
bool commensurate(double k, const SpatialGrid& grid);

}  // namespace qplasma::equilibria
