#pragma once

#include <span>
#include <vector>

#include "qplasma/fft.hpp"
#include "qplasma/fields.hpp"
#include "qplasma/grid.hpp"

namespace qplasma {

/// Execution policy for the phase-space kernels. Serial is the reference
/// path; Parallel distributes independent rows over OpenMP threads and
/// produces bitwise identical results.
enum class Exec { Serial, Parallel };

namespace kernels {

/// Interpolating cubic B-spline on n uniform nodes. Periodic, or with
/// coefficients taken as zero beyond both ends.
class SplineLine {
 public:
  SplineLine(std::size_t n, bool periodic);
  std::size_t size() const { return n_; }
  /// out_i = S(i - shift), shift in cells. `work` needs size() entries;
  /// `in` and `out` may alias.
  void shift(std::span<const double> in, std::span<double> out, double shift, std::span<double> work) const;

 private:
  void coefficients(std::span<const double> f, std::span<double> c) const;
  std::size_t n_;
  bool periodic_;
  std::vector<double> cp_;  // forward-eliminated super-diagonal
  std::vector<double> dp_;  // pivots
  std::vector<double> z_;   // periodic correction vector
  double zfac_ = 0.0;
};

/// Free streaming over dt: f(x, v) <- f(x - v dt, v), cubic spline in x.
void advect_x_spline(PhaseSpaceField& f, double dt, Exec exec);
/// Same shift applied exactly with Fourier phases in x.
void advect_x_spectral(PhaseSpaceField& f, double dt, Exec exec);

/// Acceleration step f(x, v) <- f(x, v - a(x) dt), cubic spline in v with
/// zero inflow at the velocity edges.
void advect_v_spline(PhaseSpaceField& f, std::span<const double> accel, double dt, Exec exec);
/// Same shift by Fourier phases in v (periodic in v).
void advect_v_spectral(PhaseSpaceField& f, std::span<const double> accel, double dt, Exec exec);

/// dV[m * nx + ix] = V(x + lambda_m / 2) - V(x - lambda_m / 2) for
/// m = 0..nv/2, with V interpolated spectrally.
std::vector<double> potential_differences(std::span<const double> V, const fields::PeriodicSpectral& ops,
                                          const PhaseSpaceGrid& grid, double hbar, Exec exec);

/// Quantum kick in lambda space: each row's half-spectrum over v is
/// multiplied by exp(i dt dV / hbar).
void kick_lambda(PhaseSpaceField& f, std::span<const double> dV, double hbar, double dt, Exec exec);

/// psi_k <- psi_k exp(-i hbar k^2 dt / 2) for every wavefunction.
void kinetic_phase(std::vector<std::vector<cplx>>& psi, const SpatialGrid& grid, double hbar, double dt, Exec exec);

/// psi <- psi exp(-i V dt / hbar), V shared by all wavefunctions.
void potential_phase(std::vector<std::vector<cplx>>& psi, std::span<const double> V, double hbar, double dt,
                     Exec exec);

/// Velocity moments sum_v f, sum_v f v, sum_v f v^2 (times dv) per x.
void velocity_moments(const PhaseSpaceField& f, std::span<double> n, std::span<double> j, std::span<double> p2,
                      Exec exec);

}  // namespace kernels
}  // namespace qplasma
