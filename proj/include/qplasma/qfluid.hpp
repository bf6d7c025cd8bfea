#pragma once

#include <vector>

#include "qplasma/fields.hpp"
#include "qplasma/kernels.hpp"
#include "qplasma/series.hpp"

namespace qplasma::qfluid {

/// Polytropic equation of state P = p0 n^gamma (normalized by n0 m v_F^2).
struct EquationOfState {
  double gamma = 3.0;
  double p0 = 1.0 / 3.0;

  /// Effective potential W(n) = p0 gamma n^(gamma-1) / (gamma - 1), so
  /// that n W'(n) = P'(n).
  double W(double n) const;
  /// Internal energy density p0 n^gamma / (gamma - 1).
  double internal(double n) const;
  /// Squared sound speed gamma p0 at n = 1.
  double sound_speed_squared() const { return gamma * p0; }
  void validate() const;
};

/// 1D degenerate closure: gamma = 3, P = n^3 / 3, W = n^2 / 2.
EquationOfState degenerate_1d();
/// gamma = 3 with the 3D Fermi pressure p0 = 1/5.
EquationOfState degenerate_3d_gamma3();

struct FluidState {
  std::vector<cplx> psi;
  double time = 0.0;
};

struct Options {
  Exec exec = Exec::Parallel;
  double neutrality_tolerance = 1e-8;
  bool self_consistent = true;
};

/// Split-step integrator for the effective nonlinear Schrodinger equation
/// i hbar Psi_t = -(hbar^2/2) Psi_xx + (-phi + W(|Psi|^2) - W(1)) Psi.
class Integrator {
 public:
  Integrator(const SpatialGrid& grid, double H, EquationOfState eos = degenerate_1d(), Options options = {});

  const SpatialGrid& grid() const { return grid_; }
  const EquationOfState& eos() const { return eos_; }
  double hbar() const { return 0.5 * H_; }

  void step(FluidState& state, double dt) const;
  std::vector<double> potential(const FluidState& state) const;
  /// Kinetic (quantum + flow), field and internal energy per unit length.
  DiagnosticSample diagnose(const FluidState& state) const;

 private:
  SpatialGrid grid_;
  double H_;
  EquationOfState eos_;
  Options options_;
  fields::PeriodicSpectral ops_;
};

/// Psi = sqrt(1 + alpha cos(K x)) with zero phase.
FluidState seeded_state(const SpatialGrid& grid, double alpha, double K);

/// n = |Psi|^2, u = hbar grad(arg Psi).
void madelung_fields(const FluidState& state, const SpatialGrid& grid, double hbar, std::vector<double>& n,
                     std::vector<double>& u, std::vector<bool>& masked, double vacuum = 1e-6);

}  // namespace qplasma::qfluid
