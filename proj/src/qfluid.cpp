#include "qplasma/qfluid.hpp"

#include <cmath>
#include <sstream>

#include "qplasma/equilibria.hpp"
#include "qplasma/error.hpp"
#include "qplasma/hartree.hpp"

namespace qplasma::qfluid {

double EquationOfState::W(double n) const { return p0 * gamma * std::pow(n, gamma - 1.0) / (gamma - 1.0); }

double EquationOfState::internal(double n) const { return p0 * std::pow(n, gamma) / (gamma - 1.0); }

void EquationOfState::validate() const {
  if (!(gamma > 1.0)) throw DomainError("polytropic exponent must exceed 1");
  if (!(p0 >= 0.0)) throw DomainError("reference pressure must be non-negative");
}

EquationOfState degenerate_1d() { return {3.0, 1.0 / 3.0}; }
EquationOfState degenerate_3d_gamma3() { return {3.0, 0.2}; }

Integrator::Integrator(const SpatialGrid& grid, double H, EquationOfState eos, Options options)
    : grid_(grid), H_(H), eos_(eos), options_(options), ops_(grid) {
  if (!(H > 0.0)) throw DomainError("the wavefunction form needs H > 0");
  eos_.validate();
}

std::vector<double> Integrator::potential(const FluidState& state) const {
  if (!options_.self_consistent) return std::vector<double>(grid_.nx, 0.0);
  std::vector<double> n(grid_.nx);
  for (std::size_t i = 0; i < grid_.nx; ++i) n[i] = std::norm(state.psi[i]);
  return ops_.poisson(n, 1.0, options_.neutrality_tolerance);
}

void Integrator::step(FluidState& state, double dt) const {
  if (!(dt > 0.0)) throw DomainError("time step must be positive");
  if (state.psi.size() != grid_.nx) throw DomainError("wavefunction length does not match grid");
  std::vector<std::vector<cplx>> one{std::move(state.psi)};
  kernels::kinetic_phase(one, grid_, hbar(), 0.5 * dt, options_.exec);
  FluidState view{one[0], state.time};
  const auto phi = potential(view);
  std::vector<double> V(grid_.nx);
  const double w1 = eos_.W(1.0);
  for (std::size_t i = 0; i < grid_.nx; ++i) V[i] = -phi[i] + eos_.W(std::norm(one[0][i])) - w1;
  kernels::potential_phase(one, V, hbar(), dt, options_.exec);
  kernels::kinetic_phase(one, grid_, hbar(), 0.5 * dt, options_.exec);
  state.psi = std::move(one[0]);
  state.time += dt;
  for (std::size_t i = 0; i < grid_.nx; ++i) {
    if (!std::isfinite(state.psi[i].real()) || !std::isfinite(state.psi[i].imag())) {
      std::ostringstream msg;
      msg << "fluid: non-finite wavefunction at t=" << state.time << " (ix=" << i << ")";
      throw NumericError(msg.str());
    }
  }
}

DiagnosticSample Integrator::diagnose(const FluidState& state) const {
  const std::size_t nx = grid_.nx;
  const ComplexFft fft(nx);
  std::vector<cplx> spec(nx);
  fft.forward(state.psi, spec);
  DiagnosticSample d;
  d.t = state.time;
  const double inv2 = 1.0 / (static_cast<double>(nx) * static_cast<double>(nx));
  for (std::size_t k = 0; k < nx; ++k) {
    const double kk = grid_.k(k);
    const double w = std::norm(spec[k]) * inv2;
    d.mass += w;
    if (k != nx / 2) d.momentum += hbar() * kk * w;
    d.kinetic_energy += 0.5 * hbar() * hbar() * kk * kk * w;
  }
  double internal = 0.0;
  for (std::size_t i = 0; i < nx; ++i) internal += eos_.internal(std::norm(state.psi[i]));
  internal /= static_cast<double>(nx);
  if (options_.self_consistent) {
    const auto phi = potential(state);
    d.field_energy = fields::field_energy(ops_.electric_field(phi), grid_);
  }
  d.total_energy = d.kinetic_energy + d.field_energy + internal;
  return d;
}

FluidState seeded_state(const SpatialGrid& grid, double alpha, double K) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw DomainError("perturbation amplitude must lie in [0, 1)");
  if (!equilibria::commensurate(K, grid)) throw DomainError("perturbation wavenumber is not commensurate with the box");
  FluidState s;
  s.psi.resize(grid.nx);
  for (std::size_t i = 0; i < grid.nx; ++i) s.psi[i] = std::sqrt(1.0 + alpha * std::cos(K * grid.x(i)));
  return s;
}

void madelung_fields(const FluidState& state, const SpatialGrid& grid, double hbar, std::vector<double>& n,
                     std::vector<double>& u, std::vector<bool>& masked, double vacuum) {
  hartree::madelung(state.psi, grid, hbar, n, u, masked, vacuum);
}

}  // namespace qplasma::qfluid
