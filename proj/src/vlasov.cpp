#include "qplasma/vlasov.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qplasma/error.hpp"

namespace qplasma::vlasov {

Integrator::Integrator(const PhaseSpaceGrid& grid, double background, Options options)
    : grid_(grid), background_(background), options_(options), ops_(grid.space) {
  grid_.validate();
  if (!(background > 0.0)) throw DomainError("background density must be positive");
}

void Integrator::advect_x(PhaseSpaceField& f, double dt) const {
  if (options_.x_interp == Interpolation::Spline)
    kernels::advect_x_spline(f, dt, options_.exec);
  else
    kernels::advect_x_spectral(f, dt, options_.exec);
}

std::vector<double> Integrator::potential(const PhaseSpaceField& f) const {
  if (!options_.self_consistent) return std::vector<double>(grid_.nx(), 0.0);
  const auto n = fields::density(f);
  return ops_.poisson(n, background_, options_.neutrality_tolerance);
}

void Integrator::step(VlasovState& state, double dt) const {
  if (!(dt > 0.0)) throw DomainError("time step must be positive");
  if (!(state.f.grid() == grid_)) throw DomainError("state grid does not match integrator");
  advect_x(state.f, 0.5 * dt);
  const auto phi = potential(state.f);
  auto accel = ops_.derivative(phi, 1);
  if (options_.v_interp == Interpolation::Spline)
    kernels::advect_v_spline(state.f, accel, dt, options_.exec);
  else
    kernels::advect_v_spectral(state.f, accel, dt, options_.exec);
  advect_x(state.f, 0.5 * dt);
  state.time += dt;
  check_finite(state.f, state.time, "vlasov");
}

DiagnosticSample Integrator::diagnose(const VlasovState& state) const {
  const std::size_t nx = grid_.nx();
  std::vector<double> n(nx), j(nx), p2(nx);
  kernels::velocity_moments(state.f, n, j, p2, options_.exec);
  DiagnosticSample s;
  s.t = state.time;
  const double inv = 1.0 / static_cast<double>(nx);
  for (std::size_t i = 0; i < nx; ++i) {
    s.mass += n[i] * inv;
    s.momentum += j[i] * inv;
    s.kinetic_energy += 0.5 * p2[i] * inv;
  }
  if (options_.self_consistent) {
    const auto phi = ops_.poisson(n, background_, options_.neutrality_tolerance);
    s.field_energy = fields::field_energy(ops_.electric_field(phi), grid_.space);
  }
  s.total_energy = s.kinetic_energy + s.field_energy;
  return s;
}

double advisory_dt(const PhaseSpaceGrid& grid, double max_efield) {
  const double a = grid.space.dx() / grid.v_max;
  const double b = max_efield > 0.0 ? grid.dv() / max_efield : a;
  return 0.5 * std::min(a, b);
}

void check_finite(const PhaseSpaceField& f, double time, const char* model) {
  const auto d = f.data();
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (!std::isfinite(d[k])) {
      std::ostringstream msg;
      msg << model << ": non-finite value at t=" << time << " in cell (ix=" << k / f.nv() << ", iv=" << k % f.nv()
          << ")";
      throw NumericError(msg.str());
    }
  }
}

}  // namespace qplasma::vlasov
