#include "qplasma/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qplasma/error.hpp"
#include "qplasma/vlasov.hpp"

namespace qplasma::wigner {

Integrator::Integrator(const PhaseSpaceGrid& grid, double H, double background, Options options)
    : grid_(grid), H_(H), background_(background), options_(std::move(options)), ops_(grid.space) {
  grid_.validate();
  if (!(H > 0.0)) throw DomainError("Wigner integrator needs H > 0");
  if (!(background > 0.0)) throw DomainError("background density must be positive");
}

double Integrator::lambda_max() const { return static_cast<double>(grid_.nv / 2) * grid_.dlambda(hbar()); }

std::vector<double> Integrator::potential(const PhaseSpaceField& f) const {
  if (!options_.self_consistent) return std::vector<double>(grid_.nx(), 0.0);
  const auto n = fields::density(f);
  return ops_.poisson(n, background_, options_.neutrality_tolerance);
}

void Integrator::step(WignerState& state, double dt) {
  if (!(dt > 0.0)) throw DomainError("time step must be positive");
  if (!(state.f.grid() == grid_)) throw DomainError("state grid does not match integrator");
  const std::size_t nx = grid_.nx(), nm = grid_.nv / 2 + 1;
  kernels::advect_x_spectral(state.f, 0.5 * dt, options_.exec);

  auto V = potential(state.f);
  for (double& v : V) v = -v;
  auto dV = kernels::potential_differences(V, ops_, grid_, hbar(), options_.exec);
  if (options_.external) {
    for (std::size_t m = 0; m < nm; ++m) {
      const double lam = grid_.lambda(static_cast<std::ptrdiff_t>(m), hbar());
      for (std::size_t i = 0; i < nx; ++i) dV[m * nx + i] += options_.external(grid_.space.x(i), lam);
    }
  }
  double jump = 0.0;
  for (std::size_t m = 0; m + 1 < nm; ++m)
    for (std::size_t i = 0; i < nx; ++i) jump = std::max(jump, std::abs(dV[(m + 1) * nx + i] - dV[m * nx + i]));
  if (jump * dt / hbar() > std::numbers::pi) ++aliasing_;
  kernels::kick_lambda(state.f, dV, hbar(), dt, options_.exec);

  kernels::advect_x_spectral(state.f, 0.5 * dt, options_.exec);
  state.time += dt;
  vlasov::check_finite(state.f, state.time, "wigner");
}

DiagnosticSample Integrator::diagnose(const WignerState& state) const {
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

PhaseSpaceField positive_part(const PhaseSpaceField& f) {
  PhaseSpaceField out = f;
  for (double& x : out.data()) x = std::max(x, 0.0);
  return out;
}

PhaseSpaceField negative_part(const PhaseSpaceField& f) {
  PhaseSpaceField out = f;
  for (double& x : out.data()) x = std::max(-x, 0.0);
  return out;
}

double negative_mass(const PhaseSpaceField& f) {
  return negative_part(f).mass() / f.grid().space.length;
}

EhrenfestPair ehrenfest(const Integrator& integ, const WignerState& state) {
  const auto& g = integ.grid();
  const auto n = fields::density(state.f);
  const fields::PeriodicSpectral ops(g.space);
  const auto phi = integ.potential(state.f);
  const auto phix = ops.derivative(phi, 1);
  const auto m = fields::moments(state.f);
  EhrenfestPair e;
  const double inv = 1.0 / static_cast<double>(g.nx());
  for (std::size_t i = 0; i < g.nx(); ++i) {
    e.mean_velocity += m.flux[i] * inv;
    e.mean_force += n[i] * phix[i] * inv;
  }
  return e;
}

std::vector<LimitRow> semiclassical_limit_check(const PhaseSpaceField& f0, const std::vector<double>& H_list,
                                                double t_end, double dt, double sample_every, Exec exec) {
  if (!(t_end > 0.0) || !(dt > 0.0) || !(sample_every >= dt)) throw DomainError("invalid time parameters");
  const auto& grid = f0.grid();
  const auto n0 = fields::density(f0);
  double background = 0.0;
  for (double x : n0) background += x / static_cast<double>(n0.size());
  const auto steps = static_cast<std::size_t>(std::llround(t_end / dt));
  const auto every = static_cast<std::size_t>(std::llround(sample_every / dt));

  vlasov::Options vopt;
  vopt.x_interp = vlasov::Interpolation::Spectral;
  vopt.v_interp = vlasov::Interpolation::Spectral;
  vopt.exec = exec;
  const vlasov::Integrator vint(grid, background, vopt);
  std::vector<PhaseSpaceField> reference{f0};
  vlasov::VlasovState vs{f0, 0.0};
  for (std::size_t k = 1; k <= steps; ++k) {
    vint.step(vs, dt);
    if (k % every == 0) reference.push_back(vs.f);
  }

  std::vector<LimitRow> rows;
  for (double H : H_list) {
    LimitRow row;
    row.H = H;
    Options wopt;
    wopt.exec = exec;
    Integrator wint(grid, H, background, wopt);
    WignerState ws{f0, 0.0, H, "shared initial condition"};
    std::size_t r = 0;
    auto record = [&] {
      double dev = 0.0;
      const auto a = ws.f.data();
      const auto b = reference[r].data();
      for (std::size_t q = 0; q < a.size(); ++q) dev = std::max(dev, std::abs(a[q] - b[q]));
      row.times.push_back(ws.time);
      row.deviation.push_back(dev);
      ++r;
    };
    record();
    for (std::size_t k = 1; k <= steps; ++k) {
      wint.step(ws, dt);
      if (k % every == 0) record();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace qplasma::wigner
