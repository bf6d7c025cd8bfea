#include "qplasma/hartree.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qplasma/equilibria.hpp"
#include "qplasma/error.hpp"

namespace qplasma::hartree {

Integrator::Integrator(const SpatialGrid& grid, double H, double background, Options options)
    : grid_(grid), H_(H), background_(background), options_(options), ops_(grid) {
  if (!(H > 0.0)) throw DomainError("Schrodinger dynamics needs H > 0");
}

std::vector<double> Integrator::potential(const StreamSet& s) const {
  if (!options_.self_consistent) return std::vector<double>(grid_.nx, 0.0);
  return ops_.poisson(s.density(), background_, options_.neutrality_tolerance);
}

void Integrator::step(HartreeState& state, double dt) const {
  if (!(dt > 0.0)) throw DomainError("time step must be positive");
  auto& s = state.streams;
  if (!(s.grid == grid_)) throw DomainError("stream grid does not match integrator");
  kernels::kinetic_phase(s.psi, grid_, hbar(), 0.5 * dt, options_.exec);
  last_source_ = s.density();
  std::vector<double> V(grid_.nx, 0.0);
  if (options_.self_consistent) {
    V = ops_.poisson(last_source_, background_, options_.neutrality_tolerance);
    for (double& v : V) v = -v;
  }
  kernels::potential_phase(s.psi, V, hbar(), dt, options_.exec);
  kernels::kinetic_phase(s.psi, grid_, hbar(), 0.5 * dt, options_.exec);
  state.time += dt;
  for (std::size_t a = 0; a < s.psi.size(); ++a) {
    for (std::size_t i = 0; i < grid_.nx; ++i) {
      if (!std::isfinite(s.psi[a][i].real()) || !std::isfinite(s.psi[a][i].imag())) {
        std::ostringstream msg;
        msg << "hartree: non-finite wavefunction at t=" << state.time << " (stream " << a << ", ix=" << i << ")";
        throw NumericError(msg.str());
      }
    }
  }
}

DiagnosticSample Integrator::diagnose(const HartreeState& state) const {
  const auto& s = state.streams;
  const std::size_t nx = grid_.nx;
  const ComplexFft fft(nx);
  DiagnosticSample d;
  d.t = state.time;
  const double inv2 = 1.0 / (static_cast<double>(nx) * static_cast<double>(nx));
  std::vector<cplx> spec(nx);
  for (std::size_t a = 0; a < s.size(); ++a) {
    fft.forward(s.psi[a], spec);
    double ke = 0.0, mom = 0.0, mass = 0.0;
    for (std::size_t k = 0; k < nx; ++k) {
      const double kk = grid_.k(k);
      const double w = std::norm(spec[k]) * inv2;
      mass += w;
      if (k != nx / 2) mom += hbar() * kk * w;
      ke += 0.5 * hbar() * hbar() * kk * kk * w;
    }
    d.mass += s.probabilities[a] * mass;
    d.momentum += s.probabilities[a] * mom;
    d.kinetic_energy += s.probabilities[a] * ke;
  }
  if (options_.self_consistent) {
    const auto phi = potential(s);
    d.field_energy = fields::field_energy(ops_.electric_field(phi), grid_);
  }
  d.total_energy = d.kinetic_energy + d.field_energy;
  return d;
}

double norm(const std::vector<cplx>& psi) {
  double s = 0.0;
  for (const auto& z : psi) s += std::norm(z);
  return s / static_cast<double>(psi.size());
}

StreamSet perturbed_mixture(const StreamSpec& spec, const SpatialGrid& grid, double H, double alpha, double K) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw DomainError("perturbation amplitude must lie in [0, 1)");
  if (!equilibria::commensurate(K, grid)) throw DomainError("perturbation wavenumber is not commensurate with the box");
  StreamSet s = equilibria::plane_wave_mixture(1.0, spec, grid, H);
  for (auto& psi : s.psi)
    for (std::size_t i = 0; i < grid.nx; ++i) psi[i] *= std::sqrt(1.0 + alpha * std::cos(K * grid.x(i)));
  return s;
}

void madelung(const std::vector<cplx>& psi, const SpatialGrid& grid, double hbar, std::vector<double>& n,
              std::vector<double>& u, std::vector<bool>& masked, double vacuum) {
  const std::size_t nx = grid.nx;
  n.assign(nx, 0.0);
  u.assign(nx, 0.0);
  masked.assign(nx, false);
  double nmax = 0.0;
  for (std::size_t i = 0; i < nx; ++i) {
    n[i] = std::norm(psi[i]);
    nmax = std::max(nmax, n[i]);
  }
  for (std::size_t i = 0; i < nx; ++i) {
    const std::size_t ip = (i + 1) % nx, im = (i + nx - 1) % nx;
    if (n[i] < vacuum * nmax || n[ip] < vacuum * nmax || n[im] < vacuum * nmax) {
      masked[i] = true;
      continue;
    }
    u[i] = hbar * std::arg(psi[ip] * std::conj(psi[im])) / (2.0 * grid.dx());
  }
}

MadelungFields madelung_decompose(const StreamSet& s, double vacuum) {
  MadelungFields m;
  for (const auto& psi : s.psi) {
    std::vector<double> n, u;
    std::vector<bool> mask;
    madelung(psi, s.grid, s.hbar(), n, u, mask, vacuum);
    m.density.push_back(std::move(n));
    m.velocity.push_back(std::move(u));
    m.masked.push_back(std::move(mask));
  }
  return m;
}

std::vector<double> bohm_force(const std::vector<double>& n, const fields::PeriodicSpectral& ops, double hbar) {
  std::vector<double> a(n.size());
  for (std::size_t i = 0; i < n.size(); ++i) a[i] = std::sqrt(std::max(n[i], 0.0));
  const auto axx = ops.derivative(a, 2);
  std::vector<double> q(n.size());
  for (std::size_t i = 0; i < n.size(); ++i) q[i] = axx[i] / a[i];
  auto f = ops.derivative(q, 1);
  for (double& x : f) x *= 0.5 * hbar * hbar;
  return f;
}

}  // namespace qplasma::hartree
