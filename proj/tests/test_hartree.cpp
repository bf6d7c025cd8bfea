#include "doctest.h"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qplasma/diagio.hpp"
#include "qplasma/dispersion.hpp"
#include "qplasma/equilibria.hpp"
#include "qplasma/error.hpp"
#include "qplasma/fields.hpp"
#include "qplasma/hartree.hpp"
#include "qplasma/wigner.hpp"

using namespace qplasma;
using namespace qplasma::hartree;
namespace eq = qplasma::equilibria;

namespace {

double cos_mode(const std::vector<double>& n, const SpatialGrid& g, double K) {
  double s = 0.0;
  for (std::size_t i = 0; i < g.nx; ++i) s += n[i] * std::cos(K * g.x(i)) / static_cast<double>(g.nx);
  return s;
}

double measured_frequency(const StreamSpec& spec, double H, double K, double t_end) {
  const SpatialGrid g{2 * std::numbers::pi / K, 64};
  const Integrator integ(g, H);
  HartreeState s{perturbed_mixture(spec, g, H, 1e-3, K), 0.0};
  std::vector<double> t, y;
  const double dt = 0.02;
  while (s.time < t_end) {
    t.push_back(s.time);
    y.push_back(cos_mode(s.streams.density(), g, K));
    integ.step(s, dt);
  }
  return diagio::estimate_frequency(t, y);
}

std::vector<double> spectral_dx(const std::vector<double>& f, const SpatialGrid& g) {
  return fields::PeriodicSpectral(g).derivative(f, 1);
}

}  // namespace

TEST_CASE("uniform stream only acquires a global phase") {
  const SpatialGrid g{2 * std::numbers::pi, 32};
  const double H = 1.0;
  HartreeState s{eq::plane_wave_mixture(1.0, StreamSpec{{1.0}, {1.0}, {}}, g, H), 0.0};
  const auto psi0 = s.streams.psi[0];
  const Integrator integ(g, H);
  for (int i = 0; i < 50; ++i) integ.step(s, 0.1);
  const double k = 1.0 / (0.5 * H);
  const cplx phase = std::polar(1.0, -0.5 * H * k * k * s.time / 2);
  for (std::size_t i = 0; i < g.nx; ++i) {
    CHECK(std::abs(s.streams.psi[0][i] - psi0[i] * phase) < 1e-12);
    CHECK(std::norm(s.streams.psi[0][i]) == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("equilibrium mixture is stationary") {
  const SpatialGrid g{2 * std::numbers::pi, 64};
  const auto spec = eq::fd_stream_occupations(0.1, 1.0, {-1.5, -0.5, 0.5, 1.5});
  HartreeState s{eq::plane_wave_mixture(1.0, spec, g, 1.0), 0.0};
  const Integrator integ(g, 1.0);
  double dev = 0.0;
  while (s.time < 10.0) {
    integ.step(s, 0.05);
    for (double n : s.streams.density()) dev = std::max(dev, std::abs(n - 1.0));
  }
  CHECK(dev < 1e-10);
}

TEST_CASE("norm conservation and Poisson source audit") {
  const SpatialGrid g{2 * std::numbers::pi, 64};
  const auto spec = eq::fd_stream_occupations(0.1, 1.0, {-1.5, -0.5, 0.5, 1.5});
  HartreeState s{perturbed_mixture(spec, g, 1.0, 0.2, 1.0), 0.0};
  std::vector<double> n0;
  for (const auto& p : s.streams.psi) n0.push_back(norm(p));
  const Integrator integ(g, 1.0);
  for (int i = 0; i < 200; ++i) {
    auto half = s.streams.psi;
    kernels::kinetic_phase(half, g, 0.5, 0.025, Exec::Serial);
    StreamSet mid{g, 1.0, s.streams.probabilities, half};
    integ.step(s, 0.05);
    CHECK(integ.last_source() == mid.density());
  }
  for (std::size_t a = 0; a < n0.size(); ++a) CHECK(std::abs(norm(s.streams.psi[a]) / n0[a] - 1) < 1e-12);
}

TEST_CASE("seeded modes oscillate at stable multistream roots") {
  const double H = 1.0, K = 1.0;
  const std::vector<StreamSpec> specs{StreamSpec{{1.0}, {0.0}, {}}, StreamSpec{{0.5, 0.5}, {-1.5, 1.5}, {}},
                                      StreamSpec{{0.25, 0.25, 0.25, 0.25}, {-3.0, -1.0, 1.0, 3.0}, {}}};
  for (const auto& spec : specs) {
    const auto model = dispersion::multistream_model(spec, H);
    const double w = measured_frequency(spec, H, K, 60.0);
    const auto root = dispersion::solve_root(model, K, cplx(w, 0.0));
    CHECK(std::abs(root.omega.imag()) < 1e-10);
    CHECK(w == doctest::Approx(root.omega.real()).epsilon(0.02));
  }
  const auto cold = dispersion::solve_root(dispersion::multistream_model(specs[0], H), K);
  CHECK(measured_frequency(specs[0], H, K, 60.0) == doctest::Approx(cold.omega.real()).epsilon(0.02));
}

TEST_CASE("Madelung fields of a plane wave") {
  const SpatialGrid g{2 * std::numbers::pi, 32};
  const auto s = eq::plane_wave_mixture(1.0, StreamSpec{{0.5, 0.5}, {-1.0, 2.5}, {}}, g, 1.0);
  const auto m = madelung_decompose(s);
  for (double u : m.velocity[0]) CHECK(u == doctest::Approx(-1.0).epsilon(1e-12));
  for (double u : m.velocity[1]) CHECK(u == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("per-stream continuity and momentum residuals") {
  const SpatialGrid g{2 * std::numbers::pi, 128};
  const double H = 1.0, hbar = 0.5, dt = 1e-3;
  const auto spec = eq::fd_stream_occupations(0.1, 1.0, {-1.5, -0.5, 0.5, 1.5});
  HartreeState s{perturbed_mixture(spec, g, H, 0.1, 1.0), 0.0};
  const Integrator integ(g, H);
  while (s.time < 1.0) integ.step(s, 0.01);
  const auto before = madelung_decompose(s.streams);
  integ.step(s, dt);
  const auto now = madelung_decompose(s.streams);
  const auto phi = integ.potential(s.streams);
  const auto phix = spectral_dx(phi, g);
  integ.step(s, dt);
  const auto after = madelung_decompose(s.streams);
  const fields::PeriodicSpectral ops(g);
  double cont = 0.0, mom = 0.0;
  for (std::size_t a = 0; a < spec.size(); ++a) {
    const auto& n = now.density[a];
    const auto& u = now.velocity[a];
    std::vector<double> flux(g.nx);
    for (std::size_t i = 0; i < g.nx; ++i) flux[i] = n[i] * u[i];
    const auto dflux = spectral_dx(flux, g);
    const auto du = spectral_dx(u, g);
    const auto bohm = bohm_force(n, ops, hbar);
    for (std::size_t i = 0; i < g.nx; ++i) {
      const double nt = (after.density[a][i] - before.density[a][i]) / (2 * dt);
      const double ut = (after.velocity[a][i] - before.velocity[a][i]) / (2 * dt);
      cont = std::max(cont, std::abs(nt + dflux[i]));
      mom = std::max(mom, std::abs(ut + u[i] * du[i] - phix[i] - bohm[i]));
    }
  }
  CHECK(cont < 1e-4);
  CHECK(mom < 1e-3);
}

TEST_CASE("Wigner transform of the evolved mixture matches the Wigner run") {
  const PhaseSpaceGrid pg{{2 * std::numbers::pi, 64}, 8.0, 64};
  const auto spec = eq::fd_stream_occupations(0.1, 1.0, {-1.5, -0.5, 0.5, 1.5});
  HartreeState hs{perturbed_mixture(spec, pg.space, 1.0, 0.1, 1.0), 0.0};
  wigner::WignerState ws{eq::wigner_of_mixture(hs.streams, pg), 0.0, 1.0, "mixture"};
  const Integrator hi(pg.space, 1.0);
  wigner::Integrator wi(pg, 1.0, 1.0);
  double dn = 0.0;
  while (hs.time < 10.0 - 1e-9) {
    hi.step(hs, 0.05);
    wi.step(ws, 0.05);
    const auto a = hs.streams.density(), b = fields::density(ws.f);
    for (std::size_t i = 0; i < a.size(); ++i) dn = std::max(dn, std::abs(a[i] - b[i]));
  }
  CHECK(dn < 1e-3);
  const auto fw = eq::wigner_of_mixture(hs.streams, pg);
  double df = 0.0;
  for (std::size_t k = 0; k < fw.data().size(); ++k) df = std::max(df, std::abs(fw.data()[k] - ws.f.data()[k]));
  CHECK(df < 1e-3);
}

TEST_CASE("serial and parallel Hartree steps agree bitwise") {
  const int saved = omp_get_max_threads();
  omp_set_num_threads(4);
  const SpatialGrid g{2 * std::numbers::pi, 64};
  const auto spec = eq::fd_stream_occupations(0.1, 1.0, {-1.5, -0.5, 0.5, 1.5});
  HartreeState a{perturbed_mixture(spec, g, 1.0, 0.1, 1.0), 0.0}, b = a;
  const Integrator sa(g, 1.0, 1.0, {.exec = Exec::Serial}), pa(g, 1.0, 1.0, {.exec = Exec::Parallel});
  for (int i = 0; i < 20; ++i) {
    sa.step(a, 0.05);
    pa.step(b, 0.05);
  }
  omp_set_num_threads(saved);
  CHECK(a.streams.psi == b.streams.psi);
}
