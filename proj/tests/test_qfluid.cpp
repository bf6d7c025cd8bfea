#include "doctest.h"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qplasma/diagio.hpp"
#include "qplasma/dispersion.hpp"
#include "qplasma/error.hpp"
#include "qplasma/hartree.hpp"
#include "qplasma/qfluid.hpp"

using namespace qplasma;
using namespace qplasma::qfluid;

namespace {

double cos_mode(const FluidState& s, const SpatialGrid& g, double K) {
  double a = 0.0;
  for (std::size_t i = 0; i < g.nx; ++i) a += std::norm(s.psi[i]) * std::cos(K * g.x(i)) / static_cast<double>(g.nx);
  return a;
}

struct Trace {
  std::vector<double> t, y;
};

Trace run_mode(double K, double H, EquationOfState eos, double alpha, double t_end, double dt = 0.01) {
  const SpatialGrid g{2 * std::numbers::pi / K, H < 0.1 ? 128u : 32u};
  const Integrator integ(g, H, eos);
  auto s = seeded_state(g, alpha, K);
  Trace tr;
  while (s.time < t_end) {
    tr.t.push_back(s.time);
    tr.y.push_back(cos_mode(s, g, K));
    integ.step(s, dt);
  }
  return tr;
}

double frequency(double K, double H, EquationOfState eos, double t_end = 40.0) {
  const auto tr = run_mode(K, H, eos, 1e-3, t_end, std::min(0.01, H));
  return diagio::estimate_frequency(tr.t, tr.y);
}

EquationOfState eos_of(double gamma, double p0) {
  EquationOfState e;
  e.gamma = gamma;
  e.p0 = p0;
  return e;
}

}  // namespace

TEST_CASE("equation of state") {
  const auto d = degenerate_1d();
  CHECK(d.W(2.0) == doctest::Approx(2.0));
  CHECK(d.internal(2.0) == doctest::Approx(4.0 / 3.0));
  CHECK(d.sound_speed_squared() == doctest::Approx(1.0));
  CHECK(eos_of(5.0 / 3.0, 0.2).sound_speed_squared() == doctest::Approx(1.0 / 3.0));
  CHECK(degenerate_3d_gamma3().sound_speed_squared() == doctest::Approx(0.6));
  CHECK_THROWS_AS(eos_of(1.0, 0.2).validate(), DomainError);
  CHECK_THROWS_AS(eos_of(3.0, -1.0).validate(), DomainError);
}

TEST_CASE("uniform state is stationary") {
  const SpatialGrid g{2 * std::numbers::pi, 32};
  const Integrator integ(g, 1.0);
  auto s = seeded_state(g, 0.0, 1.0);
  for (int i = 0; i < 500; ++i) integ.step(s, 0.02);
  for (const auto& z : s.psi) CHECK(std::abs(z - cplx(1.0)) < 1e-12);
}

TEST_CASE("frequency of the pinned example") {
  const double w = frequency(0.5, 1.0, degenerate_1d());
  CHECK(w == doctest::Approx(1.11978).epsilon(0.01));
  CHECK(std::sqrt(dispersion::fluid_omega_squared(0.5, 3.0, 1.0 / std::sqrt(3.0), 1.0)) ==
        doctest::Approx(1.11978).epsilon(1e-5));
}

TEST_CASE("simulated frequencies follow the fluid dispersion relation") {
  for (double H : {1e-3, 0.5, 1.0})
    for (double K : {0.25, 1.0, 2.0}) {
      for (const auto& eos : {degenerate_1d(), eos_of(5.0 / 3.0, 0.2)}) {
        const double expect = std::sqrt(dispersion::fluid_omega_squared(K, eos.gamma, std::sqrt(eos.p0), H));
        CHECK(frequency(K, H, eos) == doctest::Approx(expect).epsilon(0.01));
      }
    }
}

TEST_CASE("fluid modes are undamped") {
  const auto tr = run_mode(1.0, 1.0, degenerate_1d(), 1e-3, 50.0);
  const auto peaks = diagio::find_peaks(tr.t, tr.y);
  REQUIRE(peaks.size() > 4);
  for (const auto& p : peaks) CHECK(std::abs(p.value / peaks.front().value - 1.0) < 1e-3);
}

TEST_CASE("degenerate closure against the water-bag Wigner relation") {
  const double H = 1.0;
  for (double K : {0.1, 0.2, 0.3}) {
    const double w = frequency(K, H, degenerate_1d(), 60.0);
    CHECK(w == doctest::Approx(std::sqrt(dispersion::waterbag_wigner_omega_squared(K, H))).epsilon(0.01));
  }
  const double fluid = std::sqrt(dispersion::fluid_omega_squared(2.0, 3.0, 1.0 / std::sqrt(3.0), H));
  const double wb = std::sqrt(dispersion::waterbag_wigner_omega_squared(2.0, H));
  CHECK(std::abs(fluid / wb - 1.0) > 0.01);
  CHECK(frequency(2.0, H, degenerate_1d()) == doctest::Approx(fluid).epsilon(0.01));
}

TEST_CASE("Madelung continuity and momentum residuals") {
  const SpatialGrid g{2 * std::numbers::pi, 128};
  const double H = 1.0, dt = 1e-3;
  const Integrator integ(g, H);
  auto s = seeded_state(g, 0.1, 1.0);
  while (s.time < 1.0) integ.step(s, 0.01);
  std::vector<double> n0, u0, n1, u1, n2, u2;
  std::vector<bool> mask;
  madelung_fields(s, g, integ.hbar(), n0, u0, mask);
  integ.step(s, dt);
  madelung_fields(s, g, integ.hbar(), n1, u1, mask);
  const auto phi = integ.potential(s);
  std::vector<double> V(g.nx);
  for (std::size_t i = 0; i < g.nx; ++i) V[i] = -phi[i] + integ.eos().W(n1[i]);
  integ.step(s, dt);
  madelung_fields(s, g, integ.hbar(), n2, u2, mask);
  const fields::PeriodicSpectral ops(g);
  std::vector<double> flux(g.nx);
  for (std::size_t i = 0; i < g.nx; ++i) flux[i] = n1[i] * u1[i];
  const auto dflux = ops.derivative(flux, 1);
  const auto du = ops.derivative(u1, 1);
  const auto dV = ops.derivative(V, 1);
  const auto bohm = hartree::bohm_force(n1, ops, integ.hbar());
  double cont = 0.0, mom = 0.0;
  for (std::size_t i = 0; i < g.nx; ++i) {
    cont = std::max(cont, std::abs((n2[i] - n0[i]) / (2 * dt) + dflux[i]));
    mom = std::max(mom, std::abs((u2[i] - u0[i]) / (2 * dt) + u1[i] * du[i] + dV[i] - bohm[i]));
  }
  CHECK(cont < 1e-4);
  CHECK(mom < 1e-3);
}

TEST_CASE("mass and energy conservation") {
  const SpatialGrid g{4 * std::numbers::pi, 128};
  const Integrator integ(g, 1.0);
  auto s = seeded_state(g, 0.01, 0.5);
  const auto d0 = integ.diagnose(s);
  double dm = 0.0, de = 0.0;
  while (s.time < 50.0) {
    integ.step(s, 0.01);
    const auto d = integ.diagnose(s);
    dm = std::max(dm, std::abs(d.mass / d0.mass - 1.0));
    de = std::max(de, std::abs(d.total_energy / d0.total_energy - 1.0));
  }
  CHECK(dm < 1e-12);
  CHECK(de < 1e-6);
}

TEST_CASE("serial and parallel fluid steps agree bitwise") {
  const int saved = omp_get_max_threads();
  omp_set_num_threads(4);
  const SpatialGrid g{2 * std::numbers::pi, 64};
  Options so, po;
  so.exec = Exec::Serial;
  po.exec = Exec::Parallel;
  const Integrator a(g, 1.0, degenerate_1d(), so), b(g, 1.0, degenerate_1d(), po);
  auto sa = seeded_state(g, 0.2, 1.0), sb = sa;
  for (int i = 0; i < 50; ++i) {
    a.step(sa, 0.02);
    b.step(sb, 0.02);
  }
  omp_set_num_threads(saved);
  CHECK(sa.psi == sb.psi);
}

TEST_CASE("fluid errors") {
  const SpatialGrid g{2 * std::numbers::pi, 32};
  CHECK_THROWS_AS(seeded_state(g, 1.5, 1.0), DomainError);
  CHECK_THROWS_AS(seeded_state(g, 0.1, 0.7), DomainError);
  const Integrator integ(g, 1.0);
  auto s = seeded_state(g, 0.1, 1.0);
  CHECK_THROWS_AS(integ.step(s, 0.0), DomainError);
}
