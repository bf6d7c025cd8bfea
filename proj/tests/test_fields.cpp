#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "qplasma/equilibria.hpp"
#include "qplasma/error.hpp"
#include "qplasma/fields.hpp"

using namespace qplasma;
using namespace qplasma::fields;

namespace {

std::vector<double> random_zero_mean(const SpatialGrid& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<double> f(g.nx);
  for (std::size_t m = 1; m < 12; ++m) {
    const double a = nd(rng) / m, b = nd(rng) / m;
    for (std::size_t i = 0; i < g.nx; ++i) {
      const double kx = 2 * std::numbers::pi * m * g.x(i) / g.length;
      f[i] += a * std::cos(kx) + b * std::sin(kx);
    }
  }
  return f;
}

}  // namespace

TEST_CASE("Poisson solve") {
  const SpatialGrid g{4 * std::numbers::pi, 128};
  const PeriodicSpectral ops(g);
  for (double p : ops.poisson(std::vector<double>(g.nx, 1.0), 1.0)) CHECK(p == 0.0);

  const double alpha = 0.1, K = 0.5;
  std::vector<double> n(g.nx);
  for (std::size_t i = 0; i < g.nx; ++i) n[i] = 1 + alpha * std::cos(K * g.x(i));
  const auto phi = ops.poisson(n, 1.0);
  for (std::size_t i = 0; i < g.nx; ++i) CHECK(phi[i] == doctest::Approx(-alpha / (K * K) * std::cos(K * g.x(i))).epsilon(1e-12).scale(1.0));

  auto rho = random_zero_mean(g, 42);
  for (auto& r : rho) r += 1.0;
  const auto phi2 = ops.poisson(rho, 1.0);
  const auto lap = ops.derivative(phi2, 2);
  double mean = 0.0;
  for (double p : phi2) mean += p / g.nx;
  CHECK(std::abs(mean) < 1e-14);
  for (std::size_t i = 0; i < g.nx; ++i) CHECK(std::abs(lap[i] - (rho[i] - 1.0)) < 1e-10);

  CHECK_THROWS_AS(ops.poisson(std::vector<double>(g.nx, 1.1), 1.0), DomainError);
  CHECK_THROWS_AS(ops.poisson(std::vector<double>(g.nx / 2, 1.0), 1.0), DomainError);
}

TEST_CASE("spectral derivatives, field and shift") {
  const SpatialGrid g{2 * std::numbers::pi, 64};
  const PeriodicSpectral ops(g);
  std::vector<double> c(g.nx), s(g.nx);
  for (std::size_t i = 0; i < g.nx; ++i) {
    c[i] = std::cos(3 * g.x(i));
    s[i] = std::sin(3 * g.x(i));
  }
  const auto dc = ops.derivative(c);
  for (std::size_t i = 0; i < g.nx; ++i) CHECK(dc[i] == doctest::Approx(-3 * s[i]).epsilon(1e-12).scale(1.0));
  for (double d : ops.derivative(std::vector<double>(g.nx, 2.5))) CHECK(std::abs(d) < 1e-15);
  const auto E = ops.electric_field(c);
  for (std::size_t i = 0; i < g.nx; ++i) CHECK(E[i] == doctest::Approx(3 * s[i]).epsilon(1e-12).scale(1.0));
  const auto sh = ops.shifted(c, 0.3);
  for (std::size_t i = 0; i < g.nx; ++i) CHECK(sh[i] == doctest::Approx(std::cos(3 * (g.x(i) + 0.3))).epsilon(1e-12).scale(1.0));
  CHECK_THROWS_AS(ops.derivative(c, 3), DomainError);
}

TEST_CASE("Parseval identity on a random field") {
  const SpatialGrid g{2 * std::numbers::pi, 128};
  const PeriodicSpectral ops(g);
  const auto f = random_zero_mean(g, 9);
  const auto F = ops.transform(f);
  double sx = 0.0, sk = 0.0;
  for (double v : f) sx += v * v;
  for (std::size_t k = 0; k < F.size(); ++k) sk += (k == 0 || k == g.nx / 2 ? 1.0 : 2.0) * std::norm(F[k]);
  CHECK(sx == doctest::Approx(sk / g.nx).epsilon(1e-12));
  const auto back = ops.inverse(F);
  for (std::size_t i = 0; i < g.nx; ++i) CHECK(back[i] == doctest::Approx(f[i]).epsilon(1e-12).scale(1.0));
}

TEST_CASE("velocity moments") {
  const PhaseSpaceGrid pg{{2 * std::numbers::pi, 16}, 3.0, 256};
  const auto f0 = equilibria::sample(equilibria::waterbag_1d(), pg);
  const auto m = moments(f0);
  for (std::size_t i = 0; i < pg.nx(); ++i) {
    CHECK(m.density[i] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(m.flux[i]) < 1e-12);
    CHECK(m.pressure[i] == doctest::Approx(1.0 / 3.0).epsilon(1e-3));
  }
  PhaseSpaceField shifted(pg);
  const std::size_t cells = 17;
  const double u = cells * pg.dv();
  for (std::size_t i = 0; i < pg.nx(); ++i)
    for (std::size_t j = cells; j < pg.nv; ++j) shifted(i, j) = f0(i, j - cells);
  const auto ms = moments(shifted);
  CHECK(ms.density[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ms.flux[0] == doctest::Approx(u).epsilon(1e-12));

  const auto f = equilibria::apply_cosine_perturbation(f0, 0.2, 1.0);
  const auto n = density(f);
  for (std::size_t i = 0; i < pg.nx(); ++i) CHECK(n[i] == doctest::Approx(1 + 0.2 * std::cos(pg.space.x(i))).epsilon(1e-12));

  PhaseSpaceField sum(pg);
  for (std::size_t k = 0; k < sum.data().size(); ++k) sum.data()[k] = 2.0 * f.data()[k] + 3.0 * shifted.data()[k];
  const auto ml = moments(sum);
  const auto mf = moments(f);
  for (std::size_t i = 0; i < pg.nx(); ++i) {
    CHECK(ml.density[i] == doctest::Approx(2 * mf.density[i] + 3 * ms.density[i]).epsilon(1e-12));
    CHECK(ml.flux[i] == doctest::Approx(2 * mf.flux[i] + 3 * ms.flux[i]).epsilon(1e-12));
  }
}

TEST_CASE("field energy") {
  const SpatialGrid g{2 * std::numbers::pi, 32};
  std::vector<double> E(g.nx);
  for (std::size_t i = 0; i < g.nx; ++i) E[i] = 0.3 * std::sin(g.x(i));
  CHECK(field_energy(E, g) == doctest::Approx(0.25 * 0.09).epsilon(1e-14));
}
