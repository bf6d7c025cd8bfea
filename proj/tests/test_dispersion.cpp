#include "doctest.h"

#include <cmath>
#include <random>

#include "qplasma/dispersion.hpp"
#include "qplasma/equilibria.hpp"
#include "qplasma/error.hpp"

using namespace qplasma;
using namespace qplasma::dispersion;
namespace eq = qplasma::equilibria;

namespace {

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / x.size();
    my += y[i] / y.size();
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

cplx secant_root(auto&& f, cplx w0, cplx w1) {
  cplx f0 = f(w0), f1 = f(w1);
  for (int i = 0; i < 60 && std::abs(w1 - w0) > 1e-15 * std::abs(w1); ++i) {
    const cplx w2 = w1 - f1 * (w1 - w0) / (f1 - f0);
    w0 = w1;
    f0 = f1;
    w1 = w2;
    f1 = f(w1);
  }
  return w1;
}

}  // namespace

TEST_CASE("water-bag Vlasov dielectric function") {
  const auto wb = eq::waterbag_1d();
  CHECK(eps_vlasov(0.5, 2.0, wb).real() == doctest::Approx(1.0 - 1.0 / 3.75).epsilon(1e-13));
  CHECK(std::abs(eps_vlasov(0.5, 2.0, wb).imag()) < 1e-14);
  CHECK(std::abs(eps_vlasov(0.7, 1e6, wb) - 1.0) < 1e-10);
  CHECK(std::abs(eps_vlasov(0.7, 1e6, eq::projected_fd_finite_T(0.05)) - 1.0) < 1e-10);
}

TEST_CASE("no resonant particles beyond the Fermi velocity at zero temperature") {
  const auto fd = eq::projected_fd_zero_T();
  for (double K : {0.3, 1.0, 1.7})
    for (double w : {1.1 * K, 1.6 * K, 3.0 * K}) CHECK(std::abs(eps_vlasov(K, w, fd).imag()) < 1e-14);
}

TEST_CASE("Wigner dielectric function reduces to Vlasov at H = 0") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uk(0.1, 2.0), ure(0.5, 3.0), uim(-0.05, 0.3);
  for (const auto& f0 : {eq::waterbag_1d(), eq::projected_fd_zero_T(), eq::projected_fd_finite_T(0.1)}) {
    for (int i = 0; i < 20; ++i) {
      const double K = uk(rng);
      const cplx w(ure(rng) + K, uim(rng));
      CHECK(std::abs(eps_wigner(K, w, f0, 0.0) - eps_vlasov(K, w, f0)) < 1e-10);
    }
  }
}

TEST_CASE("shifted-pole and difference forms of the Wigner dielectric agree") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uk(0.1, 1.5), ure(0.3, 2.5), uim(0.05, 0.5), uh(0.2, 1.5);
  for (const auto& f0 : {eq::waterbag_1d(), eq::projected_fd_zero_T(), eq::projected_fd_finite_T(0.05)}) {
    for (int i = 0; i < 15; ++i) {
      const double K = uk(rng), H = uh(rng);
      const cplx w(ure(rng), uim(rng));
      const cplx a = eps_wigner(K, w, f0, H), b = eps_wigner_difference(K, w, f0, H);
      CHECK(std::abs(a - b) < 1e-10 * std::max(1.0, std::abs(a)));
    }
  }
}

TEST_CASE("reality symmetry eps(K, w) = conj(eps(-K, -conj(w)))") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uk(0.1, 1.5), ure(0.3, 2.5), uim(0.01, 0.5);
  const auto fd = eq::projected_fd_finite_T(0.1);
  const auto models = {vlasov_model(fd), wigner_model(fd, 0.7), wigner_model(eq::waterbag_1d(), 1.0),
                       multistream_model(StreamSpec{{0.3, 0.7}, {-0.5, 1.0}, {}}, 0.5), fluid_model_1d(1.0)};
  for (const auto& m : models) {
    for (int i = 0; i < 10; ++i) {
      const double K = uk(rng);
      const cplx w(ure(rng), uim(rng));
      const cplx a = eps(m, K, w), b = eps(m, -K, -std::conj(w));
      CHECK(std::abs(a - std::conj(b)) < 1e-10 * std::max(1.0, std::abs(a)));
    }
  }
}

TEST_CASE("Wigner dielectric approaches Vlasov as H^2") {
  const auto fd = eq::projected_fd_finite_T(0.1);
  const std::vector<std::pair<double, cplx>> points{{0.5, {1.3, 0.1}}, {1.0, {1.6, 0.2}}, {0.8, {2.0, 0.05}}};
  for (const auto& [K, w] : points) {
    std::vector<double> lh, ld;
    for (double H : {0.2, 0.1, 0.05, 0.025}) {
      lh.push_back(std::log(H));
      ld.push_back(std::log(std::abs(eps_wigner(K, w, fd, H) - eps_vlasov(K, w, fd))));
    }
    CHECK(slope(lh, ld) == doctest::Approx(2.0).epsilon(0.05));
  }
}

TEST_CASE("multistream roots") {
  const auto cold = solve_root(multistream_model(StreamSpec{{1.0}, {0.0}, {}}, 0.0), 0.7);
  CHECK(std::abs(cold.omega - 1.0) < 1e-12);
  // Two cold streams +-u0: (w^2 - a^2)^2 = w^2 + a^2 with a = K u0.
  const double a = 0.5;
  const double w2 = 0.5 * ((2 * a * a + 1) - std::sqrt(std::pow(2 * a * a + 1, 2) - 4 * (std::pow(a, 4) - a * a)));
  REQUIRE(w2 < 0.0);
  const auto two = solve_root(multistream_model(StreamSpec{{0.5, 0.5}, {-1.0, 1.0}, {}}, 0.0), 0.5, cplx(0.0, 0.3));
  CHECK(two.omega.imag() == doctest::Approx(std::sqrt(-w2)).epsilon(1e-12));
  CHECK(std::abs(two.omega.real()) < 1e-12);
}

TEST_CASE("delta-function Wigner form equals the multistream dielectric") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uk(0.1, 2.0), ure(-3.0, 3.0), uim(-0.5, 0.5), uh(0.0, 1.5);
  const StreamSpec spec{{0.1, 0.4, 0.4, 0.1}, {-1.5, -0.5, 0.5, 1.5}, {}};
  for (int i = 0; i < 100; ++i) {
    const double K = uk(rng), H = uh(rng);
    const cplx w(ure(rng), uim(rng));
    const cplx a = eps_wigner_delta(K, w, spec, H), b = eps_multistream(K, w, spec, H);
    CHECK(std::abs(a - b) < 1e-12 * std::max(1.0, std::abs(b)));
  }
}

TEST_CASE("multistream and delta-Wigner roots coincide") {
  const std::vector<StreamSpec> specs{StreamSpec{{1.0}, {0.0}, {}}, StreamSpec{{0.5, 0.5}, {-1.0, 1.0}, {}},
                                      StreamSpec{{0.1, 0.4, 0.4, 0.1}, {-1.5, -0.5, 0.5, 1.5}, {}}};
  for (const auto& spec : specs) {
    for (double K : {0.3, 0.8}) {
      const double H = 1.0;
      const auto r = solve_root(multistream_model(spec, H), K);
      const cplx w = secant_root([&](cplx z) { return eps_wigner_delta(K, z, spec, H); }, r.omega * 1.01,
                                 r.omega * 0.99 + cplx(0.0, 1e-3));
      CHECK(std::abs(w - r.omega) < 1e-8);
    }
  }
}

TEST_CASE("fluid dispersion") {
  const auto m = fluid_model_1d(1.0);
  CHECK(solve_root(m, 0.5).omega.real() == doctest::Approx(std::sqrt(1.25390625)).epsilon(1e-12));
  CHECK(std::sqrt(fluid_omega_squared(0.5, 3.0, 1.0 / std::sqrt(3.0), 1.0)) == doctest::Approx(1.11978).epsilon(1e-5));
  CHECK(fluid_omega_squared(1e-8, 3.0, 0.5, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  const auto fit = smallk_coefficients(fluid_model(3.0, std::sqrt(0.2), 0.0));
  CHECK(fit.c2 == doctest::Approx(0.6).epsilon(1e-6));
  CHECK(std::abs(eps_fluid(0.5, std::sqrt(1.25390625), 3.0, 1.0 / std::sqrt(3.0), 1.0)) < 1e-14);
}

TEST_CASE("water-bag Vlasov roots are exact") {
  const auto m = vlasov_model(eq::waterbag_1d());
  const auto r = solve_root(m, 0.5);
  CHECK(r.omega.real() == doctest::Approx(std::sqrt(1.25)).epsilon(1e-13));
  CHECK(r.omega.imag() == 0.0);
  for (const auto& row : scan(m, 0.1, 2.0, 39)) CHECK(std::abs(std::norm(row.omega) - (1 + row.K * row.K)) < 1e-8);
}

TEST_CASE("water-bag Wigner roots match the closed form") {
  for (double K : {0.05, 0.1, 0.2, 0.5, 1.0}) {
    const auto r = solve_root(wigner_model(eq::waterbag_1d(), 1.0), K);
    CHECK(std::norm(r.omega) == doctest::Approx(waterbag_wigner_omega_squared(K, 1.0)).epsilon(1e-12));
  }
}

TEST_CASE("small-K coefficients") {
  const auto wb = smallk_coefficients(vlasov_model(eq::waterbag_1d()));
  CHECK(std::abs(wb.c0 - 1.0) < 1e-4);
  CHECK(std::abs(wb.c2 - 1.0) < 1e-4);
  CHECK(std::abs(wb.c4) < 1e-4);
  const auto fd = smallk_coefficients(vlasov_model(eq::projected_fd_zero_T()));
  CHECK(fd.c2 == doctest::Approx(0.6).epsilon(0.02));
  const auto wq = smallk_coefficients(wigner_model(eq::waterbag_1d(), 1.0));
  CHECK(wq.c2 == doctest::Approx(1.0).epsilon(0.01));
  CHECK(wq.c4 == doctest::Approx(1.0 / 16).epsilon(0.05));
}

TEST_CASE("quantum correction to the zero-temperature Fermi-Dirac dispersion is H^2 K^4 / 16") {
  const auto f0 = eq::projected_fd_zero_T();
  for (double K : {0.05, 0.07, 0.1, 0.14, 0.2}) {
    const double wp = std::norm(solve_root(wigner_model(f0, 1.0), K).omega);
    const double wv = std::norm(solve_root(vlasov_model(f0), K).omega);
    const double rem = wp - wv - std::pow(K, 4) / 16.0;
    CHECK(std::abs(rem) < 2.0 * std::pow(K, 6));
  }
}

TEST_CASE("water-bag Wigner and fluid differ at order K^6") {
  std::vector<double> lk, ld;
  for (double K : {0.05, 0.07, 0.1, 0.14, 0.2}) {
    const double wp = std::norm(solve_root(wigner_model(eq::waterbag_1d(), 1.0), K).omega);
    const double wf = std::norm(solve_root(fluid_model_1d(1.0), K).omega);
    lk.push_back(std::log(K));
    ld.push_back(std::log(std::abs(wp - wf)));
  }
  CHECK(slope(lk, ld) == doctest::Approx(6.0).epsilon(0.3 / 6.0));
}

TEST_CASE("finite-temperature root is weakly damped") {
  const auto r = solve_root(vlasov_model(eq::projected_fd_finite_T(0.01)), 1.0);
  CHECK(r.omega.real() == doctest::Approx(1.289669056419952).epsilon(1e-9));
  CHECK(r.omega.imag() < 0.0);
  CHECK(std::abs(r.omega.imag()) < 1e-6 * r.omega.real());
  const auto warm = solve_root(vlasov_model(eq::projected_fd_finite_T(0.2)), 1.0);
  CHECK(warm.omega.real() == doctest::Approx(1.36762).epsilon(1e-4));
  CHECK(warm.omega.imag() == doctest::Approx(-0.02378).epsilon(1e-3));
}

TEST_CASE("ordering guard and model names") {
  CHECK(ordering_holds(0.1, 1.0, 1.0));
  CHECK_FALSE(ordering_holds(1.5, 1.8, 1.0));
  CHECK_FALSE(solve_root(vlasov_model(eq::projected_fd_zero_T()), 1.0).ordering);
  CHECK(model_kind_from_string(to_string(ModelKind::WignerKinetic)) == ModelKind::WignerKinetic);
  CHECK_THROWS_AS(model_kind_from_string("mhd"), DomainError);
  CHECK_THROWS_AS(solve_root(vlasov_model(eq::waterbag_1d()), 0.0), DomainError);
}
