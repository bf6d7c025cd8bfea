#include "qplasma/equilibria.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>

#include "qplasma/error.hpp"
#include "qplasma/fft.hpp"

namespace qplasma {

void StreamSpec::validate() const {
  if (velocities.empty()) throw DomainError("stream list is empty");
  if (probabilities.size() != velocities.size()) throw DomainError("probabilities/velocities size mismatch");
  double sum = 0.0;
  for (double p : probabilities) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("stream probability outside [0, 1]");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw DomainError("stream probabilities do not sum to 1");
  std::set<double> seen;
  for (double u : velocities) {
    if (!std::isfinite(u)) throw DomainError("stream velocity not finite");
    if (!seen.insert(u).second) throw DomainError("repeated stream velocity");
  }
}

std::vector<double> StreamSet::density() const {
  std::vector<double> n(grid.nx, 0.0);
  for (std::size_t a = 0; a < psi.size(); ++a) {
    for (std::size_t i = 0; i < grid.nx; ++i) n[i] += probabilities[a] * std::norm(psi[a][i]);
  }
  return n;
}

namespace equilibria {

namespace {

using std::complex;
using boost::math::quadrature::gauss_kronrod;

constexpr double kPi = std::numbers::pi;

// ln(1 + e^w) without overflow.
double softplus(double w) { return w > 0.0 ? w + std::log1p(std::exp(-w)) : std::log1p(std::exp(w)); }
double logistic(double w) { return w >= 0.0 ? 1.0 / (1.0 + std::exp(-w)) : std::exp(w) / (1.0 + std::exp(w)); }

complex<double> softplus(complex<double> w) {
  if (w.real() > 0.0) return w + softplus(-w);
  const complex<double> e = std::exp(w);
  if (std::abs(e) < 1e-8) return e - 0.5 * e * e + e * e * e / 3.0;
  return std::log(1.0 + e);
}
complex<double> logistic(complex<double> w) {
  if (w.real() >= 0.0) return 1.0 / (1.0 + std::exp(-w));
  const complex<double> e = std::exp(w);
  return e / (1.0 + e);
}

template <class F>
double integrate(F f, const std::vector<double>& pts, double tol = 1e-13) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (pts[i + 1] > pts[i]) s += gauss_kronrod<double, 61>::integrate(f, pts[i], pts[i + 1], 12, tol);
  }
  return s;
}

std::vector<double> merged_points(double a, double b, const std::vector<double>& inner) {
  std::vector<double> pts{a, b};
  for (double p : inner)
    if (p > a && p < b) pts.push_back(p);
  std::sort(pts.begin(), pts.end());
  return pts;
}

}  // namespace

double Equilibrium::operator()(double v) const {
  const double s = v / v_F_;
  switch (kind_) {
    case Kind::WaterBag1D:
      return std::abs(s) <= 1.0 ? n0_ / (2.0 * v_F_) : 0.0;
    case Kind::ProjectedFD_T0:
      return std::abs(s) <= 1.0 ? 0.75 * n0_ / v_F_ * (1.0 - s * s) : 0.0;
    case Kind::ProjectedFD_finiteT:
      return 0.75 * n0_ / v_F_ * t_ * softplus((mu_ - s * s) / t_);
  }
  return 0.0;
}

double Equilibrium::derivative(double v) const {
  const double s = v / v_F_;
  switch (kind_) {
    case Kind::WaterBag1D:
      return 0.0;
    case Kind::ProjectedFD_T0:
      return std::abs(s) <= 1.0 ? -1.5 * n0_ / (v_F_ * v_F_) * s : 0.0;
    case Kind::ProjectedFD_finiteT:
      return -1.5 * n0_ / (v_F_ * v_F_) * s * logistic((mu_ - s * s) / t_);
  }
  return 0.0;
}

complex<double> Equilibrium::operator()(complex<double> v) const {
  const complex<double> s = v / v_F_;
  switch (kind_) {
    case Kind::WaterBag1D:
      throw DomainError("water-bag profile has no analytic continuation");
    case Kind::ProjectedFD_T0:
      return 0.75 * n0_ / v_F_ * (1.0 - s * s);
    case Kind::ProjectedFD_finiteT:
      return 0.75 * n0_ / v_F_ * t_ * softplus((mu_ - s * s) / t_);
  }
  return 0.0;
}

complex<double> Equilibrium::derivative(complex<double> v) const {
  const complex<double> s = v / v_F_;
  switch (kind_) {
    case Kind::WaterBag1D:
      throw DomainError("water-bag profile has no analytic continuation");
    case Kind::ProjectedFD_T0:
      return -1.5 * n0_ / (v_F_ * v_F_) * s;
    case Kind::ProjectedFD_finiteT:
      return -1.5 * n0_ / (v_F_ * v_F_) * s * logistic((mu_ - s * s) / t_);
  }
  return 0.0;
}

bool Equilibrium::continuation_valid(complex<double> v) const {
  if (kind_ == Kind::WaterBag1D) return false;
  if (kind_ == Kind::ProjectedFD_T0) return true;
  const complex<double> s = v / v_F_;
  const complex<double> w = (mu_ - s * s) / t_;
  return std::abs(w.imag()) < kPi;
}

double Equilibrium::support() const {
  if (kind_ != Kind::ProjectedFD_finiteT) return v_F_;
  return v_F_ * std::sqrt(std::max(mu_, 0.0) + 50.0 * t_);
}

std::vector<double> Equilibrium::breakpoints() const {
  if (kind_ != Kind::ProjectedFD_finiteT) return {-v_F_, v_F_};
  const double r = std::sqrt(std::max(mu_, 0.0)) * v_F_;
  return {-r, r};
}

double Equilibrium::moment(int order) const {
  const double s = support();
  auto f = [&](double v) { return std::pow(v, order) * (*this)(v); };
  return integrate(f, merged_points(-s, s, breakpoints()), 1e-13);
}

std::string Equilibrium::name() const {
  switch (kind_) {
    case Kind::WaterBag1D: return "waterbag1d";
    case Kind::ProjectedFD_T0: return "fd3d_projected_T0";
    case Kind::ProjectedFD_finiteT: return "fd3d_projected";
  }
  return "?";
}

Equilibrium waterbag_1d(double n0, double v_F) {
  if (!(n0 > 0.0) || !(v_F > 0.0)) throw DomainError("n0 and v_F must be positive");
  Equilibrium e;
  e.kind_ = Kind::WaterBag1D;
  e.n0_ = n0;
  e.v_F_ = v_F;
  return e;
}

double fermi_velocity_1d(double n0, double hbar, double mass) {
  if (!(n0 > 0.0) || !(hbar > 0.0) || !(mass > 0.0)) throw DomainError("n0, hbar, mass must be positive");
  return kPi * hbar * n0 / (2.0 * mass);
}

Equilibrium projected_fd_zero_T(double n0, double v_F) {
  if (!(n0 > 0.0) || !(v_F > 0.0)) throw DomainError("n0 and v_F must be positive");
  Equilibrium e;
  e.kind_ = Kind::ProjectedFD_T0;
  e.n0_ = n0;
  e.v_F_ = v_F;
  return e;
}

Equilibrium projected_fd_finite_T(double t_over_tf, double n0, double v_F) {
  if (!(n0 > 0.0) || !(v_F > 0.0)) throw DomainError("n0 and v_F must be positive");
  if (!(t_over_tf > 0.0 && t_over_tf <= 1.0)) throw DomainError("T/T_F must lie in (0, 1]");
  Equilibrium e;
  e.kind_ = Kind::ProjectedFD_finiteT;
  e.n0_ = 1.0;
  e.v_F_ = 1.0;
  e.t_ = t_over_tf;
  // Normalized density constraint; monotone increasing in mu.
  auto excess = [&](double mu) {
    e.mu_ = mu;
    return e.moment(0) - 1.0;
  };
  const double lo = -10.0 * t_over_tf, hi = 2.0;
  const double flo = excess(lo), fhi = excess(hi);
  if (!(flo < 0.0 && fhi > 0.0)) {
    std::ostringstream msg;
    msg << "chemical potential not bracketed in [" << lo << ", " << hi << "]: residuals " << flo << ", " << fhi;
    throw NumericError(msg.str());
  }
  std::uintmax_t iters = 200;
  auto [a, b] = boost::math::tools::toms748_solve(excess, lo, hi, flo, fhi,
                                                  boost::math::tools::eps_tolerance<double>(52), iters);
  if (iters >= 200) {
    std::ostringstream msg;
    msg << "chemical potential solve did not converge; final bracket [" << a << ", " << b << "]";
    throw NumericError(msg.str());
  }
  const double fa = excess(a);
  const double fb = excess(b);
  e.mu_ = std::abs(fa) < std::abs(fb) ? a : b;
  e.n0_ = n0;
  e.v_F_ = v_F;
  return e;
}

Equilibrium by_name(std::string_view name, double t_over_tf) {
  if (name == "waterbag1d") return waterbag_1d();
  if (name == "fd3d_projected_T0") return projected_fd_zero_T();
  if (name == "fd3d_projected") return projected_fd_finite_T(t_over_tf);
  throw DomainError("unknown equilibrium '" + std::string(name) + "'");
}

StreamSpec fd_stream_occupations(double t_over_tf, double mu, const std::vector<double>& velocities) {
  if (velocities.empty()) throw DomainError("stream velocity list is empty");
  if (t_over_tf < 0.0) throw DomainError("temperature must be non-negative");
  StreamSpec s;
  s.velocities = velocities;
  for (double u : velocities) {
    const double x = u * u - mu;
    double p;
    if (t_over_tf == 0.0) {
      p = x < 0.0 ? 1.0 : (x == 0.0 ? 0.5 : 0.0);
    } else {
      p = logistic(-x / t_over_tf);
    }
    s.raw_probabilities.push_back(p);
  }
  const double sum = std::accumulate(s.raw_probabilities.begin(), s.raw_probabilities.end(), 0.0);
  if (!(sum > 0.0)) throw DomainError("all stream occupations vanish");
  for (double p : s.raw_probabilities) s.probabilities.push_back(p / sum);
  s.validate();
  return s;
}

double snap_velocity(double u, const SpatialGrid& grid, double H) {
  const double quantum = 2.0 * kPi * (0.5 * H) / grid.length;
  return std::round(u / quantum) * quantum;
}

StreamSet plane_wave_mixture(double n0, const StreamSpec& spec, const SpatialGrid& grid, double H) {
  spec.validate();
  grid.validate();
  if (!(H > 0.0)) throw DomainError("plane-wave mixture requires H > 0");
  if (!(n0 > 0.0)) throw DomainError("n0 must be positive");
  const double hbar = 0.5 * H;
  StreamSet s;
  s.grid = grid;
  s.H = H;
  s.probabilities = spec.probabilities;
  for (double u : spec.velocities) {
    const double winding = u * grid.length / (2.0 * kPi * hbar);
    if (std::abs(winding - std::round(winding)) > 1e-9 * std::max(1.0, std::abs(winding))) {
      throw DomainError("stream velocity " + std::to_string(u) + " is not commensurate with the box");
    }
    const double kk = 2.0 * kPi * std::round(winding) / grid.length;
    std::vector<cplx> psi(grid.nx);
    for (std::size_t i = 0; i < grid.nx; ++i) psi[i] = std::sqrt(n0) * std::polar(1.0, kk * grid.x(i));
    s.psi.push_back(std::move(psi));
  }
  return s;
}

PhaseSpaceField wigner_of_mixture(const StreamSet& streams, const PhaseSpaceGrid& grid) {
  grid.validate();
  if (!(streams.grid == grid.space)) throw DomainError("stream grid does not match phase-space grid");
  if (streams.psi.size() != streams.probabilities.size()) throw DomainError("stream occupations mismatch");
  const std::size_t nx = grid.nx(), nv = grid.nv, nm = nv / 2 + 1;
  const double hbar = streams.hbar();
  const double dlam = grid.dlambda(hbar);
  const ComplexFft fft(nx);

  std::vector<std::vector<cplx>> spectra;
  for (const auto& psi : streams.psi) {
    std::vector<cplx> s(nx);
    fft.forward(psi, s);
    spectra.push_back(std::move(s));
  }

  // g[m][ix] = sum_a p_a conj(psi_a(x + lambda_m/2)) psi_a(x - lambda_m/2)
  std::vector<cplx> g(nm * nx, cplx(0.0));
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t mi = 0; mi < static_cast<std::ptrdiff_t>(nm); ++mi) {
    const double half = 0.5 * static_cast<double>(mi) * dlam;
    std::vector<cplx> plus(nx), minus(nx);
    for (std::size_t a = 0; a < spectra.size(); ++a) {
      for (std::size_t i = 0; i < nx; ++i) {
        const double k = grid.space.k(i);
        const bool nyq = (i == nx / 2);
        const cplx ep = nyq ? cplx(std::cos(k * half)) : std::polar(1.0, k * half);
        const cplx em = nyq ? ep : std::conj(ep);
        plus[i] = spectra[a][i] * ep;
        minus[i] = spectra[a][i] * em;
      }
      fft.backward(plus, plus);
      fft.backward(minus, minus);
      const double w = streams.probabilities[a] / (static_cast<double>(nx) * static_cast<double>(nx));
      for (std::size_t ix = 0; ix < nx; ++ix) {
        g[static_cast<std::size_t>(mi) * nx + ix] += w * std::conj(plus[ix]) * minus[ix];
      }
    }
  }

  PhaseSpaceField f(grid);
  const RealFft rfft(nv);
  const double norm = 1.0 / (static_cast<double>(nv) * grid.dv());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ix = 0; ix < static_cast<std::ptrdiff_t>(nx); ++ix) {
    std::vector<cplx> half(nm);
    for (std::size_t m = 0; m < nm; ++m) {
      cplx val = g[m * nx + static_cast<std::size_t>(ix)];
      if (m == nv / 2) val = val.real();
      half[m] = (m % 2 == 0) ? val : -val;
    }
    auto row = f.row(static_cast<std::size_t>(ix));
    rfft.backward(half, row);
    for (double& x : row) x *= norm;
  }
  return f;
}

PhaseSpaceField sample(const Equilibrium& eq, const PhaseSpaceGrid& grid) {
  grid.validate();
  PhaseSpaceField f(grid);
  const double dv = grid.dv();
  const auto bps = eq.breakpoints();
  const double s = eq.support();
  std::vector<double> cells(grid.nv);
  for (std::size_t j = 0; j < grid.nv; ++j) {
    const double a = grid.v(j) - 0.5 * dv, b = grid.v(j) + 0.5 * dv;
    if (b <= -s || a >= s) {
      cells[j] = 0.0;
      continue;
    }
    auto fn = [&](double v) { return eq(v); };
    cells[j] = integrate(fn, merged_points(std::max(a, -s), std::min(b, s), bps), 1e-13) / dv;
  }
  for (std::size_t ix = 0; ix < grid.nx(); ++ix) std::copy(cells.begin(), cells.end(), f.row(ix).begin());
  return f;
}

bool commensurate(double k, const SpatialGrid& grid) {
  const double n = k * grid.length / (2.0 * kPi);
  return std::abs(n - std::round(n)) < 1e-9 * std::max(1.0, std::abs(n));
}

PhaseSpaceField apply_cosine_perturbation(const PhaseSpaceField& f0, double alpha, double k) {
  if (!(alpha >= 0.0)) throw DomainError("perturbation amplitude must be non-negative");
  if (!commensurate(k, f0.grid().space)) throw DomainError("perturbation wavenumber is not commensurate with the box");
  PhaseSpaceField f = f0;
  for (std::size_t ix = 0; ix < f.nx(); ++ix) {
    const double factor = 1.0 + alpha * std::cos(k * f.grid().space.x(ix));
    for (double& v : f.row(ix)) v *= factor;
  }
  return f;
}

}  // namespace equilibria
}  // namespace qplasma
