#include "qplasma/kernels.hpp"

#include <cmath>
#include <numbers>

#include "qplasma/error.hpp"

namespace qplasma::kernels {

namespace {

constexpr double kPi = std::numbers::pi;

inline std::size_t wrap(std::ptrdiff_t i, std::size_t n) {
  const auto m = static_cast<std::ptrdiff_t>(n);
  i %= m;
  return static_cast<std::size_t>(i < 0 ? i + m : i);
}

void check_accel(const PhaseSpaceField& f, std::span<const double> accel) {
  if (accel.size() != f.nx()) throw DomainError("acceleration length does not match grid");
}

}  // namespace

SplineLine::SplineLine(std::size_t n, bool periodic) : n_(n), periodic_(periodic), cp_(n), dp_(n) {
  if (n < 4) throw DomainError("spline line needs at least 4 nodes");
  // Tridiagonal (1, 4, 1) / 6. For the periodic case the corners are
  // removed by a Sherman-Morrison update with gamma = -b0.
  const double a = 1.0 / 6.0, b = 4.0 / 6.0;
  const double gamma = -b;
  std::vector<double> diag(n, b);
  if (periodic_) {
    diag[0] = b - gamma;
    diag[n - 1] = b - a * a / gamma;
  }
  dp_[0] = diag[0];
  cp_[0] = a / dp_[0];
  for (std::size_t i = 1; i < n; ++i) {
    dp_[i] = diag[i] - a * cp_[i - 1];
    cp_[i] = a / dp_[i];
  }
  if (periodic_) {
    std::vector<double> u(n, 0.0);
    u[0] = gamma;
    u[n - 1] = a;
    z_.assign(n, 0.0);
    z_[0] = u[0] / dp_[0];
    for (std::size_t i = 1; i < n; ++i) z_[i] = (u[i] - a * z_[i - 1]) / dp_[i];
    for (std::size_t i = n - 1; i-- > 0;) z_[i] -= cp_[i] * z_[i + 1];
    zfac_ = 1.0 / (1.0 + z_[0] + a * z_[n - 1] / gamma);
  }
}

void SplineLine::coefficients(std::span<const double> f, std::span<double> c) const {
  const double a = 1.0 / 6.0;
  c[0] = f[0] / dp_[0];
  for (std::size_t i = 1; i < n_; ++i) c[i] = (f[i] - a * c[i - 1]) / dp_[i];
  for (std::size_t i = n_ - 1; i-- > 0;) c[i] -= cp_[i] * c[i + 1];
  if (periodic_) {
    const double gamma = -4.0 / 6.0;
    const double s = (c[0] + a * c[n_ - 1] / gamma) * zfac_;
    for (std::size_t i = 0; i < n_; ++i) c[i] -= s * z_[i];
  }
}

void SplineLine::shift(std::span<const double> in, std::span<double> out, double shift,
                       std::span<double> work) const {
  coefficients(in, work);
  const double m = std::floor(shift);
  const double t = 1.0 - (shift - m);
  const double t2 = t * t, t3 = t2 * t, u = 1.0 - t;
  const double w0 = u * u * u / 6.0;
  const double w1 = (3.0 * t3 - 6.0 * t2 + 4.0) / 6.0;
  const double w2 = (-3.0 * t3 + 3.0 * t2 + 3.0 * t + 1.0) / 6.0;
  const double w3 = t3 / 6.0;
  const auto mi = static_cast<std::ptrdiff_t>(m);
  const auto n = static_cast<std::ptrdiff_t>(n_);
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const std::ptrdiff_t base = i - mi - 1;
    if (periodic_) {
      out[static_cast<std::size_t>(i)] = w0 * work[wrap(base - 1, n_)] + w1 * work[wrap(base, n_)] +
                                         w2 * work[wrap(base + 1, n_)] + w3 * work[wrap(base + 2, n_)];
    } else {
      auto c = [&](std::ptrdiff_t k) { return (k >= 0 && k < n) ? work[static_cast<std::size_t>(k)] : 0.0; };
      out[static_cast<std::size_t>(i)] = w0 * c(base - 1) + w1 * c(base) + w2 * c(base + 1) + w3 * c(base + 2);
    }
  }
}

void advect_x_spline(PhaseSpaceField& f, double dt, Exec exec) {
  const auto& g = f.grid();
  const std::size_t nx = g.nx(), nv = g.nv;
  const SplineLine line(nx, true);
  const double dx = g.space.dx();
#pragma omp parallel if (exec == Exec::Parallel)
  {
    std::vector<double> col(nx), work(nx);
#pragma omp for schedule(static)
    for (std::ptrdiff_t jj = 0; jj < static_cast<std::ptrdiff_t>(nv); ++jj) {
      const auto j = static_cast<std::size_t>(jj);
      for (std::size_t i = 0; i < nx; ++i) col[i] = f(i, j);
      line.shift(col, col, g.v(j) * dt / dx, work);
      for (std::size_t i = 0; i < nx; ++i) f(i, j) = col[i];
    }
  }
}

void advect_x_spectral(PhaseSpaceField& f, double dt, Exec exec) {
  const auto& g = f.grid();
  const std::size_t nx = g.nx(), nv = g.nv;
  const RealFft fft(nx);
  const std::size_t nb = fft.bins();
  const double inv = 1.0 / static_cast<double>(nx);
#pragma omp parallel if (exec == Exec::Parallel)
  {
    std::vector<double> col(nx);
    std::vector<cplx> spec(nb);
#pragma omp for schedule(static)
    for (std::ptrdiff_t jj = 0; jj < static_cast<std::ptrdiff_t>(nv); ++jj) {
      const auto j = static_cast<std::size_t>(jj);
      for (std::size_t i = 0; i < nx; ++i) col[i] = f(i, j);
      fft.forward(col, spec);
      const double d = g.v(j) * dt;
      for (std::size_t k = 0; k < nb; ++k) {
        const double kk = g.space.k(k);
        if (k == nx / 2) {
          spec[k] = (spec[k] * std::polar(1.0, -kk * d)).real();
        } else {
          spec[k] *= std::polar(1.0, -kk * d);
        }
      }
      fft.backward(spec, col);
      for (std::size_t i = 0; i < nx; ++i) f(i, j) = col[i] * inv;
    }
  }
}

void advect_v_spline(PhaseSpaceField& f, std::span<const double> accel, double dt, Exec exec) {
  check_accel(f, accel);
  const std::size_t nx = f.nx(), nv = f.nv();
  const SplineLine line(nv, false);
  const double dv = f.grid().dv();
#pragma omp parallel if (exec == Exec::Parallel)
  {
    std::vector<double> work(nv);
#pragma omp for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(nx); ++ii) {
      const auto i = static_cast<std::size_t>(ii);
      auto row = f.row(i);
      line.shift(row, row, accel[i] * dt / dv, work);
    }
  }
}

void advect_v_spectral(PhaseSpaceField& f, std::span<const double> accel, double dt, Exec exec) {
  check_accel(f, accel);
  const std::size_t nx = f.nx(), nv = f.nv();
  const RealFft fft(nv);
  const std::size_t nb = fft.bins();
  const double dkappa = 2.0 * kPi / (static_cast<double>(nv) * f.grid().dv());
  const double inv = 1.0 / static_cast<double>(nv);
#pragma omp parallel if (exec == Exec::Parallel)
  {
    std::vector<cplx> spec(nb);
#pragma omp for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(nx); ++ii) {
      const auto i = static_cast<std::size_t>(ii);
      auto row = f.row(i);
      fft.forward(row, spec);
      const double d = accel[i] * dt;
      for (std::size_t m = 0; m < nb; ++m) {
        const cplx ph = std::polar(1.0, -static_cast<double>(m) * dkappa * d);
        spec[m] = (m == nv / 2) ? cplx((spec[m] * ph).real()) : spec[m] * ph;
      }
      fft.backward(spec, row);
      for (double& x : row) x *= inv;
    }
  }
}

std::vector<double> potential_differences(std::span<const double> V, const fields::PeriodicSpectral& ops,
                                          const PhaseSpaceGrid& grid, double hbar, Exec exec) {
  const std::size_t nx = grid.nx(), nm = grid.nv / 2 + 1;
  if (V.size() != nx) throw DomainError("potential length does not match grid");
  const auto spec = ops.transform(V);
  std::vector<double> dV(nm * nx);
  const double dlam = grid.dlambda(hbar);
#pragma omp parallel if (exec == Exec::Parallel)
  {
    std::vector<cplx> work(spec.size());
#pragma omp for schedule(static)
    for (std::ptrdiff_t mm = 0; mm < static_cast<std::ptrdiff_t>(nm); ++mm) {
      const auto m = static_cast<std::size_t>(mm);
      const double half = 0.5 * static_cast<double>(m) * dlam;
      // V(x + h) - V(x - h) has spectrum 2 i sin(k h) V_k.
      for (std::size_t k = 0; k < spec.size(); ++k) {
        const double kk = grid.space.k(k);
        work[k] = (k == nx / 2) ? cplx(0.0) : spec[k] * cplx(0.0, 2.0 * std::sin(kk * half));
      }
      const auto d = ops.inverse(work);
      std::copy(d.begin(), d.end(), dV.begin() + static_cast<std::ptrdiff_t>(m * nx));
    }
  }
  return dV;
}

void kick_lambda(PhaseSpaceField& f, std::span<const double> dV, double hbar, double dt, Exec exec) {
  const std::size_t nx = f.nx(), nv = f.nv(), nm = nv / 2 + 1;
  if (dV.size() != nm * nx) throw DomainError("potential-difference table has the wrong size");
  const RealFft fft(nv);
  const double inv = 1.0 / static_cast<double>(nv);
  const double c = dt / hbar;
#pragma omp parallel if (exec == Exec::Parallel)
  {
    std::vector<cplx> spec(nm);
#pragma omp for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(nx); ++ii) {
      const auto i = static_cast<std::size_t>(ii);
      auto row = f.row(i);
      fft.forward(row, spec);
      for (std::size_t m = 1; m < nm; ++m) {
        const cplx ph = std::polar(1.0, c * dV[m * nx + i]);
        spec[m] = (m == nv / 2) ? cplx((spec[m] * ph).real()) : spec[m] * ph;
      }
      fft.backward(spec, row);
      for (double& x : row) x *= inv;
    }
  }
}

void kinetic_phase(std::vector<std::vector<cplx>>& psi, const SpatialGrid& grid, double hbar, double dt,
                   Exec exec) {
  const std::size_t nx = grid.nx;
  const ComplexFft fft(nx);
  for (const auto& p : psi)
    if (p.size() != nx) throw DomainError("wavefunction length does not match grid");
  std::vector<cplx> phase(nx);
  for (std::size_t k = 0; k < nx; ++k) {
    const double kk = grid.k(k);
    phase[k] = std::polar(1.0 / static_cast<double>(nx), -0.5 * hbar * kk * kk * dt);
  }
#pragma omp parallel for schedule(static) if (exec == Exec::Parallel)
  for (std::ptrdiff_t aa = 0; aa < static_cast<std::ptrdiff_t>(psi.size()); ++aa) {
    auto& p = psi[static_cast<std::size_t>(aa)];
    fft.forward(p, p);
    for (std::size_t k = 0; k < nx; ++k) p[k] *= phase[k];
    fft.backward(p, p);
  }
}

void potential_phase(std::vector<std::vector<cplx>>& psi, std::span<const double> V, double hbar, double dt,
                     Exec exec) {
  const std::size_t nx = V.size();
  std::vector<cplx> phase(nx);
  for (std::size_t i = 0; i < nx; ++i) phase[i] = std::polar(1.0, -V[i] * dt / hbar);
#pragma omp parallel for schedule(static) if (exec == Exec::Parallel)
  for (std::ptrdiff_t aa = 0; aa < static_cast<std::ptrdiff_t>(psi.size()); ++aa) {
    auto& p = psi[static_cast<std::size_t>(aa)];
    for (std::size_t i = 0; i < nx; ++i) p[i] *= phase[i];
  }
}

void velocity_moments(const PhaseSpaceField& f, std::span<double> n, std::span<double> j, std::span<double> p2,
                      Exec exec) {
  const auto& g = f.grid();
  const std::size_t nx = g.nx(), nv = g.nv;
  const double dv = g.dv();
#pragma omp parallel for schedule(static) if (exec == Exec::Parallel)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(nx); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    double s0 = 0.0, s1 = 0.0, s2 = 0.0;
    const auto row = f.row(i);
    for (std::size_t q = 0; q < nv; ++q) {
      const double v = g.v(q);
      s0 += row[q];
      s1 += row[q] * v;
      s2 += row[q] * v * v;
    }
    n[i] = s0 * dv;
    j[i] = s1 * dv;
    p2[i] = s2 * dv;
  }
}

}  // namespace qplasma::kernels
