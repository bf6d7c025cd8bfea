#include "qplasma/fields.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qplasma/error.hpp"

namespace qplasma {

void SpatialGrid::validate() const {
  if (!(length > 0.0) || !std::isfinite(length)) throw DomainError("grid length must be positive");
  if (nx < 8 || (nx & (nx - 1)) != 0) throw DomainError("nx must be a power of two >= 8");
}

void PhaseSpaceGrid::validate() const {
  space.validate();
  if (!(v_max > 0.0)) throw DomainError("v_max must be positive");
  if (nv < 8 || nv % 2 != 0) throw DomainError("nv must be even and >= 8");
}

std::size_t PhaseSpaceGrid::nearest_v(double v) const {
  const double j = std::round(v / dv()) + static_cast<double>(nv / 2);
  return static_cast<std::size_t>(std::clamp(j, 0.0, static_cast<double>(nv - 1)));
}

double PhaseSpaceField::mass() const {
  const double sum = std::accumulate(data_.begin(), data_.end(), 0.0);
  return sum * grid_.space.dx() * grid_.dv();
}

double PhaseSpaceField::max_abs() const {
  double m = 0.0;
  for (double x : data_) m = std::max(m, std::abs(x));
  return m;
}

namespace fields {

PeriodicSpectral::PeriodicSpectral(const SpatialGrid& grid) : grid_(grid), fft_(grid.nx) {
  grid_.validate();
}

std::vector<cplx> PeriodicSpectral::transform(std::span<const double> field) const {
  std::vector<cplx> spec(fft_.bins());
  fft_.forward(field, spec);
  return spec;
}

ScalarField PeriodicSpectral::inverse(std::span<const cplx> spectrum) const {
  std::vector<cplx> tmp(spectrum.begin(), spectrum.end());
  ScalarField out(grid_.nx);
  fft_.backward(tmp, out);
  const double scale = 1.0 / static_cast<double>(grid_.nx);
  for (double& v : out) v *= scale;
  return out;
}

ScalarField PeriodicSpectral::poisson(std::span<const double> density, double background,
                                      double tolerance) const {
  if (density.size() != grid_.nx) throw DomainError("density size does not match grid");
  const double mean = std::accumulate(density.begin(), density.end(), 0.0) / static_cast<double>(grid_.nx);
  if (std::abs(mean - background) > tolerance * std::max(1.0, std::abs(background))) {
    throw DomainError("box is not neutral: mean density " + std::to_string(mean) +
                      " vs background " + std::to_string(background));
  }
  auto spec = transform(density);
  spec[0] = 0.0;
  for (std::size_t i = 1; i < spec.size(); ++i) {
    const double k = grid_.k(i);
    spec[i] /= -(k * k);
  }
  return inverse(spec);
}

ScalarField PeriodicSpectral::derivative(std::span<const double> field, int order) const {
  if (order < 1 || order > 2) throw DomainError("derivative order must be 1 or 2");
  auto spec = transform(field);
  const std::size_t nyq = grid_.nx / 2;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const double k = grid_.k(i);
    if (order == 1) {
      spec[i] *= (i == nyq) ? cplx(0.0) : cplx(0.0, k);
    } else {
      spec[i] *= -(k * k);
    }
  }
  return inverse(spec);
}

ScalarField PeriodicSpectral::electric_field(std::span<const double> potential) const {
  ScalarField e = derivative(potential, 1);
  for (double& v : e) v = -v;
  return e;
}

ScalarField PeriodicSpectral::shifted(std::span<const double> field, double shift) const {
  auto spec = transform(field);
  const std::size_t nyq = grid_.nx / 2;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const double phase = grid_.k(i) * shift;
    spec[i] *= (i == nyq) ? cplx(std::cos(phase)) : std::polar(1.0, phase);
  }
  return inverse(spec);
}

Moments moments(const PhaseSpaceField& f) {
  const auto& g = f.grid();
  const double dv = g.dv();
  Moments m;
  m.density.assign(g.nx(), 0.0);
  m.flux.assign(g.nx(), 0.0);
  m.pressure.assign(g.nx(), 0.0);
  for (std::size_t ix = 0; ix < g.nx(); ++ix) {
    auto row = f.row(ix);
    double n = 0.0, j = 0.0, p2 = 0.0;
    for (std::size_t iv = 0; iv < g.nv; ++iv) {
      const double v = g.v(iv);
      n += row[iv];
      j += row[iv] * v;
      p2 += row[iv] * v * v;
    }
    n *= dv;
    j *= dv;
    p2 *= dv;
    m.density[ix] = n;
    m.flux[ix] = j;
    m.pressure[ix] = (n != 0.0) ? p2 - j * j / n : p2;
  }
  return m;
}

ScalarField density(const PhaseSpaceField& f) {
  const double dv = f.grid().dv();
  ScalarField n(f.nx(), 0.0);
  for (std::size_t ix = 0; ix < f.nx(); ++ix) {
    auto row = f.row(ix);
    n[ix] = std::accumulate(row.begin(), row.end(), 0.0) * dv;
  }
  return n;
}

double field_energy(std::span<const double> efield, const SpatialGrid& grid) {
  double s = 0.0;
  for (double e : efield) s += 0.5 * e * e;
  return s * grid.dx() / grid.length;
}

}  // namespace fields
}  // namespace qplasma
