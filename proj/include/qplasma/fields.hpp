#pragma once

#include <span>
#include <vector>

#include "qplasma/fft.hpp"
#include "qplasma/grid.hpp"

namespace qplasma::fields {

using ScalarField = std::vector<double>;

/// Spectral operators on a periodic SpatialGrid. Immutable after
/// construction and shareable between threads; scratch is per call.
class PeriodicSpectral {
 public:
  explicit PeriodicSpectral(const SpatialGrid& grid);

  const SpatialGrid& grid() const { return grid_; }

  /// Solves phi'' = density - background with zero-mean phi. Throws
  /// DomainError if |mean(density) - background| exceeds `tolerance`
  /// (relative to background).
  ScalarField poisson(std::span<const double> density, double background,
                      double tolerance = 1e-10) const;

  /// Spectral derivative of order 1 or 2.
  ScalarField derivative(std::span<const double> field, int order = 1) const;

  /// E = -phi'.
  ScalarField electric_field(std::span<const double> potential) const;

  /// field(x + shift) by trigonometric interpolation.
  ScalarField shifted(std::span<const double> field, double shift) const;

  /// Forward transform (n/2 + 1 bins) and inverse, with the 1/n folded
  /// into the inverse.
  std::vector<cplx> transform(std::span<const double> field) const;
  ScalarField inverse(std::span<const cplx> spectrum) const;

 private:
  SpatialGrid grid_;
  RealFft fft_;
};

/// Velocity moments of f at every x.
struct Moments {
  ScalarField density;
  ScalarField flux;      // int f v dv
  ScalarField pressure;  // int f (v - u)^2 dv, u = flux / density
};

Moments moments(const PhaseSpaceField& f);
ScalarField density(const PhaseSpaceField& f);

/// (1/L) int E^2/2 dx.
double field_energy(std::span<const double> efield, const SpatialGrid& grid);

}  // namespace qplasma::fields
