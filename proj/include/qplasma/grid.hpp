#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace qplasma {

/// Uniform periodic grid on [0, L). Lengths in lambda_F when normalized.
struct SpatialGrid {
  double length = 2.0 * std::numbers::pi;
  std::size_t nx = 256;

  double dx() const { return length / static_cast<double>(nx); }
  double x(std::size_t i) const { return static_cast<double>(i) * dx(); }
  /// Signed angular wavenumber of FFT bin i.
  double k(std::size_t i) const {
    const auto n = static_cast<std::ptrdiff_t>(nx);
    auto m = static_cast<std::ptrdiff_t>(i);
    if (m > n / 2) m -= n;
    return 2.0 * std::numbers::pi * static_cast<double>(m) / length;
  }
  /// Throws DomainError unless nx is a power of two >= 8 and length > 0.
  void validate() const;

  bool operator==(const SpatialGrid&) const = default;
};

/// Tensor grid: periodic x times a truncated velocity axis.
///
/// Velocity nodes are v_j = (j - nv/2) dv, j = 0..nv-1, dv = 2 v_max / nv:
/// the node set contains v = 0 and is symmetric about it apart from the
/// single edge node at -v_max, which makes it Fourier-dual to a uniform
/// lambda grid with spacing 2 pi hbar / (nv dv).
struct PhaseSpaceGrid {
  SpatialGrid space;
  double v_max = 3.0;
  std::size_t nv = 256;

  std::size_t nx() const { return space.nx; }
  double dv() const { return 2.0 * v_max / static_cast<double>(nv); }
  double v(std::size_t j) const {
    return (static_cast<double>(j) - static_cast<double>(nv / 2)) * dv();
  }
  /// Index of the node nearest to v (clamped).
  std::size_t nearest_v(double v) const;
  /// Spacing of the dual lambda grid for the given normalized hbar.
  double dlambda(double hbar) const {
    return 2.0 * std::numbers::pi * hbar / (static_cast<double>(nv) * dv());
  }
  /// Lambda at Fourier index m (signed).
  double lambda(std::ptrdiff_t m, double hbar) const { return static_cast<double>(m) * dlambda(hbar); }
  void validate() const;

  bool operator==(const PhaseSpaceGrid&) const = default;
};

/// Real f(x, v) sampled on a PhaseSpaceGrid, x-major: data[ix * nv + iv].
class PhaseSpaceField {
 public:
  PhaseSpaceField() = default;
  explicit PhaseSpaceField(const PhaseSpaceGrid& grid, double fill = 0.0)
      : grid_(grid), data_(grid.nx() * grid.nv, fill) {}

  const PhaseSpaceGrid& grid() const { return grid_; }
  std::size_t nx() const { return grid_.nx(); }
  std::size_t nv() const { return grid_.nv; }

  double& operator()(std::size_t ix, std::size_t iv) { return data_[ix * grid_.nv + iv]; }
  double operator()(std::size_t ix, std::size_t iv) const { return data_[ix * grid_.nv + iv]; }

  std::span<double> row(std::size_t ix) { return {data_.data() + ix * grid_.nv, grid_.nv}; }
  std::span<const double> row(std::size_t ix) const { return {data_.data() + ix * grid_.nv, grid_.nv}; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  /// Integral of f over the box (midpoint/rectangle rule).
  double mass() const;
  double max_abs() const;

 private:
  PhaseSpaceGrid grid_;
  std::vector<double> data_;
};

}  // namespace qplasma
