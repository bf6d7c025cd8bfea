#pragma once

#include <vector>

#include "qplasma/fft.hpp"
#include "qplasma/grid.hpp"

namespace qplasma {

/// Occupations and drift velocities of a discrete set of streams.
struct StreamSpec {
  std::vector<double> probabilities;  // sum to 1
  std::vector<double> velocities;     // v_F units
  /// Occupations before renormalization (empty when given directly).
  std::vector<double> raw_probabilities;

  std::size_t size() const { return velocities.size(); }
  /// Throws DomainError on empty/mismatched lists, probabilities outside
  /// [0,1], sum != 1, non-finite or repeated velocities.
  void validate() const;
};

/// N wavefunctions on a periodic grid with occupations (Hartree state).
/// Each stream is normalized so that (1/L) int |psi|^2 dx = 1.
struct StreamSet {
  SpatialGrid grid;
  double H = 1.0;  // hbar_eff = H / 2
  std::vector<double> probabilities;
  std::vector<std::vector<cplx>> psi;

  double hbar() const { return 0.5 * H; }
  std::size_t size() const { return psi.size(); }
  /// sum_a p_a |psi_a|^2 at each node.
  std::vector<double> density() const;
};

}  // namespace qplasma
