#pragma once

#include <optional>
#include <vector>

#include "qplasma/fields.hpp"
#include "qplasma/grid.hpp"
#include "qplasma/kernels.hpp"
#include "qplasma/series.hpp"

namespace qplasma::vlasov {

enum class Interpolation { Spline, Spectral };

struct VlasovState {
  PhaseSpaceField f;
  double time = 0.0;
};

struct Options {
  Interpolation x_interp = Interpolation::Spline;
  Interpolation v_interp = Interpolation::Spline;
  Exec exec = Exec::Parallel;
  /// Relative tolerance on neutrality handed to the Poisson solve.
  double neutrality_tolerance = 1e-6;
  /// Switch the self-consistent field off (free streaming).
  bool self_consistent = true;
};

/// Strang-split semi-Lagrangian integrator for f_t + v f_x + phi_x f_v = 0
/// with phi'' = n - n_background.
class Integrator {
 public:
  Integrator(const PhaseSpaceGrid& grid, double background, Options options = {});

  const PhaseSpaceGrid& grid() const { return grid_; }
  const Options& options() const { return options_; }
  double background() const { return background_; }

  /// Half x-advection, Poisson solve, full v-advection, half x-advection.
  /// Throws NumericError if f stops being finite.
  void step(VlasovState& state, double dt) const;

  std::vector<double> potential(const PhaseSpaceField& f) const;
  DiagnosticSample diagnose(const VlasovState& state) const;

 private:
  void advect_x(PhaseSpaceField& f, double dt) const;
  PhaseSpaceGrid grid_;
  double background_;
  Options options_;
  fields::PeriodicSpectral ops_;
};

/// Advisory time step 0.5 min(dx / v_max, dv / max|E|).
double advisory_dt(const PhaseSpaceGrid& grid, double max_efield);

/// Throws NumericError naming the first non-finite cell.
void check_finite(const PhaseSpaceField& f, double time, const char* model);

}  // namespace qplasma::vlasov
