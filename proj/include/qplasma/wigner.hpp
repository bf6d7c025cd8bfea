#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qplasma/fields.hpp"
#include "qplasma/grid.hpp"
#include "qplasma/kernels.hpp"
#include "qplasma/series.hpp"

namespace qplasma::wigner {

struct WignerState {
  PhaseSpaceField f;  // may be negative
  double time = 0.0;
  double H = 1.0;
  std::string provenance;  // how the initial f was built
};

/// V_ext(x + lambda/2) - V_ext(x - lambda/2) for an external potential
/// energy per unit mass.
using ExternalDifference = std::function<double(double x, double lambda)>;

struct Options {
  Exec exec = Exec::Parallel;
  double neutrality_tolerance = 1e-6;
  bool self_consistent = true;
  ExternalDifference external;
};

/// Strang-split Wigner-Poisson integrator: spectral free streaming in x and
/// the nonlocal potential term applied exactly in lambda space.
class Integrator {
 public:
  Integrator(const PhaseSpaceGrid& grid, double H, double background, Options options = {});

  const PhaseSpaceGrid& grid() const { return grid_; }
  double H() const { return H_; }
  double hbar() const { return 0.5 * H_; }
  /// Largest |lambda| resolved by the velocity grid.
  double lambda_max() const;
  /// Steps in which the kick phase changed by more than pi between
  /// neighbouring lambda modes.
  std::size_t aliasing_warnings() const { return aliasing_; }

  void step(WignerState& state, double dt);

  std::vector<double> potential(const PhaseSpaceField& f) const;
  DiagnosticSample diagnose(const WignerState& state) const;

 private:
  PhaseSpaceGrid grid_;
  double H_;
  double background_;
  Options options_;
  fields::PeriodicSpectral ops_;
  std::size_t aliasing_ = 0;
};

/// f+ = max(f, 0) and f- = max(-f, 0).
PhaseSpaceField positive_part(const PhaseSpaceField& f);
PhaseSpaceField negative_part(const PhaseSpaceField& f);
/// int f- dx dv / L.
double negative_mass(const PhaseSpaceField& f);

/// Mean velocity <v> and mean force (1/L) int n phi_x dx of a state.
struct EhrenfestPair {
  double mean_velocity = 0.0;
  double mean_force = 0.0;
};
EhrenfestPair ehrenfest(const Integrator& integ, const WignerState& state);

struct LimitRow {
  double H = 0.0;
  std::vector<double> times;
  std::vector<double> deviation;  // sup |f_W - f_V| at each time
};

/// Runs Wigner(H) for every H in H_list and the Vlasov limit (spectral
/// interpolation in x and v) from the same f0, recording the sup-norm
/// deviation at every multiple of `sample_every` up to t_end.
std::vector<LimitRow> semiclassical_limit_check(const PhaseSpaceField& f0, const std::vector<double>& H_list,
                                                double t_end, double dt, double sample_every,
                                                Exec exec = Exec::Parallel);

}  // namespace qplasma::wigner
