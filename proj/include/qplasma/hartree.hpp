#pragma once

#include <vector>

#include "qplasma/fields.hpp"
#include "qplasma/kernels.hpp"
#include "qplasma/series.hpp"
#include "qplasma/streams.hpp"

namespace qplasma::hartree {

struct HartreeState {
  StreamSet streams;
  double time = 0.0;
};

struct Options {
  Exec exec = Exec::Parallel;
  double neutrality_tolerance = 1e-8;
  bool self_consistent = true;
};

/// Split-step integrator for the N coupled Schrodinger-Poisson equations
/// i hbar psi_t = -(hbar^2/2) psi_xx - phi psi, phi'' = sum p |psi|^2 - 1.
class Integrator {
 public:
  Integrator(const SpatialGrid& grid, double H, double background = 1.0, Options options = {});

  const SpatialGrid& grid() const { return grid_; }
  double hbar() const { return 0.5 * H_; }

  void step(HartreeState& state, double dt) const;

  /// Poisson potential for the stream density.
  std::vector<double> potential(const StreamSet& s) const;
  /// The density used as Poisson source in the most recent step.
  const std::vector<double>& last_source() const { return last_source_; }
  DiagnosticSample diagnose(const HartreeState& state) const;

 private:
  SpatialGrid grid_;
  double H_;
  double background_;
  Options options_;
  fields::PeriodicSpectral ops_;
  mutable std::vector<double> last_source_;
};

/// (1/L) int |psi|^2 dx.
double norm(const std::vector<cplx>& psi);

/// psi_a = sqrt(1 + alpha cos(K x)) exp(i u_a x / hbar) for every stream.
StreamSet perturbed_mixture(const StreamSpec& spec, const SpatialGrid& grid, double H, double alpha, double K);

struct MadelungFields {
  std::vector<std::vector<double>> density;   // n_a = |psi_a|^2
  std::vector<std::vector<double>> velocity;  // u_a = hbar d(arg psi_a)/dx
  std::vector<std::vector<bool>> masked;      // |psi_a|^2 below the vacuum threshold
};

/// Local phase gradient from psi(x + dx) conj(psi(x - dx)), free of branch
/// cuts. Cells with n below `vacuum` times the stream maximum are masked.
MadelungFields madelung_decompose(const StreamSet& s, double vacuum = 1e-6);

/// Same for a single wavefunction.
void madelung(const std::vector<cplx>& psi, const SpatialGrid& grid, double hbar, std::vector<double>& n,
              std::vector<double>& u, std::vector<bool>& masked, double vacuum = 1e-6);

/// Bohm term (hbar^2/2) d/dx (sqrt(n)_xx / sqrt(n)), spectral derivatives.
std::vector<double> bohm_force(const std::vector<double>& n, const fields::PeriodicSpectral& ops, double hbar);

}  // namespace qplasma::hartree
