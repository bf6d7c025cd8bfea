#pragma once

#include <string>
#include <vector>

namespace qplasma {

/// One row of the diagnostic time series. Energies and moments are
/// intensive (box averages) in normalized units.
struct DiagnosticSample {
  double t = 0.0;
  double field_energy = 0.0;
  double kinetic_energy = 0.0;
  double total_energy = 0.0;
  double mass = 0.0;
  double momentum = 0.0;
};

struct DiagnosticSeries {
  std::string model;
  std::string config_hash;
  std::vector<DiagnosticSample> samples;

  std::vector<double> times() const;
  std::vector<double> field_energy() const;
};

}  // namespace qplasma
