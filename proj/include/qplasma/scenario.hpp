#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qplasma/config.hpp"
#include "qplasma/diagio.hpp"
#include "qplasma/kernels.hpp"
#include "qplasma/series.hpp"
#include "qplasma/streams.hpp"

namespace qplasma::scenario {

struct RunSummary {
  std::size_t steps = 0;
  double mass_drift = 0.0;    // relative, max over the run
  double energy_drift = 0.0;  // relative, max over the run
  double norm_drift = 0.0;    // max per-stream |norm - 1| (wavefunction models)
  double negative_mass = 0.0; // wigner: (1/L) int f- at the end
  double phase_velocity = 0.0;
  diagio::VortexResult vortex;  // phase-space models, final state
  std::size_t aliasing_warnings = 0;
  std::string provenance;
};

struct RunResult {
  config::ScenarioConfig config;
  std::string hash;
  DiagnosticSeries series;
  std::optional<PhaseSpaceField> final_f;
  std::optional<StreamSet> final_streams;  // hartree (N streams) and fluid (one)
  std::vector<diagio::Snapshot> snapshots;  // periodic snapshots, if requested
  RunSummary summary;
};

/// Builds the initial state from the config, integrates to t_end and
/// collects diagnostics. `progress`, if set, is called after every step.
RunResult run(const config::ScenarioConfig& c, Exec exec = Exec::Parallel,
              const std::function<void(double)>& progress = {});

/// Writes series.csv, config.cfg, summary.json and the snapshots into dir.
void write_outputs(const RunResult& r, const std::filesystem::path& dir);

struct Comparison {
  RunResult a, b;
  std::string joined_csv;  // t, then field/kinetic/total energy of a and b
};

/// Runs both configs (grids must agree) and joins the series on time.
Comparison compare(const config::ScenarioConfig& a, const config::ScenarioConfig& b, Exec exec = Exec::Parallel);

/// Phase velocity Re(omega)/K of the kinetic Vlasov root for the config's
/// equilibrium, falling back to sqrt(1 + K^2)/K.
double phase_velocity(const config::ScenarioConfig& c);

/// Honour QPLASMA_THREADS (caps the OpenMP worker count). Returns the cap
/// in effect, 0 when unset.
int apply_thread_cap();

}  // namespace qplasma::scenario
