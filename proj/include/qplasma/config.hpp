#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qplasma/error.hpp"
#include "qplasma/grid.hpp"

namespace qplasma::config {

/// Flat scenario description in normalized units.
struct ScenarioConfig {
  std::string model = "vlasov";  // vlasov | wigner | hartree | fluid
  std::string equilibrium = "fd3d_projected";
  double t_over_tf = 0.01;
  double alpha = 0.01;
  double K = 1.0;
  int wavelengths = 1;  // box length L = 2 pi wavelengths / K
  double H = 0.0;
  int nx = 256;
  int nv = 256;
  double v_max = 3.0;
  double dt = 0.05;
  double t_end = 100.0;
  int diag_every = 1;      // steps between series rows
  int snapshot_every = 0;  // steps between snapshots, 0 = final only
  bool snapshot_final = true;
  std::string interpolation = "spline";  // vlasov: spline | spectral
  std::string init = "equilibrium";      // wigner: equilibrium | mixture
  std::vector<double> streams;           // hartree / mixture stream velocities
  std::string occupations = "fd";        // fd | uniform
  double gamma = 3.0;                    // fluid
  double p0 = 1.0 / 3.0;                 // fluid
  double vortex_threshold = 0.2;
  int vortex_min_v_cells = 3;
  double vortex_min_x_fraction = 0.25;
  std::string out_dir = "out";

  double box_length() const;
  PhaseSpaceGrid grid() const;

  bool operator==(const ScenarioConfig&) const = default;
};

struct ConfigIssue {
  int line = 0;  // 0 for overrides and cross-key checks
  std::string key;
  std::string message;
};

/// Carries every problem found, not just the first.
class ConfigError : public DomainError {
 public:
  explicit ConfigError(std::vector<ConfigIssue> issues);
  const std::vector<ConfigIssue>& issues() const { return issues_; }

 private:
  std::vector<ConfigIssue> issues_;
};

/// Parses `key = value` lines with `#` comments, applies the overrides
/// (`key=value` strings) on top, then validates. Throws ConfigError.
ScenarioConfig parse_config(std::string_view text, const std::vector<std::string>& overrides = {});
ScenarioConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});

/// Canonical text form: every key in fixed order. parse_config(serialize(c)) == c.
std::string serialize(const ScenarioConfig& c);

/// Range and cross-key checks; returns the issues found.
std::vector<ConfigIssue> validate(const ScenarioConfig& c);

/// Hash of the canonical form without out_dir.
std::string config_hash(const ScenarioConfig& c);

/// Names of all accepted keys.
const std::vector<std::string>& known_keys();

}  // namespace qplasma::config
