#include "qplasma/params.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

#include "qplasma/constants.hpp"
#include "qplasma/error.hpp"

namespace qplasma::params {

namespace {

// (3 pi^2)^{2/3}
const double kThreePiSq23 = std::cbrt(3.0 * si::pi * si::pi) * std::cbrt(3.0 * si::pi * si::pi);

void check_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw DomainError(std::string(name) + " must be strictly positive and finite");
  }
}

}  // namespace

PhysicalConditions electron_conditions(double number_density, double temperature) {
  return {number_density, temperature, si::electron_mass, si::elementary_charge,
          si::vacuum_permittivity};
}

PhysicalConditions material(std::string_view name) {
  if (name == "gold") return electron_conditions(5.9e28, 300.0);
  if (name == "white_dwarf") return electron_conditions(1e36, 1e8);
  throw DomainError("unknown material '" + std::string(name) + "' (known: gold, white_dwarf)");
}

std::string_view to_string(RegimeLabel label) {
  switch (label) {
    case RegimeLabel::ClassicalCollisionless: return "classical-collisionless (Vlasov)";
    case RegimeLabel::ClassicalCollisional: return "classical-collisional (Boltzmann)";
    case RegimeLabel::QuantumCollisionless: return "quantum-collisionless (Wigner)";
    case RegimeLabel::QuantumCollisional: return "quantum-collisional (Wigner + coll.)";
  }
  return "unknown";
}

void validate(const PhysicalConditions& c) {
  check_positive(c.number_density, "number_density");
  check_positive(c.temperature, "temperature");
  check_positive(c.particle_mass, "particle_mass");
  check_positive(c.particle_charge, "particle_charge");
  check_positive(c.vacuum_permittivity, "vacuum_permittivity");
}

PlasmaScales compute_scales(const PhysicalConditions& c) {
  validate(c);
  const double n = c.number_density;
  const double m = c.particle_mass;
  const double e = c.particle_charge;
  PlasmaScales s{};
  s.plasma_frequency = std::sqrt(e * e * n / (m * c.vacuum_permittivity));
  s.thermal_velocity = std::sqrt(si::boltzmann * c.temperature / m);
  s.debye_length = s.thermal_velocity / s.plasma_frequency;
  s.de_broglie_length = si::hbar / (m * s.thermal_velocity);
  s.fermi_energy = si::hbar * si::hbar / (2.0 * m) * kThreePiSq23 * std::cbrt(n) * std::cbrt(n);
  s.fermi_temperature = s.fermi_energy / si::boltzmann;
  s.fermi_velocity = si::hbar / m * std::cbrt(3.0 * si::pi * si::pi * n);
  s.fermi_screening_length = s.fermi_velocity / s.plasma_frequency;
  return s;
}

DimensionlessGroup compute_dimensionless(const PhysicalConditions& c) {
  const PlasmaScales s = compute_scales(c);
  const double n = c.number_density;
  const double e2 = c.particle_charge * c.particle_charge;
  DimensionlessGroup d{};
  d.chi = s.fermi_temperature / c.temperature;
  d.g_classical = e2 * std::cbrt(n) / (c.vacuum_permittivity * si::boltzmann * c.temperature);
  d.g_quantum = 2.0 / kThreePiSq23 * e2 * c.particle_mass /
                (si::hbar * si::hbar * c.vacuum_permittivity * std::cbrt(n));
  d.H = si::hbar * s.plasma_frequency / s.fermi_energy;
  const double t = c.temperature / s.fermi_temperature;
  d.nu_ee_over_wp = t * t / std::sqrt(d.g_quantum);
  return d;
}

RegimeLabel classify_regime(const DimensionlessGroup& d) {
  if (d.chi >= 1.0) {
    return d.g_quantum >= 1.0 ? RegimeLabel::QuantumCollisional : RegimeLabel::QuantumCollisionless;
  }
  return d.g_classical >= 1.0 ? RegimeLabel::ClassicalCollisional
                              : RegimeLabel::ClassicalCollisionless;
}

CollisionTimes pauli_collision_time(const PhysicalConditions& c) {
  const PlasmaScales s = compute_scales(c);
  const DimensionlessGroup d = compute_dimensionless(c);
  CollisionTimes t{};
  const double nu = d.nu_ee_over_wp * s.plasma_frequency;
  t.tau_ee = 1.0 / nu;
  t.tau_p = 2.0 * si::pi / s.plasma_frequency;
  t.outside_validity = d.chi < 1.0;
  return t;
}

Report make_report(const PhysicalConditions& cond) {
  Report r{cond, compute_scales(cond), compute_dimensionless(cond), {}, pauli_collision_time(cond)};
  r.regime = classify_regime(r.groups);
  return r;
}

namespace {

struct Row {
  const char* key;
  const char* unit;
  double value;
};

std::vector<Row> rows(const Report& r) {
  return {
      {"n", "m^-3", r.conditions.number_density},
      {"T", "K", r.conditions.temperature},
      {"omega_p", "s^-1", r.scales.plasma_frequency},
      {"tau_p", "s", r.times.tau_p},
      {"tau_ee", "s", r.times.tau_ee},
      {"T_F", "K", r.scales.fermi_temperature},
      {"E_F", "eV", r.scales.fermi_energy / si::electron_volt},
      {"v_F", "m/s", r.scales.fermi_velocity},
      {"lambda_F", "m", r.scales.fermi_screening_length},
      {"v_T", "m/s", r.scales.thermal_velocity},
      {"lambda_D", "m", r.scales.debye_length},
      {"lambda_B", "m", r.scales.de_broglie_length},
      {"chi", "-", r.groups.chi},
      {"g_C", "-", r.groups.g_classical},
      {"g_Q", "-", r.groups.g_quantum},
      {"H", "-", r.groups.H},
      {"nu_ee/omega_p", "-", r.groups.nu_ee_over_wp},
  };
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

}  // namespace

std::string format_text(const Report& r) {
  std::ostringstream out;
  char line[128];
  for (const Row& row : rows(r)) {
    std::snprintf(line, sizeof line, "%-14s %14s  %s\n", row.key, fmt(row.value).c_str(), row.unit);
    out << line;
  }
  out << "regime         " << to_string(r.regime) << '\n';
  if (r.times.outside_validity) {
    out << "warning        tau_ee estimate assumes a degenerate gas (chi >= 1)\n";
  }
  return out.str();
}

std::string format_csv(const Report& r) {
  std::ostringstream out;
  out << "quantity,value,unit\n";
  for (const Row& row : rows(r)) out << row.key << ',' << fmt(row.value) << ',' << row.unit << '\n';
  out << "regime," << to_string(r.regime) << ",-\n";
  return out.str();
}

}  // namespace qplasma::params
