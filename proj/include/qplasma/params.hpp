#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace qplasma::params {

/// SI description of a fully ionized electron plasma.
struct PhysicalConditions {
  double number_density;       // 1/m^3
  double temperature;          // K
  double particle_mass;        // kg
  double particle_charge;      // C, magnitude
  double vacuum_permittivity;  // F/m
};

/// Electrons at the given density and temperature.
PhysicalConditions electron_conditions(double number_density, double temperature);

/// Named presets: "gold", "white_dwarf".
PhysicalConditions material(std::string_view name);

struct PlasmaScales {
  double plasma_frequency;        // 1/s
  double thermal_velocity;        // m/s
  double debye_length;            // m
  double de_broglie_length;       // m
  double fermi_temperature;       // K
  double fermi_energy;            // J
  double fermi_velocity;          // m/s
  double fermi_screening_length;  // m
};

struct DimensionlessGroup {
  double chi;            // T_F / T
  double g_classical;    // e^2 n^{1/3} / (eps0 k_B T)
  double g_quantum;      // 2/(3 pi^2)^{2/3} e^2 m / (hbar^2 eps0 n^{1/3})
  double H;              // hbar omega_p / E_F
  double nu_ee_over_wp;  // g_Q^{-1/2} (T/T_F)^2
};

enum class RegimeLabel {
  ClassicalCollisionless,
  ClassicalCollisional,
  QuantumCollisionless,
  QuantumCollisional,
};

std::string_view to_string(RegimeLabel label);

/// Throws DomainError unless every field is strictly positive and finite.
void validate(const PhysicalConditions& cond);

PlasmaScales compute_scales(const PhysicalConditions& cond);
DimensionlessGroup compute_dimensionless(const PhysicalConditions& cond);

/// chi >= 1 selects the quantum branch; a coupling parameter >= 1 selects
/// the collisional side. Values exactly at 1 land on the quantum/collisional
/// side.
RegimeLabel classify_regime(const DimensionlessGroup& d);

struct CollisionTimes {
  double tau_ee;  // s, 1/nu_ee
  double tau_p;   // s, 2 pi / omega_p
  bool outside_validity;  // chi < 1: degenerate-gas estimate not applicable
};

CollisionTimes pauli_collision_time(const PhysicalConditions& cond);

/// Table-style report of scales and dimensionless groups.
struct Report {
  PhysicalConditions conditions;
  PlasmaScales scales;
  DimensionlessGroup groups;
  RegimeLabel regime;
  CollisionTimes times;
};

Report make_report(const PhysicalConditions& cond);
std::string format_text(const Report& r);
std::string format_csv(const Report& r);

}  // namespace qplasma::params
