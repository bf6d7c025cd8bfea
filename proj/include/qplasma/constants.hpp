#pragma once

#include <numbers>

namespace qplasma::si {

// CODATA 2018 exact/recommended values.
inline constexpr double hbar = 1.054571817e-34;        // J s
inline constexpr double boltzmann = 1.380649e-23;      // J/K
inline constexpr double electron_mass = 9.1093837015e-31;  // kg
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double vacuum_permittivity = 8.8541878128e-12;  // F/m
inline constexpr double electron_volt = elementary_charge;  // J

inline constexpr double pi = std::numbers::pi;

}  // namespace qplasma::si
