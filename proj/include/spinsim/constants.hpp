#pragma once

#include <numbers>

// Physical constants, CODATA 2018. Energies are carried in eV throughout the
// library, times in seconds, fields in tesla, so the constants below come in
// eV-based units rather than SI joules.
namespace spinsim::constants {

/// Bohr magneton [eV/T]
inline constexpr double mu_B = 5.7883818060e-5;

/// Boltzmann constant [eV/K]
inline constexpr double k_B = 8.617333262e-5;

/// Planck constant [eV*s]
inline constexpr double h = 4.135667696e-15;

/// Reduced Planck constant [eV*s]
inline constexpr double hbar = h / (2.0 * std::numbers::pi);

/// Vacuum permeability [T*m/A]
inline constexpr double mu_0 = 1.25663706212e-6;

/// Speed of light [m/s]
inline constexpr double c = 299792458.0;

/// mu_B / h [Hz/T], the gyromagnetic conversion used all over ESR math.
inline constexpr double mu_B_over_h = mu_B / h;

}  // namespace spinsim::constants
