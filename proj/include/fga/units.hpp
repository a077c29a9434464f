#pragma once

// Physical constants in SI units unless noted.
namespace fga::units {

inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double vacuum_permittivity = 8.854e-12;      // F/m
inline constexpr double electron_mass = 9.1093837015e-31;     // kg
inline constexpr double hbar = 1.054571817e-34;               // J s
inline constexpr double hbar_ev_s = 6.582119569e-16;          // eV s

// Atomic-scale constants used by the WKB tunneling prefactor, kept at the
// rounded values the model was calibrated with.
inline constexpr double bohr_radius_nm = 0.0529;
inline constexpr double rydberg_ev = 13.6;

inline constexpr double nm = 1e-9;
inline constexpr double attofarad = 1e-18;

/// Energies computed as (charge in e)^2 / (capacitance in F) are converted to
/// eV by multiplying with e.
inline constexpr double e2_per_farad_to_ev = elementary_charge;

/// Seconds to internal time when energies are measured in `energy_unit_ev`
/// and hbar = 1.
inline constexpr double seconds_to_internal(double seconds, double energy_unit_ev) {
  return seconds * energy_unit_ev / hbar_ev_s;
}

}  // namespace fga::units
