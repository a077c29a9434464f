#pragma once

#include <string>
#include <vector>

namespace fga::tunneling {

/// Barrier and confinement parameters for the WKB transverse amplitude.
struct BarrierParams {
  double oxide_thickness = 2e-9;  // d_ox (m)
  double barrier_ev = 3.0;        // V_ox
  double m_ox_ratio = 0.5;        // m*_ox / m0
  double m_si_ratio = 0.19;       // m*_si / m0
  double length = 15e-9;          // confinement length L (m)
  double n_left = 1.0;            // N_L
  double n_right = 1.0;           // N_R
  double doping_cm3 = 5e18;       // donor concentration (cm^-3)

  /// Throws Error(invalid_input) on hard violations.
  void validate() const;
  /// Soft range checks; one message per suspicious value.
  std::vector<std::string> warnings() const;
};

/// Free-electron-gas Fermi energy in eV for a donor density in cm^-3.
double fermi_energy(double doping_cm3, double m_ratio);

/// WKB exponential factor exp[-(d/a0) sqrt(m_ox (V_ox - E) / (m0 Ry))] for a
/// barrier of `barrier_ev - fermi_ev` eV.
double wkb_exponent(const BarrierParams& p, double fermi_ev);

/// Tunneling amplitude in eV at an explicit shifted Fermi energy E'_F.
/// Throws Error(over_barrier) when E'_F >= V_ox.
double wkb_delta_at(const BarrierParams& p, double fermi_ev);

/// Tunneling amplitude in eV with E'_F = E_F(doping) + V_CG (volts read as eV).
double wkb_delta(const BarrierParams& p, double v_cg);

/// Number of donors in a volume given in nm^3.
double electron_count(double volume_nm3, double doping_cm3);

}  // namespace fga::tunneling
