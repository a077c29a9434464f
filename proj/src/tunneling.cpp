#include "fga/tunneling.hpp"

#include <cmath>
#include <numbers>

#include "fga/error.hpp"
#include "fga/units.hpp"

namespace fga::tunneling {

void BarrierParams::validate() const {
  if (!(oxide_thickness >= 0.0)) throw Error(ErrorKind::invalid_input, "d_ox must be non-negative");
  if (!(length > 0.0)) throw Error(ErrorKind::invalid_input, "confinement length must be positive");
  if (!(barrier_ev > 0.0)) throw Error(ErrorKind::invalid_input, "barrier height must be positive");
  if (!(m_ox_ratio > 0.0) || !(m_si_ratio > 0.0)) throw Error(ErrorKind::invalid_input, "masses must be positive");
  if (!(n_left >= 0.0) || !(n_right >= 0.0)) throw Error(ErrorKind::invalid_input, "N_L, N_R must be non-negative");
  if (!(doping_cm3 > 0.0)) throw Error(ErrorKind::invalid_input, "doping must be positive");
}

std::vector<std::string> BarrierParams::warnings() const {
  std::vector<std::string> out;
  auto check = [&](double ratio, const char* name) {
    if (ratio <= 0.01 || ratio >= 2.0) out.push_back(std::string(name) + " outside the plausible range (0.01, 2)");
  };
  check(m_ox_ratio, "m_ox_ratio");
  check(m_si_ratio, "m_si_ratio");
  return out;
}

double fermi_energy(double doping_cm3, double m_ratio) {
  if (!(doping_cm3 > 0.0)) throw Error(ErrorKind::invalid_input, "doping must be positive");
  if (!(m_ratio > 0.0)) throw Error(ErrorKind::invalid_input, "effective mass must be positive");
  const double n = doping_cm3 * 1e6;  // m^-3
  const double kf2 = std::pow(3.0 * std::numbers::pi * std::numbers::pi * n, 2.0 / 3.0);
  const double joules = units::hbar * units::hbar * kf2 / (2.0 * m_ratio * units::electron_mass);
  return joules / units::elementary_charge;
}

double wkb_exponent(const BarrierParams& p, double fermi_ev) {
  const double height = p.barrier_ev - fermi_ev;
  if (!(height > 0.0)) {
    throw Error(ErrorKind::over_barrier, "E'_F = " + std::to_string(fermi_ev) + " eV is not below V_ox = " +
                                             std::to_string(p.barrier_ev) + " eV");
  }
  const double d_over_a0 = p.oxide_thickness / units::nm / units::bohr_radius_nm;
  return std::exp(-d_over_a0 * std::sqrt(p.m_ox_ratio * height / units::rydberg_ev));
}

double wkb_delta_at(const BarrierParams& p, double fermi_ev) {
  p.validate();
  const double factor = wkb_exponent(p, fermi_ev);
  const double confinement = std::numbers::pi * units::bohr_radius_nm / (p.length / units::nm);
  return p.n_left * p.n_right * (units::rydberg_ev / p.m_si_ratio) * confinement * confinement * factor;
}

double wkb_delta(const BarrierParams& p, double v_cg) {
  return wkb_delta_at(p, fermi_energy(p.doping_cm3, p.m_si_ratio) + v_cg);
}

double electron_count(double volume_nm3, double doping_cm3) {
  if (!(volume_nm3 >= 0.0) || !(doping_cm3 >= 0.0)) {
    throw Error(ErrorKind::invalid_input, "volume and doping must be non-negative");
  }
  return doping_cm3 * volume_nm3 / 1e21;  // 1 nm^3 = 1e-21 cm^3
}

}  // namespace fga::tunneling
