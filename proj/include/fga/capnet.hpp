#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "fga/ising.hpp"
#include "fga/lattice.hpp"

namespace fga::capnet {

/// Capacitor values per cell, in farads. Each entry belongs to the cell that
/// owns it; entries that would reach outside the lattice are exactly zero.
///   A: FG-CG          B: FG-substrate      H: FG-source     I: FG-drain
///   D: FG(i,j)-FG(i,j+1)     L: FG(i,j)-FG(i+1,j)
///   J: FG(i,j)-FG(i+1,j+1)   K: FG(i+1,j)-FG(i,j+1)
///   E: CG(i,j)-FG(i,j+1)     F: FG(i,j)-CG(i,j+1)
///   M: CG(i,j)-FG(i+1,j)     N: FG(i,j)-CG(i+1,j)
struct CapacitanceSet {
  Grid grid;
  std::vector<double> A, B, H, I, D, L, J, K, E, F, M, N;

  explicit CapacitanceSet(const Grid& g = {});

  /// Value of `member` at (i, j), zero outside the lattice.
  double at(const std::vector<double>& member, int i, int j) const {
    return grid.contains(i, j) ? member[grid.index(i, j)] : 0.0;
  }
  double bond(Bond b, int i, int j) const;

  /// Total capacitance seen by floating gate (i, j): the sum of every
  /// capacitor touching it.
  double total(int i, int j) const;

  /// Copy with every floating-gate to floating-gate and floating-gate to
  /// neighbouring control-gate capacitor multiplied by `factor`.
  CapacitanceSet scale_intercell(double factor) const;
};

CapacitanceSet build_capacitances(const LatticeSpec& spec);

/// Reduced quantities from completing the squares of the charging energy in
/// raster order. The off-diagonal terms carry units of F^(1/2).
struct EffectiveNetwork {
  CapacitanceSet caps;
  std::vector<double> c_a;        // unprimed totals
  std::vector<double> c_a_red;    // C'_a
  std::vector<double> c_d_red;    // C'_D
  std::vector<double> c_l_red;    // C'_L
  std::vector<double> c_j_red;    // C'_J
  std::vector<double> c_k_red;    // C'_K

  const Grid& grid() const { return caps.grid; }
  double reduced_total(int i, int j) const {
    return grid().contains(i, j) ? c_a_red[grid().index(i, j)] : 0.0;
  }
};

EffectiveNetwork reduce_network(const CapacitanceSet& caps);

struct GateOffsets {
  std::vector<double> q0;          // induced charge Q0_v, units of e
  std::vector<double> gate_charge; // n_G with n + Q0_v = n_G - 1/2
};

/// Induced charge per cell from the bias voltages, and the effective gate
/// charge relative to the base occupation. An explicit n_G in the spec takes
/// precedence; Q0_v is then the offset that reproduces it.
GateOffsets gate_offset(const LatticeSpec& spec, const CapacitanceSet& caps);
GateOffsets gate_offset(const CapacitanceSet& caps, std::span<const CellVoltages> voltages,
                        std::span<const int> base_occupation,
                        const std::optional<std::vector<double>>& explicit_gate_charge = std::nullopt);

/// Charge induced on each floating gate by the bias sources alone, units of e.
std::vector<double> induced_charge(const CapacitanceSet& caps, std::span<const CellVoltages> voltages);

/// Closed-form antiferromagnetic couplings in e^2/F, one per non-zero
/// inter-cell capacitor. Qubit index is the raster cell index.
IsingModel ising_couplings(const EffectiveNetwork& net);

/// Closed-form local fields in e^2/F.
std::vector<double> local_fields(const EffectiveNetwork& net, std::span<const double> gate_charge);

/// Single-electron energy scale U_h per cell, in eV.
std::vector<double> single_electron_scale(const CapacitanceSet& caps);

/// Full closed-form extraction: couplings and fields combined, in eV.
struct Extraction {
  EffectiveNetwork network;
  GateOffsets offsets;
  IsingModel model;               // eV
  std::vector<double> u_h_ev;
};

Extraction extract(const LatticeSpec& spec);

/// U_h of the centre cell of a 5x5 lattice with oxide lateral gaps, with the
/// diagonal gaps filled with oxide and left as air.
struct AirGapPoint {
  double length_nm = 0.0;  // L = W
  double height_nm = 0.0;
  double oxide_nm = 0.0;
  double u_h_oxide_ev = 0.0;
  double u_h_air_ev = 0.0;

  double increase() const { return u_h_air_ev / u_h_oxide_ev - 1.0; }
};

/// One point per (height, oxide thickness, length) combination, in that
/// nesting order.
std::vector<AirGapPoint> air_gap_sweep(const CellGeometry& base, std::span<const double> lengths_nm,
                                       std::span<const double> heights_nm, std::span<const double> oxides_nm);

// ---------------------------------------------------------------------------
// Brute-force electrostatics oracle

inline constexpr int max_oracle_cells = 25;
inline constexpr int max_walsh_cells = 16;

/// Minimises the total capacitor energy minus the work done by the bias
/// sources over every capacitor charge, one linear charge constraint per
/// floating gate. The stationarity system is factorised once and reused for
/// every occupation.
class ChargingEnergyOracle {
 public:
  /// `background` is a fixed extra charge per gate in units of e; the
  /// constraint on gate k reads (sum of its plate charges) = -(n_k + background_k).
  ChargingEnergyOracle(const CapacitanceSet& caps, std::span<const CellVoltages> voltages,
                       std::span<const double> background);
  ~ChargingEnergyOracle();
  ChargingEnergyOracle(ChargingEnergyOracle&&) noexcept;
  ChargingEnergyOracle& operator=(ChargingEnergyOracle&&) noexcept;

  /// Minimum energy in e^2/F for the given electron count per cell.
  double energy(std::span<const double> occupation) const;

  int cells() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

double oracle_charging_energy(const LatticeSpec& spec, std::span<const int> occupation);

/// Walsh coefficients of the exact charging energy over all 2^cells
/// occupations n0 + {0, 1}: h_i = <U s_i>, J_ij = <U s_i s_j>. Units e^2/F.
IsingModel oracle_ising_extract(const LatticeSpec& spec);
IsingModel oracle_ising_extract(const CapacitanceSet& caps, std::span<const CellVoltages> voltages,
                                std::span<const double> background, std::span<const int> base_occupation);

}  // namespace fga::capnet
