#pragma once

// Data-parallel inner loops shared by the exact solvers and the state-vector
// annealer. `serial` is the reference implementation kept for testing and
// benchmarking; `omp` is what the library calls.

#include <complex>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace fga {
class IsingModel;
}

namespace fga::kernels {

using cplx = std::complex<double>;
using Index = std::uint64_t;

struct Edge {
  int a = 0;
  int b = 0;
  double weight = 0.0;
};

/// Flat view of an Ising model for tight loops.
struct FlatIsing {
  int n = 0;
  std::vector<double> fields;
  std::vector<Edge> edges;
  std::vector<std::vector<std::pair<int, double>>> adjacency;

  static FlatIsing from(const IsingModel& model);
};

struct GroundScan {
  double energy = 0.0;
  std::vector<Index> minimizers;  // ascending basis index
};

namespace serial {

double state_energy(const FlatIsing& model, Index state);
void energy_table(const FlatIsing& model, std::span<double> out);
/// All basis states within `tolerance` of the minimum energy.
GroundScan ground_scan(const FlatIsing& model, double tolerance);

/// psi[k] *= exp(-i * scale * diag[k])
void diagonal_phase(std::span<cplx> psi, std::span<const double> diag, double scale);
/// psi <- exp(-i * angle * sigma_x(qubit)) psi
void x_rotation(std::span<cplx> psi, int qubit, double angle);
/// psi <- sigma_z(qubit) psi
void z_flip(std::span<cplx> psi, int qubit);
double norm_squared(std::span<const cplx> psi);

}  // namespace serial

namespace omp {

double state_energy(const FlatIsing& model, Index state);
void energy_table(const FlatIsing& model, std::span<double> out);
GroundScan ground_scan(const FlatIsing& model, double tolerance);

void diagonal_phase(std::span<cplx> psi, std::span<const double> diag, double scale);
void x_rotation(std::span<cplx> psi, int qubit, double angle);
void z_flip(std::span<cplx> psi, int qubit);
double norm_squared(std::span<const cplx> psi);

}  // namespace omp

/// Applies FGA_THREADS (if set) to the OpenMP runtime. Returns the thread cap
/// in effect.
int configure_threads_from_env();

}  // namespace fga::kernels
