#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "fga/ising.hpp"
#include "fga/kernels.hpp"

namespace fga::anneal {

inline constexpr int max_state_qubits = 14;
inline constexpr int max_gap_qubits = 12;
inline constexpr int default_shots = 1024;
inline constexpr int default_gap_points = 201;
inline constexpr double default_t2_seconds = 4.8e-7;

/// H(s) = A(s) sum_i Delta_i sigma_x,i + B(s) H_Ising, s = t / T.
/// Time is in units of hbar / (model energy unit).
struct Schedule {
  double total_time = 10.0;
  int steps = 1000;
  std::function<double(double)> a = [](double s) { return 1.0 - s; };
  std::function<double(double)> b = [](double s) { return s; };

  static Schedule linear(double total_time, int steps);
  /// Linear schedule with the step count chosen so dt <= max_dt.
  static Schedule linear_dt(double total_time, double max_dt);

  /// Throws Error(schedule) unless A(0)=1, B(0)=0, A(1)=0, B(1)=1, both stay
  /// in [0, 1], A is non-increasing and B non-decreasing.
  void validate() const;
};

struct EvolveOptions {
  /// Dephasing time in internal units; unset for closed evolution.
  std::optional<double> t2;
  int shots = default_shots;
  /// Trajectories when dephasing; 0 means one per shot.
  int trajectories = 0;
  std::uint64_t seed = 1;
};

struct AnnealResult {
  int n = 0;
  /// Final amplitudes; closed evolution only.
  std::vector<kernels::cplx> amplitudes;
  /// Outcome distribution over basis states (bit q = 1 is spin +1). Exact for
  /// closed evolution, trajectory-averaged with dephasing.
  std::vector<double> probabilities;
  /// Measured basis state -> count.
  std::map<std::uint64_t, int> histogram;
  int shots = 0;
  double norm_drift = 0.0;
  double total_time = 0.0;
  int steps = 0;
  bool dephased = false;
  int trajectories = 0;
  double t2 = 0.0;
};

/// Exact state-vector anneal by symmetric splitting of the diagonal and
/// transverse parts. With a T2, independent trajectories receive Poissonian
/// sigma_z flips at rate 1/(2 T2) per qubit, which gives coherences the decay
/// exp(-t / T2); each trajectory contributes one measurement shot.
AnnealResult evolve(const IsingModel& model, const QubitParams& qubits, const Schedule& schedule,
                    const EvolveOptions& options = {});

enum class Source { exact, samples };

/// Probability of the target spin vectors, from the outcome distribution or
/// from the sampled histogram.
double success_probability(const AnnealResult& result, std::span<const Spins> targets,
                           Source source = Source::exact);

struct GapResult {
  double min_gap = 0.0;
  double s_at_min = 0.0;
  std::vector<double> s;
  std::vector<double> gaps;
};

/// E1 - E0 of the instantaneous Hamiltonian on `points` evenly spaced s values.
GapResult spectral_gap(const IsingModel& model, const QubitParams& qubits, const Schedule& schedule = {},
                       int points = default_gap_points);

struct SaSchedule {
  /// Zero temperatures are chosen from the coefficient scale.
  double t_start = 0.0;
  double t_end = 0.0;
  int sweeps = 1000;
};

/// Single-spin-flip Metropolis with geometric cooling from a random start;
/// returns the lowest-energy state visited.
Spins simulated_annealing_baseline(const IsingModel& model, const SaSchedule& schedule, std::uint64_t seed);

}  // namespace fga::anneal
