#include "fga/annealer.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "fga/error.hpp"

namespace fga::anneal {

using kernels::cplx;
using kernels::Index;

Schedule Schedule::linear(double total_time, int steps) {
  Schedule s;
  s.total_time = total_time;
  s.steps = steps;
  return s;
}

Schedule Schedule::linear_dt(double total_time, double max_dt) {
  if (!(max_dt > 0.0)) throw Error(ErrorKind::schedule, "time step must be positive");
  const int steps = std::max(1, static_cast<int>(std::ceil(total_time / max_dt - 1e-9)));
  return linear(total_time, steps);
}

void Schedule::validate() const {
  if (!(total_time > 0.0) || !std::isfinite(total_time)) throw Error(ErrorKind::schedule, "anneal time must be positive");
  if (steps < 1) throw Error(ErrorKind::schedule, "anneal needs at least one step");
  if (!a || !b) throw Error(ErrorKind::schedule, "schedule functions are not set");
  constexpr double tol = 1e-12;
  if (std::abs(a(0.0) - 1.0) > tol || std::abs(b(0.0)) > tol || std::abs(a(1.0)) > tol ||
      std::abs(b(1.0) - 1.0) > tol) {
    throw Error(ErrorKind::schedule, "schedule must start at A=1, B=0 and end at A=0, B=1");
  }
  constexpr int probes = 1000;
  double prev_a = a(0.0);
  double prev_b = b(0.0);
  for (int k = 1; k <= probes; ++k) {
    const double s = static_cast<double>(k) / probes;
    const double av = a(s);
    const double bv = b(s);
    if (av < -tol || av > 1.0 + tol || bv < -tol || bv > 1.0 + tol) {
      throw Error(ErrorKind::schedule, "schedule leaves [0, 1] at s=" + std::to_string(s));
    }
    if (av > prev_a + tol || bv < prev_b - tol) {
      throw Error(ErrorKind::schedule, "schedule is not monotone at s=" + std::to_string(s));
    }
    prev_a = av;
    prev_b = bv;
  }
}

namespace {

struct Prepared {
  int n = 0;
  std::vector<double> diag;   // Ising energy per basis state
  std::vector<double> delta;  // transverse amplitude per qubit
};

Prepared prepare(const IsingModel& model, const QubitParams& qubits, int limit) {
  model.validate();
  const int n = model.size();
  if (n < 1) throw Error(ErrorKind::invalid_input, "model has no qubits");
  if (n > limit) {
    throw Error(ErrorKind::scale, "state vector limited to " + std::to_string(limit) + " qubits, model has " +
                                      std::to_string(n));
  }
  if (qubits.size() != n || static_cast<int>(qubits.field.size()) != n) {
    throw Error(ErrorKind::size_mismatch, "qubit parameters do not match the model");
  }
  IsingModel total = model;
  for (int q = 0; q < n; ++q) {
    if (!(qubits.delta[q] >= 0.0)) throw Error(ErrorKind::invalid_input, "Delta must be non-negative");
    total.set_field(q, model.field(q) + qubits.field[q]);
  }
  Prepared p;
  p.n = n;
  p.diag.resize(Index{1} << n);
  kernels::omp::energy_table(kernels::FlatIsing::from(total), p.diag);
  p.delta = qubits.delta;
  return p;
}

// Ground state of +sum Delta sigma_x: each qubit in (|0> - |1>)/sqrt(2).
std::vector<cplx> initial_state(int n) {
  const Index size = Index{1} << n;
  const double amp = 1.0 / std::sqrt(static_cast<double>(size));
  std::vector<cplx> psi(size);
  for (Index k = 0; k < size; ++k) psi[k] = (std::popcount(k) % 2 == 0) ? amp : -amp;
  return psi;
}

template <typename Kernels>
void strang_step(const Prepared& p, const Schedule& sched, int step, double dt, std::span<cplx> psi) {
  const double s = (step + 0.5) / sched.steps;
  const double a = sched.a(s);
  const double b = sched.b(s);
  Kernels::diagonal_phase(psi, p.diag, 0.5 * b * dt);
  for (int q = 0; q < p.n; ++q) {
    if (p.delta[q] != 0.0 && a != 0.0) Kernels::x_rotation(psi, q, a * p.delta[q] * dt);
  }
  Kernels::diagonal_phase(psi, p.diag, 0.5 * b * dt);
}

struct OmpKernels {
  static void diagonal_phase(std::span<cplx> psi, std::span<const double> d, double scale) {
    kernels::omp::diagonal_phase(psi, d, scale);
  }
  static void x_rotation(std::span<cplx> psi, int q, double angle) { kernels::omp::x_rotation(psi, q, angle); }
};

// Trajectories already run in parallel, so each one uses the serial kernels.
struct SerialKernels {
  static void diagonal_phase(std::span<cplx> psi, std::span<const double> d, double scale) {
    kernels::serial::diagonal_phase(psi, d, scale);
  }
  static void x_rotation(std::span<cplx> psi, int q, double angle) { kernels::serial::x_rotation(psi, q, angle); }
};

Index sample_index(std::span<const double> probabilities, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  double total = 0.0;
  for (double p : probabilities) total += p;
  const double target = uniform(rng) * total;
  double acc = 0.0;
  for (Index k = 0; k < probabilities.size(); ++k) {
    acc += probabilities[k];
    if (target < acc) return k;
  }
  return probabilities.size() - 1;
}

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

constexpr int trajectory_block = 64;

}  // namespace

AnnealResult evolve(const IsingModel& model, const QubitParams& qubits, const Schedule& schedule,
                    const EvolveOptions& options) {
  schedule.validate();
  if (options.shots < 0) throw Error(ErrorKind::invalid_input, "shot count must be non-negative");
  if (options.t2 && !(*options.t2 > 0.0)) throw Error(ErrorKind::invalid_input, "T2 must be positive");
  const Prepared p = prepare(model, qubits, max_state_qubits);
  const double dt = schedule.total_time / schedule.steps;
  const Index size = Index{1} << p.n;

  AnnealResult result;
  result.n = p.n;
  result.total_time = schedule.total_time;
  result.steps = schedule.steps;

  if (!options.t2) {
    auto psi = initial_state(p.n);
    for (int k = 0; k < schedule.steps; ++k) strang_step<OmpKernels>(p, schedule, k, dt, psi);
    result.norm_drift = std::abs(kernels::omp::norm_squared(psi) - 1.0);
    result.probabilities.resize(size);
    for (Index k = 0; k < size; ++k) result.probabilities[k] = std::norm(psi[k]);
    result.amplitudes = std::move(psi);
    auto rng = stream(options.seed, 0);
    for (int shot = 0; shot < options.shots; ++shot) result.histogram[sample_index(result.probabilities, rng)]++;
    result.shots = options.shots;
    return result;
  }

  const int trajectories = options.trajectories > 0 ? options.trajectories : options.shots;
  if (trajectories < 1) throw Error(ErrorKind::invalid_input, "dephased runs need at least one trajectory");
  const double flip_probability = -std::expm1(-dt / (2.0 * *options.t2));
  const int blocks = (trajectories + trajectory_block - 1) / trajectory_block;
  std::vector<std::vector<double>> block_probability(blocks, std::vector<double>(size, 0.0));
  std::vector<Index> outcome(trajectories);
  std::vector<double> drift(trajectories);

  // Each block of trajectories is summed in order by one thread, and blocks
  // are combined in order, so the result does not depend on the thread count.
#pragma omp parallel for schedule(dynamic, 1)
  for (int block = 0; block < blocks; ++block) {
    auto& acc = block_probability[block];
    const int end = std::min(trajectories, (block + 1) * trajectory_block);
    for (int t = block * trajectory_block; t < end; ++t) {
      auto rng = stream(options.seed, static_cast<std::uint64_t>(t) + 1);
      std::uniform_real_distribution<double> uniform(0.0, 1.0);
      auto psi = initial_state(p.n);
      for (int k = 0; k < schedule.steps; ++k) {
        strang_step<SerialKernels>(p, schedule, k, dt, psi);
        for (int q = 0; q < p.n; ++q) {
          if (uniform(rng) < flip_probability) kernels::serial::z_flip(psi, q);
        }
      }
      drift[t] = std::abs(kernels::serial::norm_squared(psi) - 1.0);
      std::vector<double> prob(size);
      for (Index k = 0; k < size; ++k) prob[k] = std::norm(psi[k]);
      outcome[t] = sample_index(prob, rng);
      for (Index k = 0; k < size; ++k) acc[k] += prob[k];
    }
  }

  result.probabilities.assign(size, 0.0);
  for (const auto& acc : block_probability) {
    for (Index k = 0; k < size; ++k) result.probabilities[k] += acc[k];
  }
  for (double& v : result.probabilities) v /= trajectories;
  for (Index o : outcome) result.histogram[o]++;
  result.shots = trajectories;
  result.norm_drift = *std::max_element(drift.begin(), drift.end());
  result.dephased = true;
  result.trajectories = trajectories;
  result.t2 = *options.t2;
  return result;
}

double success_probability(const AnnealResult& result, std::span<const Spins> targets, Source source) {
  if (targets.empty()) throw Error(ErrorKind::invalid_input, "target set is empty");
  std::vector<Index> indices;
  for (const auto& t : targets) {
    if (static_cast<int>(t.size()) != result.n) throw Error(ErrorKind::size_mismatch, "target has wrong length");
    indices.push_back(index_from_spins(t));
  }
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  double total = 0.0;
  if (source == Source::exact) {
    for (Index k : indices) total += result.probabilities.at(k);
    return std::clamp(total, 0.0, 1.0);
  }
  if (result.shots == 0) return 0.0;
  for (Index k : indices) {
    auto it = result.histogram.find(k);
    if (it != result.histogram.end()) total += it->second;
  }
  return total / result.shots;
}

GapResult spectral_gap(const IsingModel& model, const QubitParams& qubits, const Schedule& schedule, int points) {
  if (points < 2) throw Error(ErrorKind::invalid_input, "gap grid needs at least two points");
  if (!schedule.a || !schedule.b) throw Error(ErrorKind::schedule, "schedule functions are not set");
  const Prepared p = prepare(model, qubits, max_gap_qubits);
  const auto size = static_cast<Eigen::Index>(Index{1} << p.n);

  GapResult out;
  out.min_gap = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd h(size, size);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  for (int k = 0; k < points; ++k) {
    const double s = static_cast<double>(k) / (points - 1);
    const double a = schedule.a(s);
    const double b = schedule.b(s);
    h.setZero();
    for (Eigen::Index r = 0; r < size; ++r) {
      h(r, r) = b * p.diag[r];
      for (int q = 0; q < p.n; ++q) h(r, r ^ (Eigen::Index{1} << q)) += a * p.delta[q];
    }
    solver.compute(h, Eigen::EigenvaluesOnly);
    const auto& ev = solver.eigenvalues();
    const double gap = size > 1 ? ev[1] - ev[0] : 0.0;
    out.s.push_back(s);
    out.gaps.push_back(gap);
    if (gap < out.min_gap) {
      out.min_gap = gap;
      out.s_at_min = s;
    }
  }
  return out;
}

Spins simulated_annealing_baseline(const IsingModel& model, const SaSchedule& schedule, std::uint64_t seed) {
  model.validate();
  const int n = model.size();
  if (n < 1) throw Error(ErrorKind::invalid_input, "model has no spins");
  if (n > 10000) throw Error(ErrorKind::scale, "simulated annealing limited to 10^4 spins");
  if (schedule.sweeps < 1) throw Error(ErrorKind::invalid_input, "need at least one sweep");
  const auto flat = kernels::FlatIsing::from(model);

  double scale_max = 0.0;
  double scale_min = std::numeric_limits<double>::infinity();
  for (int q = 0; q < n; ++q) {
    double local = std::abs(flat.fields[q]);
    for (const auto& [r, w] : flat.adjacency[q]) local += std::abs(w);
    scale_max = std::max(scale_max, local);
    if (flat.fields[q] != 0.0) scale_min = std::min(scale_min, std::abs(flat.fields[q]));
    for (const auto& [r, w] : flat.adjacency[q]) scale_min = std::min(scale_min, std::abs(w));
  }
  if (scale_max == 0.0) scale_max = 1.0;
  if (!std::isfinite(scale_min)) scale_min = scale_max;
  const double t0 = schedule.t_start > 0.0 ? schedule.t_start : 2.0 * scale_max;
  const double t1 = schedule.t_end > 0.0 ? schedule.t_end : 0.05 * scale_min;
  if (!(t1 <= t0)) throw Error(ErrorKind::invalid_input, "final temperature exceeds the initial one");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  Spins s(n);
  for (int& v : s) v = uniform(rng) < 0.5 ? -1 : 1;
  double e = energy(model, s);
  Spins best = s;
  double best_e = e;

  const double ratio = schedule.sweeps > 1 ? std::pow(t1 / t0, 1.0 / (schedule.sweeps - 1)) : 1.0;
  double temperature = t0;
  for (int sweep = 0; sweep < schedule.sweeps; ++sweep) {
    for (int q = 0; q < n; ++q) {
      double local = flat.fields[q];
      for (const auto& [r, w] : flat.adjacency[q]) local += w * s[r];
      const double delta_e = -2.0 * s[q] * local;
      if (delta_e <= 0.0 || uniform(rng) < std::exp(-delta_e / temperature)) {
        s[q] = -s[q];
        e += delta_e;
        if (e < best_e) {
          best_e = e;
          best = s;
        }
      }
    }
    temperature *= ratio;
  }
  return best;
}

}  // namespace fga::anneal
