// Serial reference kernels against their OpenMP versions.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "fga/ising.hpp"
#include "fga/kernels.hpp"

namespace {

using fga::kernels::cplx;

fga::IsingModel random_model(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  fga::IsingModel m(n);
  for (int i = 0; i < n; ++i) {
    m.set_field(i, u(rng));
    for (int j = i + 1; j < n; ++j) m.set_coupling(i, j, u(rng));
  }
  return m;
}

std::vector<cplx> random_state(int n) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  std::vector<cplx> psi(std::size_t{1} << n);
  for (auto& a : psi) a = {g(rng), g(rng)};
  return psi;
}

template <bool Parallel>
void BM_GroundScan(benchmark::State& state) {
  const auto flat = fga::kernels::FlatIsing::from(random_model(static_cast<int>(state.range(0)), 1));
  for (auto _ : state) {
    auto scan = Parallel ? fga::kernels::omp::ground_scan(flat, 1e-9) : fga::kernels::serial::ground_scan(flat, 1e-9);
    benchmark::DoNotOptimize(scan.energy);
  }
}

template <bool Parallel>
void BM_EnergyTable(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto flat = fga::kernels::FlatIsing::from(random_model(n, 2));
  std::vector<double> table(std::size_t{1} << n);
  for (auto _ : state) {
    if (Parallel) {
      fga::kernels::omp::energy_table(flat, table);
    } else {
      fga::kernels::serial::energy_table(flat, table);
    }
    benchmark::DoNotOptimize(table.data());
  }
}

template <bool Parallel>
void BM_SplitStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto psi = random_state(n);
  std::vector<double> diag(psi.size());
  for (std::size_t k = 0; k < diag.size(); ++k) diag[k] = static_cast<double>(k % 17) - 8.0;
  for (auto _ : state) {
    if (Parallel) {
      fga::kernels::omp::diagonal_phase(psi, diag, 0.01);
      for (int q = 0; q < n; ++q) fga::kernels::omp::x_rotation(psi, q, 0.02);
      fga::kernels::omp::diagonal_phase(psi, diag, 0.01);
    } else {
      fga::kernels::serial::diagonal_phase(psi, diag, 0.01);
      for (int q = 0; q < n; ++q) fga::kernels::serial::x_rotation(psi, q, 0.02);
      fga::kernels::serial::diagonal_phase(psi, diag, 0.01);
    }
    benchmark::DoNotOptimize(psi.data());
  }
}

template <bool Parallel>
void BM_Norm(benchmark::State& state) {
  const auto psi = random_state(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    const double v = Parallel ? fga::kernels::omp::norm_squared(psi) : fga::kernels::serial::norm_squared(psi);
    benchmark::DoNotOptimize(v);
  }
}

}  // namespace

BENCHMARK(BM_GroundScan<false>)->Name("ground_scan/serial")->Arg(16)->Arg(20);
BENCHMARK(BM_GroundScan<true>)->Name("ground_scan/omp")->Arg(16)->Arg(20);
BENCHMARK(BM_EnergyTable<false>)->Name("energy_table/serial")->Arg(14)->Arg(18);
BENCHMARK(BM_EnergyTable<true>)->Name("energy_table/omp")->Arg(14)->Arg(18);
BENCHMARK(BM_SplitStep<false>)->Name("split_step/serial")->Arg(10)->Arg(14);
BENCHMARK(BM_SplitStep<true>)->Name("split_step/omp")->Arg(10)->Arg(14);
BENCHMARK(BM_Norm<false>)->Name("norm/serial")->Arg(14)->Arg(20);
BENCHMARK(BM_Norm<true>)->Name("norm/omp")->Arg(14)->Arg(20);

BENCHMARK_MAIN();
