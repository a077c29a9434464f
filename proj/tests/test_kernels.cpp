// OpenMP kernels against the serial reference.

#include <doctest.h>

#include <omp.h>

#include <cmath>
#include <random>

#include "fga/ising.hpp"
#include "fga/kernels.hpp"

using namespace fga;
using namespace fga::kernels;
using doctest::Approx;

namespace {

IsingModel random_model(int n, unsigned seed, bool integer = false) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> k(-1, 1);
  IsingModel m(n);
  for (int i = 0; i < n; ++i) {
    m.set_field(i, integer ? k(rng) : u(rng));
    for (int j = i + 1; j < n; ++j) m.set_coupling(i, j, integer ? k(rng) : u(rng));
  }
  return m;
}

std::vector<cplx> random_state(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<cplx> psi(std::size_t{1} << n);
  for (auto& a : psi) a = {g(rng), g(rng)};
  return psi;
}

double distance(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
  return d;
}

}  // namespace

TEST_CASE("energy kernels agree with the model") {
  const auto m = random_model(9, 1);
  const auto flat = FlatIsing::from(m);
  std::vector<double> s(512), p(512);
  serial::energy_table(flat, s);
  for (int threads : {1, 2, 4}) {
    omp_set_num_threads(threads);
    omp::energy_table(flat, p);
    for (Index k = 0; k < 512; ++k) {
      CHECK(p[k] == Approx(s[k]).epsilon(1e-13));
      CHECK(omp::state_energy(flat, k) == Approx(serial::state_energy(flat, k)).epsilon(1e-13));
    }
  }
  for (Index k = 0; k < 512; k += 37) {
    CHECK(s[k] == Approx(energy(m, spins_from_index(k, 9))).epsilon(1e-13));
  }
}

TEST_CASE("ground scan agrees, including degenerate minima") {
  for (unsigned seed = 0; seed < 10; ++seed) {
    const auto flat = FlatIsing::from(random_model(10, seed, seed % 2 == 0));
    const auto ref = serial::ground_scan(flat, 1e-9);
    for (int threads : {1, 3}) {
      omp_set_num_threads(threads);
      const auto par = omp::ground_scan(flat, 1e-9);
      CHECK(par.energy == Approx(ref.energy).epsilon(1e-13));
      CHECK(par.minimizers == ref.minimizers);
    }
  }
}

TEST_CASE("state-vector kernels agree") {
  for (int threads : {1, 2, 4}) {
    omp_set_num_threads(threads);
    auto a = random_state(10, 3), b = a;
    std::vector<double> diag(a.size());
    for (std::size_t k = 0; k < diag.size(); ++k) diag[k] = std::sin(0.37 * k);
    serial::diagonal_phase(a, diag, 0.3);
    omp::diagonal_phase(b, diag, 0.3);
    for (int q = 0; q < 10; ++q) {
      serial::x_rotation(a, q, 0.11 * (q + 1));
      omp::x_rotation(b, q, 0.11 * (q + 1));
    }
    serial::z_flip(a, 4);
    omp::z_flip(b, 4);
    CHECK(distance(a, b) < 1e-13);
    CHECK(omp::norm_squared(b) == Approx(serial::norm_squared(a)).epsilon(1e-13));
  }
}

TEST_CASE("unitary kernels preserve the norm") {
  auto psi = random_state(8, 9);
  const double n0 = serial::norm_squared(psi);
  std::vector<double> diag(psi.size(), 1.5);
  omp::diagonal_phase(psi, diag, 2.0);
  for (int q = 0; q < 8; ++q) omp::x_rotation(psi, q, 0.7);
  CHECK(omp::norm_squared(psi) == Approx(n0).epsilon(1e-13));
}

TEST_CASE("rotation by pi/2 maps a basis state onto its flipped partner") {
  std::vector<cplx> psi(4, 0.0);
  psi[0] = 1.0;
  omp::x_rotation(psi, 1, M_PI / 2);
  CHECK(std::abs(psi[2] - cplx(0, -1)) < 1e-15);
  CHECK(std::abs(psi[0]) < 1e-15);
  omp::z_flip(psi, 1);
  CHECK(std::abs(psi[2] - cplx(0, 1)) < 1e-15);
}
