#include <doctest.h>

#include <omp.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <random>

#include "fga/annealer.hpp"
#include "fga/error.hpp"

using namespace fga;
using namespace fga::anneal;
using doctest::Approx;

namespace {

IsingModel random_model(int n, std::mt19937_64& rng, double bound = 1.0) {
  std::uniform_real_distribution<double> u(-bound, bound);
  IsingModel m(n);
  for (int i = 0; i < n; ++i) {
    m.set_field(i, u(rng));
    for (int j = i + 1; j < n; ++j) m.set_coupling(i, j, u(rng));
  }
  return m;
}

// Dense propagation: exact exponential of the midpoint Hamiltonian on a fine
// grid, built from the Pauli matrices directly.
std::vector<std::complex<double>> reference_evolution(const IsingModel& m, double delta, double total, int steps) {
  const int n = m.size();
  const int size = 1 << n;
  Eigen::MatrixXd hz = Eigen::MatrixXd::Zero(size, size), hx = Eigen::MatrixXd::Zero(size, size);
  for (int k = 0; k < size; ++k) {
    hz(k, k) = energy(m, spins_from_index(k, n));
    for (int q = 0; q < n; ++q) hx(k, k ^ (1 << q)) += delta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> start(hx);
  Eigen::VectorXcd psi = start.eigenvectors().col(0).cast<std::complex<double>>();
  // Fix the global phase to match (-1)^popcount / sqrt(2^n).
  psi *= std::polar(1.0, -std::arg(psi[0]));
  const double dt = total / steps;
  for (int k = 0; k < steps; ++k) {
    const double s = (k + 0.5) / steps;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es((1 - s) * hx + s * hz);
    Eigen::VectorXcd phase(size);
    for (int r = 0; r < size; ++r) phase[r] = std::polar(1.0, -es.eigenvalues()[r] * dt);
    const Eigen::MatrixXcd v = es.eigenvectors().cast<std::complex<double>>();
    psi = v * phase.asDiagonal() * (v.adjoint() * psi);
  }
  return {psi.data(), psi.data() + size};
}

double amplitude_error(const AnnealResult& r, const std::vector<std::complex<double>>& ref) {
  double d = 0.0;
  for (std::size_t k = 0; k < ref.size(); ++k) d = std::max(d, std::abs(r.amplitudes[k] - ref[k]));
  return d;
}

}  // namespace

TEST_CASE("initial state is the transverse ground state") {
  IsingModel m(3);
  const auto r = evolve(m, QubitParams::uniform(3, 1.0), Schedule::linear(1e-9, 1));
  for (std::size_t k = 0; k < 8; ++k) {
    const double sign = (std::popcount(k) % 2 == 0) ? 1.0 : -1.0;
    CHECK(std::abs(r.amplitudes[k] - std::complex<double>(sign / std::sqrt(8.0), 0.0)) < 1e-8);
  }
}

TEST_CASE("single qubit") {
  IsingModel m(1);
  const auto q = QubitParams::uniform(1, 1.0);
  SUBCASE("no field leaves an even split") {
    const auto r = evolve(m, q, Schedule::linear(5.0, 500));
    CHECK(r.probabilities[0] == Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("slow anneal follows the ground state") {
    m.set_field(0, 1.0);
    const auto r = evolve(m, q, Schedule::linear_dt(100.0, 0.05));
    CHECK(r.probabilities[0] > 0.99);
    CHECK(r.norm_drift < 1e-10);
    m.set_field(0, -1.0);
    CHECK(evolve(m, q, Schedule::linear_dt(100.0, 0.05)).probabilities[1] > 0.99);
  }
}

TEST_CASE("matches dense propagation, second order in the step") {
  std::mt19937_64 rng(2);
  const auto m = random_model(3, rng);
  const auto ref = reference_evolution(m, 1.0, 5.0, 20000);
  const auto q = QubitParams::uniform(3, 1.0);
  const double e1 = amplitude_error(evolve(m, q, Schedule::linear(5.0, 100)), ref);
  const double e2 = amplitude_error(evolve(m, q, Schedule::linear(5.0, 200)), ref);
  const double e4 = amplitude_error(evolve(m, q, Schedule::linear(5.0, 400)), ref);
  CHECK(e1 < 1e-2);
  CHECK(e1 / e2 > 3.5);
  CHECK(e2 / e4 > 3.5);
}

TEST_CASE("norm is preserved") {
  std::mt19937_64 rng(3);
  const auto m = random_model(8, rng);
  const auto r = evolve(m, QubitParams::uniform(8, 0.7), Schedule::linear_dt(50.0, 0.1));
  CHECK(r.norm_drift < 1e-10);
  double total = 0.0;
  for (double p : r.probabilities) total += p;
  CHECK(total == Approx(1.0).epsilon(1e-10));
}

TEST_CASE("zero fields keep the global flip symmetry") {
  std::mt19937_64 rng(4);
  auto m = random_model(4, rng);
  for (int i = 0; i < 4; ++i) m.set_field(i, 0.0);
  const auto r = evolve(m, QubitParams::uniform(4, 1.0), Schedule::linear(7.0, 700));
  for (std::size_t k = 0; k < 16; ++k) CHECK(r.probabilities[k] == Approx(r.probabilities[15 - k]).epsilon(1e-10));
}

TEST_CASE("shots follow the distribution and are seeded") {
  IsingModel m(1);
  m.set_field(0, 0.3);
  EvolveOptions opt;
  opt.shots = 20000;
  opt.seed = 9;
  const auto q = QubitParams::uniform(1, 1.0);
  const auto a = evolve(m, q, Schedule::linear(2.0, 200), opt);
  const auto b = evolve(m, q, Schedule::linear(2.0, 200), opt);
  CHECK(a.histogram == b.histogram);
  const std::vector<Spins> down{{-1}};
  CHECK(success_probability(a, down, Source::samples) == Approx(a.probabilities[0]).epsilon(0.03));
}

TEST_CASE("success probability") {
  IsingModel m(2);
  m.set_coupling(0, 1, 1.0);
  const auto r = evolve(m, QubitParams::uniform(2, 1.0), Schedule::linear(30.0, 3000));
  const std::vector<Spins> both{{-1, 1}, {1, -1}}, one{{-1, 1}}, dup{{-1, 1}, {-1, 1}};
  CHECK(success_probability(r, both) > 0.95);
  CHECK(success_probability(r, one) == Approx(r.probabilities[2]));
  CHECK(success_probability(r, dup) == Approx(r.probabilities[2]));
  CHECK_THROWS_AS(success_probability(r, std::vector<Spins>{}), Error);
  CHECK_THROWS_AS(success_probability(r, std::vector<Spins>{{1}}), Error);
}

TEST_CASE("spectral gap of one qubit") {
  // E1 - E0 = 2 sqrt((1-s)^2 D^2 + s^2 h^2), smallest at s = D^2 / (D^2 + h^2).
  IsingModel m(1);
  m.set_field(0, 0.5);
  const auto g = spectral_gap(m, QubitParams::uniform(1, 1.0), {}, 2001);
  const double s = 1.0 / 1.25;
  CHECK(g.min_gap == Approx(2 * std::sqrt((1 - s) * (1 - s) + s * s * 0.25)).epsilon(1e-6));
  CHECK(g.s_at_min == Approx(s).epsilon(1e-3));
  CHECK(g.gaps.front() == Approx(2.0));
  CHECK(g.gaps.back() == Approx(1.0));
  CHECK(g.s.size() == 2001);
}

TEST_CASE("spectral gap closes for a degenerate problem") {
  IsingModel m(2);
  m.set_coupling(0, 1, 1.0);
  const auto g = spectral_gap(m, QubitParams::uniform(2, 1.0), {}, 51);
  CHECK(g.min_gap < 1e-9);
  CHECK(g.s_at_min == Approx(1.0));
}

TEST_CASE("dephasing") {
  std::mt19937_64 rng(5);
  const auto m = random_model(2, rng);
  const auto q = QubitParams::uniform(2, 1.0);
  const auto sched = Schedule::linear(10.0, 500);
  EvolveOptions opt;
  opt.t2 = 1.0;
  opt.trajectories = 300;
  opt.shots = 300;
  opt.seed = 3;

  SUBCASE("independent of the thread count") {
    omp_set_num_threads(1);
    const auto a = evolve(m, q, sched, opt);
    omp_set_num_threads(3);
    const auto b = evolve(m, q, sched, opt);
    CHECK(a.probabilities == b.probabilities);
    CHECK(a.histogram == b.histogram);
    CHECK(a.dephased);
    CHECK(a.trajectories == 300);
  }
  SUBCASE("long T2 approaches closed evolution") {
    const auto closed = evolve(m, q, sched);
    opt.t2 = 1e9;
    const auto r = evolve(m, q, sched, opt);
    for (std::size_t k = 0; k < 4; ++k) CHECK(r.probabilities[k] == Approx(closed.probabilities[k]).epsilon(1e-9));
  }
  SUBCASE("short T2 scrambles the outcome") {
    opt.t2 = 1e-3;
    opt.trajectories = 2000;
    const auto r = evolve(m, q, sched, opt);
    for (double p : r.probabilities) CHECK(p == Approx(0.25).epsilon(0.1));
  }
  SUBCASE("bad T2") {
    opt.t2 = 0.0;
    CHECK_THROWS_AS(evolve(m, q, sched, opt), Error);
  }
}

TEST_CASE("schedule validation") {
  Schedule s = Schedule::linear(1.0, 10);
  CHECK_NOTHROW(s.validate());
  s.a = [](double x) { return 0.9 * (1 - x); };
  CHECK_THROWS_AS(s.validate(), Error);
  s = Schedule::linear(1.0, 10);
  s.b = [](double x) { return x < 0.5 ? 2 * x * x : 1.0 - 0.3 * std::sin(6.28 * x); };
  CHECK_THROWS_AS(s.validate(), Error);
  CHECK_THROWS_AS(Schedule::linear(0.0, 10).validate(), Error);
  CHECK_THROWS_AS(Schedule::linear_dt(1.0, 0.0), Error);
  const auto d = Schedule::linear_dt(10.0, 0.03);
  CHECK(d.total_time / d.steps <= 0.03);
  IsingModel m(1);
  CHECK_THROWS_AS(evolve(m, QubitParams::uniform(1, 1.0), Schedule::linear(-1.0, 10)), Error);
}

TEST_CASE("size limits") {
  IsingModel big(max_state_qubits + 1);
  try {
    evolve(big, QubitParams::uniform(big.size(), 1.0), Schedule::linear(1.0, 1));
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::scale);
  }
  IsingModel m(2);
  CHECK_THROWS_AS(evolve(m, QubitParams::uniform(3, 1.0), Schedule::linear(1.0, 1)), Error);
}

TEST_CASE("simulated annealing finds ground states") {
  std::mt19937_64 rng(77);
  const auto m = random_model(16, rng);
  const auto ground = ground_states_bruteforce(m);
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto s = simulated_annealing_baseline(m, {}, seed);
    if (std::abs(energy(m, s) - ground.energy) < 1e-9) ++hits;
  }
  CHECK(hits >= 95);
  CHECK(simulated_annealing_baseline(m, {}, 5) == simulated_annealing_baseline(m, {}, 5));
  CHECK_THROWS_AS(simulated_annealing_baseline(m, {0.1, 1.0, 10}, 1), Error);
}
