#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "fga/error.hpp"
#include "fga/ising.hpp"

using namespace fga;
using doctest::Approx;

TEST_CASE("energy of a few states") {
  IsingModel m(3);
  m.set_coupling(0, 1, 0.5);
  m.set_coupling(2, 1, -0.25);
  m.set_field(0, 0.1);
  m.set_field(2, -0.3);
  CHECK(m.coupling(1, 2) == -0.25);
  CHECK(energy(m, Spins{1, 1, 1}) == Approx(0.5 - 0.25 + 0.1 - 0.3));
  CHECK(energy(m, Spins{-1, 1, -1}) == Approx(-0.5 + 0.25 - 0.1 + 0.3));
  CHECK_THROWS_AS(energy(m, Spins{1, 1}), Error);
  CHECK_THROWS_AS(energy(m, Spins{1, 0, 1}), Error);
}

TEST_CASE("coupling map stays canonical") {
  IsingModel m(4);
  m.set_coupling(3, 1, 0.2);
  m.add_coupling(1, 3, 0.3);
  CHECK(m.couplings().size() == 1);
  CHECK(m.couplings().begin()->first == IsingModel::Key{1, 3});
  CHECK(m.coupling(3, 1) == Approx(0.5));
  m.set_coupling(1, 3, 0.0);
  CHECK(m.couplings().empty());
  CHECK_THROWS_AS(m.set_coupling(2, 2, 1.0), Error);
  CHECK_THROWS_AS(m.set_coupling(0, 4, 1.0), Error);
  CHECK(m.neighbours(1).empty());
}

TEST_CASE("index and spin vectors round-trip") {
  for (unsigned long long k = 0; k < 64; ++k) {
    const auto s = spins_from_index(k, 6);
    CHECK(index_from_spins(s) == k);
  }
  CHECK(spins_from_index(1, 3) == Spins{1, -1, -1});
}

TEST_CASE("energy is linear in the coefficients") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  IsingModel m(5);
  for (int i = 0; i < 5; ++i) {
    m.set_field(i, u(rng));
    for (int j = i + 1; j < 5; ++j) m.set_coupling(i, j, u(rng));
  }
  const auto twice = m.scaled(2.0, EnergyUnit::ev);
  CHECK(twice.unit() == EnergyUnit::ev);
  for (unsigned long long k = 0; k < 32; ++k) {
    const auto s = spins_from_index(k, 5);
    CHECK(energy(twice, s) == Approx(2 * energy(m, s)).epsilon(1e-12));
    // Flipping every spin negates only the field term.
    Spins f = s;
    for (int& x : f) x = -x;
    double field_part = 0.0;
    for (int i = 0; i < 5; ++i) field_part += m.field(i) * s[i];
    CHECK(energy(m, f) == Approx(energy(m, s) - 2 * field_part).epsilon(1e-12));
  }
}

TEST_CASE("brute force finds every degenerate ground state") {
  IsingModel pair(2);
  pair.set_coupling(0, 1, 1.0);
  const auto g = ground_states_bruteforce(pair);
  CHECK(g.energy == Approx(-1.0));
  REQUIRE(g.states.size() == 2);
  CHECK(g.states[0] == Spins{-1, 1});
  CHECK(g.states[1] == Spins{1, -1});

  IsingModel chain(5);
  for (int i = 0; i + 1 < 5; ++i) chain.set_coupling(i, i + 1, 1.0);
  const auto c = ground_states_bruteforce(chain);
  CHECK(c.energy == Approx(-4.0));
  CHECK(c.states.size() == 2);
  CHECK(c.states[0] == Spins{-1, 1, -1, 1, -1});

  IsingModel empty(3);
  CHECK(ground_states_bruteforce(empty).states.size() == 8);
}

TEST_CASE("brute force against direct enumeration") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> u(-2, 2);
  for (int t = 0; t < 20; ++t) {
    IsingModel m(7);
    for (int i = 0; i < 7; ++i) {
      m.set_field(i, 0.5 * u(rng));
      for (int j = i + 1; j < 7; ++j) m.set_coupling(i, j, 0.5 * u(rng));
    }
    double best = 1e300;
    for (unsigned long long k = 0; k < 128; ++k) best = std::min(best, energy(m, spins_from_index(k, 7)));
    std::vector<Spins> expect;
    for (unsigned long long k = 0; k < 128; ++k) {
      auto s = spins_from_index(k, 7);
      if (std::abs(energy(m, s) - best) < 1e-12) expect.push_back(s);
    }
    std::sort(expect.begin(), expect.end());
    const auto g = ground_states_bruteforce(m);
    CHECK(g.energy == Approx(best));
    CHECK(g.states == expect);
  }
}

TEST_CASE("brute force size limit") {
  IsingModel big(25);
  try {
    ground_states_bruteforce(big);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::scale);
  }
}

TEST_CASE("double-dot reduction preserves the spectrum") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int t = 0; t < 20; ++t) {
    const double tr = u(rng), ti = u(rng), ea = u(rng), eb = u(rng);
    Eigen::Matrix2cd h;
    h << ea, std::complex<double>(tr, ti), std::complex<double>(tr, -ti), eb;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(h);
    const auto q = cqd_qubit_params(tr, ti, ea, eb);
    const double split = std::sqrt(q.delta * q.delta + q.field * q.field);
    CHECK(es.eigenvalues()[0] == Approx(q.offset - split).epsilon(1e-12));
    CHECK(es.eigenvalues()[1] == Approx(q.offset + split).epsilon(1e-12));
  }
  const auto q = cqd_qubit_params(0.2, 1.0, 0.4);
  CHECK(q.delta == Approx(0.2));
  CHECK(q.field == Approx(0.3));
}

TEST_CASE("uniform qubit parameters") {
  const auto q = QubitParams::uniform(3, 0.7);
  CHECK(q.size() == 3);
  CHECK(q.delta[2] == 0.7);
  CHECK(q.field[1] == 0.0);
}
