#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "fga/embedder.hpp"
#include "fga/error.hpp"

using namespace fga;
using namespace fga::embed;
using doctest::Approx;

namespace {

IsingModel random_problem(int n, std::mt19937_64& rng, double bound = 0.3) {
  std::uniform_real_distribution<double> u(-bound, bound);
  IsingModel m(n);
  for (int i = 0; i < n; ++i) {
    m.set_field(i, u(rng));
    for (int j = i + 1; j < n; ++j) m.set_coupling(i, j, u(rng));
  }
  return m;
}

Embedding embed_auto(const IsingModel& m, double margin = 0.25) {
  return embed_complete_graph(m, required_lattice(m), margin);
}

}  // namespace

TEST_CASE("chain strength") {
  IsingModel m(3);
  m.set_field(0, 0.1);
  m.set_coupling(0, 1, 0.3);
  m.set_coupling(0, 2, -0.2);
  const auto s = chain_strengths(m, 0.25);
  CHECK(s[0] == Approx(1.25 * 0.6));
  CHECK(s[1] == Approx(1.25 * 0.3));
  CHECK(s[2] == Approx(1.25 * 0.2));
  CHECK_THROWS_AS(chain_strengths(m, 0.0), Error);

  IsingModel k(3);
  k.set_field(0, 0.5);
  k.set_coupling(0, 1, 0.3);
  k.set_coupling(0, 2, -0.2);
  CHECK(chain_strengths(k, 0.1)[0] == Approx(1.1));
}

TEST_CASE("isolated spin has a degenerate chain") {
  IsingModel m(2);
  m.set_field(1, 0.2);
  const auto emb = embed_auto(m);
  CHECK(emb.chain_strengths[0] == 0.0);
  const auto r = verify_embedding(emb, m, compile_physical(emb, m).physical);
  CHECK(r.degenerate_chains == std::vector<int>{0});
}

TEST_CASE("one spin") {
  IsingModel m(1);
  m.set_field(0, -0.2);
  const auto emb = embed_auto(m);
  CHECK(emb.physical_size() == 1);
  CHECK(emb.chains[0] == std::vector<int>{0});
  const auto c = compile_physical(emb, m);
  CHECK(c.physical.field(0) == Approx(-0.2));
  CHECK(verify_embedding(emb, m, c.physical).ok());
}

TEST_CASE("antiferromagnetic pair shares a row, ferromagnetic pair needs two") {
  IsingModel af(2);
  af.set_coupling(0, 1, 0.2);
  CHECK(required_lattice(af).rows == 1);
  const auto a = embed_auto(af);
  CHECK(a.physical_size() == 2);
  const auto ca = compile_physical(a, af);
  CHECK(ca.physical.coupling(0, 1) == Approx(0.2));

  IsingModel fm(2);
  fm.set_coupling(0, 1, -0.2);
  CHECK(required_lattice(fm).rows == 2);
  const auto f = embed_auto(fm);
  const auto cf = compile_physical(f, fm);
  // Every physical coupling is antiferromagnetic.
  for (const auto& [key, j] : cf.physical.couplings()) CHECK(j > 0.0);
  CHECK(verify_embedding(f, fm, cf.physical).ok());
}

TEST_CASE("complete graph structure") {
  std::mt19937_64 rng(4);
  for (int n = 1; n <= 6; ++n) {
    const auto m = random_problem(n, rng);
    const auto emb = embed_auto(m);
    CHECK(emb.grid.cols == n);
    CHECK(emb.rows_used() <= n + 1);
    std::set<int> cells;
    for (int a = 0; a < n; ++a) {
      CHECK(static_cast<int>(emb.chains[a].size()) == emb.rows_used());
      for (std::size_t k = 0; k < emb.chains[a].size(); ++k) {
        const int cell = emb.chains[a][k];
        cells.insert(cell);
        CHECK(emb.signs[cell] == (k % 2 == 0 ? 1 : -1));
      }
    }
    CHECK(static_cast<int>(cells.size()) == emb.physical_size());
    // Compact qubit numbering follows raster order.
    for (int q = 1; q < emb.physical_size(); ++q) CHECK(emb.physical_cells[q] > emb.physical_cells[q - 1]);
    int tunable = 0;
    for (const auto& b : emb.bonds) tunable += b.type == BondType::tunable;
    CHECK(tunable == static_cast<int>(m.couplings().size()));
    const auto c = compile_physical(emb, m);
    CHECK(c.layout.gaps.size() == emb.bonds.size());
    CHECK(verify_embedding(emb, m, c.physical).ok());
  }
}

TEST_CASE("layout directives map onto gap materials") {
  std::mt19937_64 rng(8);
  const auto m = random_problem(3, rng);
  const auto emb = embed_auto(m);
  const auto c = compile_physical(emb, m);
  const auto map = c.layout.gap_map();
  for (std::size_t k = 0; k < emb.bonds.size(); ++k) {
    const auto& b = emb.bonds[k];
    CHECK(c.layout.gaps[k].first == b.gap);
    CHECK(map.at(b.gap) == (b.type == BondType::absent ? GapMaterial::air : GapMaterial::oxide));
  }
}

TEST_CASE("encoding shifts energies by a constant") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 10; ++t) {
    const auto m = random_problem(4, rng);
    const auto emb = embed_auto(m);
    const auto c = compile_physical(emb, m);
    double offset = 0.0;
    for (unsigned long long k = 0; k < 16; ++k) {
      const auto s = spins_from_index(k, 4);
      const double d = energy(c.physical, encode(emb, s)) - energy(m, s);
      if (k == 0) offset = d;
      CHECK(d == Approx(offset).epsilon(1e-12));
    }
  }
}

TEST_CASE("encode and decode round-trip") {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> coin(0, 1);
  for (int t = 0; t < 100; ++t) {
    const int n = 1 + t % 5;
    const auto m = random_problem(n, rng);
    const auto emb = embed_auto(m);
    Spins s(n);
    for (int& x : s) x = coin(rng) ? 1 : -1;
    const auto d = decode(emb, encode(emb, s));
    CHECK(d.logical == s);
    for (bool ok : d.intact) CHECK(ok);
  }
}

TEST_CASE("majority vote and ties") {
  IsingModel m(2);
  m.set_coupling(0, 1, -0.1);
  const auto emb = embed_auto(m);  // two rows
  REQUIRE(emb.chains[0].size() == 2);
  auto phys = encode(emb, Spins{-1, 1});
  // Break chain 0 into one up and one down vote.
  phys[emb.cell_qubit[emb.chains[0][0]]] *= -1;
  const auto d = decode(emb, phys);
  CHECK(d.logical[0] == 1);
  CHECK_FALSE(d.intact[0]);
  CHECK(d.intact[1]);
  CHECK_THROWS_AS(decode(emb, Spins{1}), Error);
}

TEST_CASE("verification catches weak chains") {
  std::mt19937_64 rng(30);
  const auto m = random_problem(3, rng);
  auto emb = embed_auto(m);
  auto c = compile_physical(emb, m);
  REQUIRE(verify_embedding(emb, m, c.physical).ok());

  auto weak = emb;
  double bound = std::abs(m.field(0));
  for (int b = 1; b < 3; ++b) bound += std::abs(m.coupling(0, b));
  weak.chain_strengths[0] = bound;  // equality is not enough
  const auto cw = compile_physical(weak, m);
  CHECK_FALSE(verify_embedding(weak, m, cw.physical).ok());
  weak.chain_strengths[0] = 0.5 * bound;
  CHECK_FALSE(verify_embedding(weak, m, compile_physical(weak, m).physical).ok());
}

TEST_CASE("verification catches a tampered physical model") {
  std::mt19937_64 rng(31);
  const auto m = random_problem(3, rng);
  const auto emb = embed_auto(m);
  auto phys = compile_physical(emb, m).physical;
  const auto key = phys.couplings().begin()->first;
  phys.set_coupling(key.first, key.second, -1.0);
  CHECK_FALSE(verify_embedding(emb, m, phys).ok());
}

TEST_CASE("ground states decode onto the logical ground set") {
  std::mt19937_64 rng(40);
  for (int t = 0; t < 20; ++t) {
    const auto m = random_problem(3 + t % 2, rng);
    const auto emb = embed_auto(m);
    const auto c = compile_physical(emb, m);
    const auto r = verify_embedding(emb, m, c.physical);
    CHECK(r.ok());
    CHECK(r.ground_states_checked);
    CHECK(r.decoded_ground_set_matches);
  }
}

TEST_CASE("errors") {
  std::mt19937_64 rng(50);
  const auto m = random_problem(4, rng);
  try {
    embed_complete_graph(m, Grid{2, 4});
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::capacity);
  }
  auto emb = embed_auto(m);
  for (auto& b : emb.bonds) {
    if (b.type == BondType::tunable) {
      b.type = BondType::absent;
      break;
    }
  }
  try {
    compile_physical(emb, m);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::embedding_incomplete);
  }
}
