#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fga/capnet.hpp"
#include "fga/error.hpp"
#include "fga/units.hpp"

using namespace fga;
using doctest::Approx;

namespace {

constexpr double eps0 = units::vacuum_permittivity;

LatticeSpec lattice(int rows, int cols, GapMaterial diagonal = GapMaterial::oxide) {
  return LatticeSpec::uniform(rows, cols, CellGeometry{}, GapMaterial::oxide, diagonal);
}

}  // namespace

TEST_CASE("capacitor values for the default cell") {
  const auto caps = capnet::build_capacitances(lattice(2, 2));
  // 15 x 15 nm footprint, 8 nm tunnel oxide, 10 nm tall gate.
  const double cb = 3.9 * eps0 * 225e-18 / 8e-9;
  CHECK(caps.B[0] == Approx(cb).epsilon(1e-12));
  CHECK(caps.B[0] == Approx(9.71e-19).epsilon(1e-3));
  CHECK(caps.D[0] == Approx(3.9 * eps0 * 10e-9).epsilon(1e-12));
  CHECK(caps.D[0] == Approx(3.45e-19).epsilon(2e-3));
  CHECK(caps.L[0] == Approx(caps.D[0]));
  CHECK(caps.J[0] == Approx(caps.D[0] / std::numbers::sqrt2));
  CHECK(caps.K[0] == Approx(caps.J[0]));
  // Boundary: nothing leaves the lattice.
  CHECK(caps.D[1] == 0.0);
  CHECK(caps.L[2] == 0.0);
  CHECK(caps.J[3] == 0.0);
  CHECK(caps.K[1] == 0.0);

  const auto air = capnet::build_capacitances(lattice(2, 2, GapMaterial::air));
  CHECK(air.J[0] == Approx(eps0 * 10e-9 / std::numbers::sqrt2).epsilon(1e-12));
  CHECK(air.J[0] == Approx(6.26e-20).epsilon(2e-3));
  CHECK(air.D[0] == Approx(caps.D[0]));
}

TEST_CASE("coupling ratio identity") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> cr(0.05, 0.95), d(1e-9, 20e-9);
  for (int t = 0; t < 50; ++t) {
    CellGeometry g;
    g.coupling_ratio = cr(rng);
    g.oxide_thickness = d(rng);
    const auto caps = capnet::build_capacitances(LatticeSpec::uniform(1, 1, g));
    CHECK(caps.A[0] / (caps.A[0] + caps.B[0]) == Approx(g.coupling_ratio).epsilon(1e-14));
  }
}

TEST_CASE("total capacitance counts every capacitor touching the gate") {
  auto spec = lattice(3, 3);
  spec.c_cross_gate = 1e-20;
  spec.geometry.c_source = 2e-20;
  spec.geometry.c_drain = 3e-20;
  const auto caps = capnet::build_capacitances(spec);
  // Centre cell of 3x3: 4 lateral, 4 diagonal, 4 cross-gate, plus A, B, H, I.
  const int c = 4;
  const double expect = caps.A[c] + caps.B[c] + 2e-20 + 3e-20 + 4 * caps.D[c] + 4 * caps.J[c] + 4 * 1e-20;
  CHECK(caps.total(1, 1) == Approx(expect).epsilon(1e-13));
  // Corner cell: 2 lateral, 1 diagonal, 2 cross-gate.
  CHECK(caps.total(0, 0) == Approx(caps.A[0] + caps.B[0] + 5e-20 + 2 * caps.D[0] + caps.J[0] + 2e-20).epsilon(1e-13));
}

TEST_CASE("invalid geometry is rejected") {
  auto spec = lattice(1, 1);
  spec.geometry.coupling_ratio = 1.0;
  CHECK_THROWS_AS(capnet::build_capacitances(spec), Error);
  spec = lattice(1, 1);
  spec.geometry.height = -1e-9;
  try {
    capnet::build_capacitances(spec);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::invalid_geometry);
  }
}

TEST_CASE("isolated cell") {
  auto spec = lattice(1, 1);
  spec.gate_charge = std::vector<double>{0.1};
  const auto ex = capnet::extract(spec);
  const double ca = ex.network.caps.total(0, 0);
  CHECK(ex.network.c_a_red[0] == ca);
  CHECK(ex.model.couplings().empty());
  CHECK(ex.model.field(0) == Approx(0.1 / (2 * ca) * units::elementary_charge).epsilon(1e-13));
  CHECK(ex.u_h_ev[0] == Approx(units::elementary_charge / (8 * ca)).epsilon(1e-13));
  CHECK(ex.u_h_ev[0] == Approx(0.01443).epsilon(2e-3));
}

TEST_CASE("two cells reduce to the inverse Maxwell matrix") {
  auto spec = lattice(1, 2);
  const auto caps = capnet::build_capacitances(spec);
  const auto net = capnet::reduce_network(caps);
  const double c0 = caps.total(0, 0), c1 = caps.total(0, 1), d = caps.D[0];
  CHECK(net.c_a_red[0] == Approx(c0));
  CHECK(net.c_a_red[1] == Approx(c1 - d * d / c0).epsilon(1e-14));
  // Off-diagonal element of the inverse capacitance matrix over four.
  const auto m = capnet::ising_couplings(net);
  CHECK(m.coupling(0, 1) == Approx(d / (4 * (c0 * c1 - d * d))).epsilon(1e-13));
}

TEST_CASE("2x2 reduction against a hand-written recursion") {
  auto spec = lattice(2, 2, GapMaterial::air);
  spec.cell_geometry.resize(4);
  CellGeometry tall;
  tall.height = 14e-9;
  spec.cell_geometry[1] = tall;
  spec.cell_geometry[2] = tall;
  const auto caps = capnet::build_capacitances(spec);
  const auto net = capnet::reduce_network(caps);

  const double c0 = caps.total(0, 0), c1 = caps.total(0, 1), c2 = caps.total(1, 0), c3 = caps.total(1, 1);
  const double a0 = c0;
  const double d0 = caps.D[0] / std::sqrt(a0), l0 = caps.L[0] / std::sqrt(a0), j0 = caps.J[0] / std::sqrt(a0);
  const double a1 = c1 - d0 * d0;
  const double l1 = (caps.L[1] + d0 * j0) / std::sqrt(a1);
  const double k0 = (caps.K[0] + d0 * l0) / std::sqrt(a1);
  const double a2 = c2 - l0 * l0 - k0 * k0;
  const double d2 = (caps.D[2] + l0 * j0 + l1 * k0) / std::sqrt(a2);
  const double a3 = c3 - j0 * j0 - l1 * l1 - d2 * d2;

  CHECK(net.c_a_red[0] == Approx(a0).epsilon(1e-14));
  CHECK(net.c_a_red[1] == Approx(a1).epsilon(1e-14));
  CHECK(net.c_a_red[2] == Approx(a2).epsilon(1e-14));
  CHECK(net.c_a_red[3] == Approx(a3).epsilon(1e-14));
  CHECK(net.c_k_red[0] == Approx(k0).epsilon(1e-14));
  CHECK(net.c_d_red[2] == Approx(d2).epsilon(1e-14));

  const auto m = capnet::ising_couplings(net);
  CHECK(m.coupling(0, 3) == Approx(caps.J[0] / (4 * a0 * a3)).epsilon(1e-13));
  CHECK(m.coupling(1, 2) == Approx(caps.K[0] / (4 * a1 * a2)).epsilon(1e-13));
  CHECK(m.coupling(0, 1) == Approx(caps.D[0] / (4 * a0 * a1)).epsilon(1e-13));
}

TEST_CASE("closed-form couplings are positive and reduced totals stay positive") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> len(5e-9, 30e-9), z(2e-9, 100e-9), ox(2e-9, 10e-9);
  for (int t = 0; t < 30; ++t) {
    CellGeometry g;
    g.length = len(rng);
    g.width = len(rng);
    g.height = z(rng);
    g.oxide_thickness = ox(rng);
    const auto spec = LatticeSpec::uniform(4, 5, g, GapMaterial::oxide, t % 2 ? GapMaterial::air : GapMaterial::oxide);
    const auto net = capnet::reduce_network(capnet::build_capacitances(spec));
    for (double c : net.c_a_red) CHECK(c > 0.0);
    const auto model = capnet::ising_couplings(net);
    for (const auto& [key, value] : model.couplings()) CHECK(value > 0.0);
  }
}

TEST_CASE("fields vanish at zero gate charge") {
  auto spec = lattice(3, 4, GapMaterial::air);
  spec.gate_charge = std::vector<double>(12, 0.0);
  const auto ex = capnet::extract(spec);
  for (double h : ex.model.fields()) CHECK(h == 0.0);
}

TEST_CASE("zero bias puts every cell half an electron away from degeneracy") {
  const auto spec = lattice(2, 2);
  const auto caps = capnet::build_capacitances(spec);
  const auto off = capnet::gate_offset(spec, caps);
  for (int k = 0; k < 4; ++k) {
    CHECK(off.q0[k] == 0.0);
    CHECK(off.gate_charge[k] == 0.5);
  }
}

TEST_CASE("control-gate bias induces C_A V / e") {
  auto spec = lattice(1, 1);
  spec.voltages[0].control_gate = 0.1;
  const auto caps = capnet::build_capacitances(spec);
  const auto off = capnet::gate_offset(spec, caps);
  CHECK(off.q0[0] == Approx(caps.A[0] * 0.1 / units::elementary_charge).epsilon(1e-13));
  CHECK(off.gate_charge[0] == Approx(off.q0[0] + 0.5));
}

TEST_CASE("explicit gate charge fixes the offset") {
  auto spec = lattice(1, 2);
  spec.base_occupation = {2, 0};
  spec.gate_charge = std::vector<double>{0.2, -0.1};
  const auto off = capnet::gate_offset(spec, capnet::build_capacitances(spec));
  CHECK(off.q0[0] == Approx(0.2 - 0.5 - 2));
  CHECK(off.q0[1] == Approx(-0.1 - 0.5));
  spec.gate_charge = std::vector<double>{0.5, 0.0};
  CHECK_THROWS_AS(capnet::extract(spec), Error);
}

TEST_CASE("interior cell parameters do not see a lattice grown by a ring") {
  // Centre cell of 5x5 vs the same cell shifted into a 7x7 lattice.
  const auto small = capnet::build_capacitances(lattice(5, 5, GapMaterial::air));
  const auto big = capnet::build_capacitances(lattice(7, 7, GapMaterial::air));
  for (auto member : {&capnet::CapacitanceSet::A, &capnet::CapacitanceSet::D, &capnet::CapacitanceSet::J}) {
    CHECK((small.*member)[small.grid.index(2, 2)] == (big.*member)[big.grid.index(3, 3)]);
  }
  CHECK(small.total(2, 2) == big.total(3, 3));
  CHECK(capnet::single_electron_scale(small)[small.grid.index(2, 2)] ==
        capnet::single_electron_scale(big)[big.grid.index(3, 3)]);
}

TEST_CASE("reduced quantities of an interior cell drift only slightly with a grown lattice") {
  // The raster-order reduction carries information from every earlier cell,
  // so primed quantities are not strictly local; at the default geometry the
  // effect of an extra ring stays well below a percent.
  auto make = [](int n) {
    auto s = LatticeSpec::uniform(n, n, CellGeometry{});
    s.gate_charge = std::vector<double>(n * n, 0.2);
    return capnet::extract(s);
  };
  const auto a = make(5), b = make(7);
  const int ka = a.network.grid().index(2, 2), kb = b.network.grid().index(3, 3);
  CHECK(a.network.c_a_red[ka] == Approx(b.network.c_a_red[kb]).epsilon(1e-3));
  CHECK(a.model.coupling(ka, ka + 1) == Approx(b.model.coupling(kb, kb + 1)).epsilon(5e-3));
  CHECK(a.model.field(ka) == Approx(b.model.field(kb)).epsilon(5e-3));
}

TEST_CASE("air diagonals raise U_h") {
  for (double z : {10e-9, 100e-9}) {
    for (double l = 5e-9; l <= 30.01e-9; l += 1e-9) {
      CellGeometry g;
      g.length = g.width = l;
      g.height = z;
      const auto ox = capnet::single_electron_scale(
          capnet::build_capacitances(LatticeSpec::uniform(3, 3, g, GapMaterial::oxide, GapMaterial::oxide)));
      const auto air = capnet::single_electron_scale(
          capnet::build_capacitances(LatticeSpec::uniform(3, 3, g, GapMaterial::oxide, GapMaterial::air)));
      CHECK(air[4] > ox[4]);
    }
  }
}

TEST_CASE("air-gap sweep ordering") {
  const std::vector<double> lengths{5, 15, 30}, heights{10, 100}, oxides{2, 8};
  const auto pts = capnet::air_gap_sweep(CellGeometry{}, lengths, heights, oxides);
  REQUIRE(pts.size() == 12);
  CHECK(pts[0].height_nm == 10);
  CHECK(pts[0].oxide_nm == 2);
  CHECK(pts[2].length_nm == 30);
  for (std::size_t k = 0; k < 6; ++k) {
    CHECK(pts[k].increase() > 0.0);
    CHECK(pts[k + 6].increase() > pts[k].increase());
  }
}

TEST_CASE("scaling inter-cell capacitors leaves the gate capacitors alone") {
  const auto caps = capnet::build_capacitances(lattice(2, 2));
  const auto half = caps.scale_intercell(0.5);
  CHECK(half.A[0] == caps.A[0]);
  CHECK(half.B[0] == caps.B[0]);
  CHECK(half.D[0] == caps.D[0] * 0.5);
  CHECK(half.K[0] == caps.K[0] * 0.5);
}
