#include "fga/capnet.hpp"

#include <cmath>
#include <cstdint>
#include <exception>
#include <numbers>
#include <string>

#include "fga/error.hpp"
#include "fga/units.hpp"

namespace fga::capnet {

CapacitanceSet::CapacitanceSet(const Grid& g) : grid(g) {
  for (auto* member : {&A, &B, &H, &I, &D, &L, &J, &K, &E, &F, &M, &N}) member->assign(g.size(), 0.0);
}

double CapacitanceSet::bond(Bond b, int i, int j) const {
  switch (b) {
    case Bond::D: return at(D, i, j);
    case Bond::L: return at(L, i, j);
    case Bond::J: return at(J, i, j);
    case Bond::K: return at(K, i, j);
  }
  return 0.0;
}

double CapacitanceSet::total(int i, int j) const {
  return at(A, i, j) + at(B, i, j) + at(H, i, j) + at(I, i, j)
         + at(D, i, j) + at(F, i, j)
         + at(L, i, j) + at(N, i, j)
         + at(J, i, j)
         + at(D, i, j - 1) + at(E, i, j - 1) + at(K, i, j - 1)
         + at(K, i - 1, j) + at(L, i - 1, j) + at(M, i - 1, j)
         + at(J, i - 1, j - 1);
}

CapacitanceSet CapacitanceSet::scale_intercell(double factor) const {
  CapacitanceSet out = *this;
  for (auto* member : {&out.D, &out.L, &out.J, &out.K, &out.E, &out.F, &out.M, &out.N}) {
    for (double& c : *member) c *= factor;
  }
  return out;
}

namespace {

double permittivity(GapMaterial material, const CellGeometry& g) {
  switch (material) {
    case GapMaterial::oxide: return g.eps_oxide;
    case GapMaterial::air: return 1.0;
    case GapMaterial::absent: return 0.0;
  }
  return 0.0;
}

}  // namespace

CapacitanceSet build_capacitances(const LatticeSpec& spec) {
  spec.validate();
  const Grid& grid = spec.grid;
  const double eps0 = units::vacuum_permittivity;
  CapacitanceSet caps(grid);

  for (int i = 0; i < grid.rows; ++i) {
    for (int j = 0; j < grid.cols; ++j) {
      const auto& g = spec.geometry_at(i, j);
      const int k = grid.index(i, j);
      const double area = g.length * g.width;
      caps.A[k] = g.eps_oxide * eps0 * area / g.control_oxide_thickness();
      caps.B[k] = g.eps_oxide * eps0 * area / g.oxide_thickness;
      caps.H[k] = g.c_source;
      caps.I[k] = g.c_drain;

      const double side = g.height * g.width / g.length;
      caps.D[k] = permittivity(spec.gaps.at({Bond::D, i, j}), g) * eps0 * side;
      caps.L[k] = permittivity(spec.gaps.at({Bond::L, i, j}), g) * eps0 * g.height * g.length / g.width;
      caps.J[k] = permittivity(spec.gaps.at({Bond::J, i, j}), g) * eps0 * side / std::numbers::sqrt2;
      caps.K[k] = permittivity(spec.gaps.at({Bond::K, i, j}), g) * eps0 * side / std::numbers::sqrt2;

      const bool right = grid.contains(i, j + 1);
      const bool below = grid.contains(i + 1, j);
      caps.E[k] = right ? spec.c_cross_gate : 0.0;
      caps.F[k] = right ? spec.c_cross_gate : 0.0;
      caps.M[k] = below ? spec.c_cross_gate : 0.0;
      caps.N[k] = below ? spec.c_cross_gate : 0.0;
    }
  }
  return caps;
}

EffectiveNetwork reduce_network(const CapacitanceSet& caps) {
  const Grid& grid = caps.grid;
  EffectiveNetwork net{caps, {}, {}, {}, {}, {}, {}};
  for (auto* v : {&net.c_a, &net.c_a_red, &net.c_d_red, &net.c_l_red, &net.c_j_red, &net.c_k_red}) {
    v->assign(grid.size(), 0.0);
  }
  auto get = [&](const std::vector<double>& v, int i, int j) {
    return grid.contains(i, j) ? v[grid.index(i, j)] : 0.0;
  };

  for (int i = 0; i < grid.rows; ++i) {
    // C'_a(i,j+1) needs C'_D(i,j), so the diagonal and the D/L/J terms are
    // produced cell by cell; C'_K(i,j) needs C'_a(i,j+1) and waits for the row.
    for (int j = 0; j < grid.cols; ++j) {
      const int k = grid.index(i, j);
      net.c_a[k] = caps.total(i, j);
      const double jp = get(net.c_j_red, i - 1, j - 1);
      const double lp = get(net.c_l_red, i - 1, j);
      const double dp = get(net.c_d_red, i, j - 1);
      const double kp = get(net.c_k_red, i - 1, j);
      const double reduced = net.c_a[k] - jp * jp - lp * lp - dp * dp - kp * kp;
      if (!(reduced > 0.0)) {
        throw Error(ErrorKind::reduction_failure,
                    "reduced capacitance C'_a is not positive at cell (" + std::to_string(i) + "," +
                        std::to_string(j) + ")");
      }
      net.c_a_red[k] = reduced;
      const double root = std::sqrt(reduced);

      net.c_d_red[k] = (caps.at(caps.D, i, j) + get(net.c_l_red, i - 1, j) * get(net.c_j_red, i - 1, j) +
                        get(net.c_l_red, i - 1, j + 1) * get(net.c_k_red, i - 1, j)) / root;
      net.c_l_red[k] = (caps.at(caps.L, i, j) + get(net.c_d_red, i, j - 1) * get(net.c_j_red, i, j - 1)) / root;
      net.c_j_red[k] = caps.at(caps.J, i, j) / root;
    }
    for (int j = 0; j + 1 < grid.cols; ++j) {
      const int k = grid.index(i, j);
      net.c_k_red[k] = (caps.at(caps.K, i, j) + net.c_d_red[k] * net.c_l_red[k]) /
                       std::sqrt(net.c_a_red[grid.index(i, j + 1)]);
    }
  }
  return net;
}

std::vector<double> induced_charge(const CapacitanceSet& caps, std::span<const CellVoltages> voltages) {
  const Grid& grid = caps.grid;
  if (static_cast<int>(voltages.size()) != grid.size()) {
    throw Error(ErrorKind::size_mismatch, "voltage array does not cover the lattice");
  }
  auto vcg = [&](int i, int j) { return grid.contains(i, j) ? voltages[grid.index(i, j)].control_gate : 0.0; };
  std::vector<double> q0(grid.size());
  for (int i = 0; i < grid.rows; ++i) {
    for (int j = 0; j < grid.cols; ++j) {
      const int k = grid.index(i, j);
      const auto& v = voltages[k];
      const double coulombs = caps.A[k] * v.control_gate + caps.B[k] * v.substrate + caps.H[k] * v.source +
                              caps.I[k] * v.drain + caps.F[k] * vcg(i, j + 1) + caps.N[k] * vcg(i + 1, j) +
                              caps.at(caps.E, i, j - 1) * vcg(i, j - 1) +
                              caps.at(caps.M, i - 1, j) * vcg(i - 1, j);
      q0[k] = coulombs / units::elementary_charge;
    }
  }
  return q0;
}

GateOffsets gate_offset(const CapacitanceSet& caps, std::span<const CellVoltages> voltages,
                        std::span<const int> base_occupation,
                        const std::optional<std::vector<double>>& explicit_gate_charge) {
  const int cells = caps.grid.size();
  if (static_cast<int>(base_occupation.size()) != cells) {
    throw Error(ErrorKind::size_mismatch, "base occupation does not cover the lattice");
  }
  GateOffsets out;
  if (explicit_gate_charge) {
    if (static_cast<int>(explicit_gate_charge->size()) != cells) {
      throw Error(ErrorKind::size_mismatch, "n_G does not cover the lattice");
    }
    out.gate_charge = *explicit_gate_charge;
    out.q0.resize(cells);
    for (int k = 0; k < cells; ++k) out.q0[k] = out.gate_charge[k] - 0.5 - base_occupation[k];
    return out;
  }
  out.q0 = induced_charge(caps, voltages);
  out.gate_charge.resize(cells);
  for (int k = 0; k < cells; ++k) out.gate_charge[k] = base_occupation[k] + out.q0[k] + 0.5;
  return out;
}

GateOffsets gate_offset(const LatticeSpec& spec, const CapacitanceSet& caps) {
  return gate_offset(caps, spec.voltages, spec.base_occupation, spec.gate_charge);
}

IsingModel ising_couplings(const EffectiveNetwork& net) {
  const Grid& grid = net.grid();
  IsingModel model(grid.size(), EnergyUnit::e2_per_farad);
  for (const Gap& gap : enumerate_gaps(grid)) {
    const double c = net.caps.bond(gap.bond, gap.i, gap.j);
    if (c == 0.0) continue;
    auto [a, b] = gap.endpoints();
    const double j = c / (4.0 * net.reduced_total(a.first, a.second) * net.reduced_total(b.first, b.second));
    model.set_coupling(grid.index(a.first, a.second), grid.index(b.first, b.second), j);
  }
  return model;
}

std::vector<double> local_fields(const EffectiveNetwork& net, std::span<const double> gate_charge) {
  const Grid& grid = net.grid();
  if (static_cast<int>(gate_charge.size()) != grid.size()) {
    throw Error(ErrorKind::size_mismatch, "n_G does not cover the lattice");
  }
  const auto& caps = net.caps;
  auto ng = [&](int i, int j) { return grid.contains(i, j) ? gate_charge[grid.index(i, j)] : 0.0; };
  auto ca = [&](int i, int j) { return net.reduced_total(i, j); };
  // Coupling term c * n_G(neighbour) / (2 C'_a(self) C'_a(neighbour)); a zero
  // capacitor contributes nothing, including across the open boundary.
  auto term = [&](double c, int i, int j, int ni, int nj) {
    return c == 0.0 ? 0.0 : c * ng(ni, nj) / (2.0 * ca(i, j) * ca(ni, nj));
  };
  auto square = [&](double c, int i, int j, int ni, int nj) {
    return c == 0.0 ? 0.0 : c * c / (ca(i, j) * ca(ni, nj));
  };

  std::vector<double> h(grid.size());
  for (int i = 0; i < grid.rows; ++i) {
    for (int j = 0; j < grid.cols; ++j) {
      const double d = caps.at(caps.D, i, j);
      const double l = caps.at(caps.L, i, j);
      const double jj = caps.at(caps.J, i, j);
      const double k_left = caps.at(caps.K, i, j - 1);
      const double bracket = 1.0 + square(d, i, j, i, j + 1) + square(l, i, j, i + 1, j) +
                             square(jj, i, j, i + 1, j + 1) + square(k_left, i, j, i + 1, j - 1);
      double value = bracket * ng(i, j) / (2.0 * ca(i, j));
      value += term(caps.at(caps.D, i, j - 1), i, j, i, j - 1);
      value += term(d, i, j, i, j + 1);
      value += term(caps.at(caps.J, i - 1, j - 1), i, j, i - 1, j - 1);
      value += term(jj, i, j, i + 1, j + 1);
      value += term(caps.at(caps.L, i - 1, j), i, j, i - 1, j);
      value += term(l, i, j, i + 1, j);
      value += term(caps.at(caps.K, i - 1, j), i, j, i - 1, j + 1);
      value += term(k_left, i, j, i + 1, j - 1);
      h[grid.index(i, j)] = value;
    }
  }
  return h;
}

std::vector<double> single_electron_scale(const CapacitanceSet& caps) {
  const Grid& grid = caps.grid;
  auto ca = [&](int i, int j) { return grid.contains(i, j) ? caps.total(i, j) : 0.0; };
  std::vector<double> u(grid.size());
  for (int i = 0; i < grid.rows; ++i) {
    for (int j = 0; j < grid.cols; ++j) {
      const double self = ca(i, j);
      auto ratio = [&](double c, int ni, int nj) { return c == 0.0 ? 0.0 : c * c / (self * ca(ni, nj)); };
      const double bracket = 1.0 + ratio(caps.at(caps.D, i, j), i, j + 1) + ratio(caps.at(caps.L, i, j), i + 1, j) +
                             ratio(caps.at(caps.J, i, j), i + 1, j + 1) +
                             ratio(caps.at(caps.K, i, j - 1), i + 1, j - 1);
      u[grid.index(i, j)] = bracket / (8.0 * self) * units::e2_per_farad_to_ev;
    }
  }
  return u;
}

Extraction extract(const LatticeSpec& spec) {
  auto caps = build_capacitances(spec);
  auto offsets = gate_offset(spec, caps);
  auto net = reduce_network(caps);
  auto couplings = ising_couplings(net);
  auto fields = local_fields(net, offsets.gate_charge);
  for (int k = 0; k < couplings.size(); ++k) couplings.set_field(k, fields[k]);
  auto model = couplings.scaled(units::e2_per_farad_to_ev, EnergyUnit::ev);
  auto u_h = single_electron_scale(caps);
  return Extraction{std::move(net), std::move(offsets), std::move(model), std::move(u_h)};
}

std::vector<AirGapPoint> air_gap_sweep(const CellGeometry& base, std::span<const double> lengths_nm,
                                       std::span<const double> heights_nm, std::span<const double> oxides_nm) {
  std::vector<AirGapPoint> points;
  for (double z : heights_nm) {
    for (double d : oxides_nm) {
      for (double l : lengths_nm) points.push_back({l, z, d, 0.0, 0.0});
    }
  }
  constexpr int size = 5;
  const auto count = static_cast<std::int64_t>(points.size());
  std::vector<std::exception_ptr> failure(points.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t k = 0; k < count; ++k) {
    try {
      auto& pt = points[k];
      CellGeometry g = base;
      g.length = g.width = pt.length_nm * units::nm;
      g.height = pt.height_nm * units::nm;
      g.oxide_thickness = pt.oxide_nm * units::nm;
      const int centre = Grid{size, size}.index(size / 2, size / 2);
      auto uh = [&](GapMaterial diagonal) {
        const auto spec = LatticeSpec::uniform(size, size, g, GapMaterial::oxide, diagonal);
        return single_electron_scale(build_capacitances(spec))[centre];
      };
      pt.u_h_oxide_ev = uh(GapMaterial::oxide);
      pt.u_h_air_ev = uh(GapMaterial::air);
    } catch (...) {
      failure[k] = std::current_exception();
    }
  }
  for (const auto& f : failure) {
    if (f) std::rethrow_exception(f);
  }
  return points;
}

}  // namespace fga::capnet
