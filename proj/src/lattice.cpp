#include "fga/lattice.hpp"

#include <cmath>
#include <string>

#include "fga/error.hpp"

namespace fga {

std::string_view to_string(Bond bond) {
  switch (bond) {
    case Bond::D: return "D";
    case Bond::L: return "L";
    case Bond::J: return "J";
    case Bond::K: return "K";
  }
  return "?";
}

Bond parse_bond(std::string_view text) {
  if (text == "D") return Bond::D;
  if (text == "L") return Bond::L;
  if (text == "J") return Bond::J;
  if (text == "K") return Bond::K;
  throw Error(ErrorKind::invalid_input, "unknown bond '" + std::string(text) + "'");
}

std::pair<std::pair<int, int>, std::pair<int, int>> Gap::endpoints() const {
  switch (bond) {
    case Bond::D: return {{i, j}, {i, j + 1}};
    case Bond::L: return {{i, j}, {i + 1, j}};
    case Bond::J: return {{i, j}, {i + 1, j + 1}};
    case Bond::K: return {{i + 1, j}, {i, j + 1}};
  }
  return {{i, j}, {i, j}};
}

bool gap_in_lattice(const Grid& grid, const Gap& gap) {
  auto [a, b] = gap.endpoints();
  return grid.contains(a.first, a.second) && grid.contains(b.first, b.second);
}

std::vector<Gap> enumerate_gaps(const Grid& grid) {
  std::vector<Gap> gaps;
  for (Bond bond : all_bonds) {
    for (int i = 0; i < grid.rows; ++i) {
      for (int j = 0; j < grid.cols; ++j) {
        Gap gap{bond, i, j};
        if (gap_in_lattice(grid, gap)) gaps.push_back(gap);
      }
    }
  }
  return gaps;
}

std::string_view to_string(GapMaterial material) {
  switch (material) {
    case GapMaterial::oxide: return "oxide";
    case GapMaterial::air: return "air";
    case GapMaterial::absent: return "absent";
  }
  return "?";
}

GapMaterial parse_gap_material(std::string_view text) {
  // Layout directives are accepted so an emitted layout mask can be fed back
  // as a gap map. A control-qubit gap keeps the oxide fill around the inserted
  // coupler.
  if (text == "oxide" || text == "control_qubit") return GapMaterial::oxide;
  if (text == "air" || text == "air_gap") return GapMaterial::air;
  if (text == "absent") return GapMaterial::absent;
  throw Error(ErrorKind::invalid_input, "unknown gap material '" + std::string(text) + "'");
}

GapMap::GapMap(const Grid& grid, GapMaterial lateral, GapMaterial diagonal) : grid_(grid) {
  for (Bond bond : all_bonds) {
    auto fill = (bond == Bond::D || bond == Bond::L) ? lateral : diagonal;
    materials_[static_cast<int>(bond)].assign(grid.size(), fill);
  }
}

GapMaterial GapMap::at(const Gap& gap) const {
  if (!gap_in_lattice(grid_, gap)) return GapMaterial::absent;
  return materials_[static_cast<int>(gap.bond)][grid_.index(gap.i, gap.j)];
}

void GapMap::set(const Gap& gap, GapMaterial material) {
  if (!gap_in_lattice(grid_, gap)) {
    throw Error(ErrorKind::invalid_input,
                "gap " + std::string(to_string(gap.bond)) + "(" + std::to_string(gap.i) + "," +
                    std::to_string(gap.j) + ") lies outside the lattice");
  }
  materials_[static_cast<int>(gap.bond)][grid_.index(gap.i, gap.j)] = material;
}

void CellGeometry::validate() const {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(length) || !positive(width) || !positive(height) || !positive(oxide_thickness)) {
    throw Error(ErrorKind::invalid_geometry, "cell dimensions must be positive");
  }
  if (!(coupling_ratio > 0.0 && coupling_ratio < 1.0)) {
    throw Error(ErrorKind::invalid_geometry, "coupling ratio must lie in (0, 1)");
  }
  if (!(eps_oxide >= 1.0)) {
    throw Error(ErrorKind::invalid_geometry, "oxide permittivity must be >= 1");
  }
  if (!(c_source >= 0.0) || !(c_drain >= 0.0)) {
    throw Error(ErrorKind::invalid_geometry, "source/drain capacitances must be non-negative");
  }
}

LatticeSpec LatticeSpec::uniform(int rows, int cols, const CellGeometry& geometry,
                                 GapMaterial lateral, GapMaterial diagonal) {
  LatticeSpec spec;
  spec.grid = Grid{rows, cols};
  spec.geometry = geometry;
  spec.gaps = GapMap(spec.grid, lateral, diagonal);
  spec.voltages.assign(std::max(0, rows * cols), CellVoltages{});
  spec.base_occupation.assign(std::max(0, rows * cols), 0);
  return spec;
}

const CellGeometry& LatticeSpec::geometry_at(int i, int j) const {
  if (!cell_geometry.empty()) {
    const auto& g = cell_geometry[grid.index(i, j)];
    if (g) return *g;
  }
  return geometry;
}

void LatticeSpec::validate() const {
  if (grid.rows < 1 || grid.cols < 1) {
    throw Error(ErrorKind::invalid_input, "lattice needs at least one row and one column");
  }
  const auto cells = static_cast<std::size_t>(grid.size());
  if (gaps.grid().rows != grid.rows || gaps.grid().cols != grid.cols) {
    throw Error(ErrorKind::invalid_input, "gap map dimensions do not match the lattice");
  }
  if (voltages.size() != cells || base_occupation.size() != cells) {
    throw Error(ErrorKind::size_mismatch, "per-cell voltage/occupation arrays must cover the lattice");
  }
  if (!cell_geometry.empty() && cell_geometry.size() != cells) {
    throw Error(ErrorKind::size_mismatch, "per-cell geometry must cover the lattice");
  }
  geometry.validate();
  for (const auto& g : cell_geometry) {
    if (g) g->validate();
  }
  if (!(c_cross_gate >= 0.0)) {
    throw Error(ErrorKind::invalid_geometry, "cross control-gate capacitance must be non-negative");
  }
  if (gate_charge) {
    if (gate_charge->size() != cells) {
      throw Error(ErrorKind::size_mismatch, "n_G must cover the lattice");
    }
    for (double g : *gate_charge) {
      if (!(std::abs(g) < 0.5)) {
        throw Error(ErrorKind::invalid_input, "|n_G| must be below 1/2 for every cell");
      }
    }
  }
}

}  // namespace fga
