#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

namespace fga {

/// Row-major M x N cell grid. Cell (i, j) is row i, column j, both 0-based.
struct Grid {
  int rows = 0;
  int cols = 0;

  int size() const { return rows * cols; }
  bool contains(int i, int j) const { return i >= 0 && i < rows && j >= 0 && j < cols; }
  int index(int i, int j) const { return i * cols + j; }
  std::pair<int, int> cell(int index) const { return {index / cols, index % cols}; }
};

/// Inter-cell gaps, named after the capacitor that spans them. Every gap is
/// owned by the top-left cell (i, j) of its 2x2 block:
///   D: (i,j)-(i,j+1)   L: (i,j)-(i+1,j)
///   J: (i,j)-(i+1,j+1) K: (i+1,j)-(i,j+1)
enum class Bond { D = 0, L = 1, J = 2, K = 3 };

inline constexpr std::array<Bond, 4> all_bonds{Bond::D, Bond::L, Bond::J, Bond::K};

std::string_view to_string(Bond bond);
Bond parse_bond(std::string_view text);

struct Gap {
  Bond bond = Bond::D;
  int i = 0;
  int j = 0;

  /// The two cells the gap separates.
  std::pair<std::pair<int, int>, std::pair<int, int>> endpoints() const;
  bool lateral() const { return bond == Bond::D || bond == Bond::L; }

  friend bool operator==(const Gap&, const Gap&) = default;
};

/// Every in-lattice gap in a fixed order: bond D, L, J, K, each in raster order
/// of the owning cell.
std::vector<Gap> enumerate_gaps(const Grid& grid);
bool gap_in_lattice(const Grid& grid, const Gap& gap);

enum class GapMaterial { oxide, air, absent };

std::string_view to_string(GapMaterial material);
GapMaterial parse_gap_material(std::string_view text);

/// Material per gap. Out-of-lattice gaps always read as absent.
class GapMap {
 public:
  GapMap() = default;
  GapMap(const Grid& grid, GapMaterial lateral, GapMaterial diagonal);

  GapMaterial at(const Gap& gap) const;
  void set(const Gap& gap, GapMaterial material);
  const Grid& grid() const { return grid_; }

 private:
  Grid grid_;
  std::array<std::vector<GapMaterial>, 4> materials_;
};

struct CellGeometry {
  double length = 15e-9;           // L, along j (m)
  double width = 15e-9;            // W, along i (m)
  double height = 10e-9;           // Z_FG (m)
  double oxide_thickness = 8e-9;   // d_ox, tunnel oxide (m)
  double coupling_ratio = 0.3;     // CR
  double eps_oxide = 3.9;
  double c_source = 0.0;           // C_H (F)
  double c_drain = 0.0;            // C_I (F)

  /// Insulator thickness between floating gate and control gate.
  double control_oxide_thickness() const {
    return oxide_thickness * (1.0 - coupling_ratio) / coupling_ratio;
  }

  /// Throws Error(invalid_geometry) on violated invariants.
  void validate() const;
};

struct CellVoltages {
  double control_gate = 0.0;  // V_CG
  double substrate = 0.0;     // V_sub
  double source = 0.0;        // V_s
  double drain = 0.0;         // V_d
};

struct LatticeSpec {
  Grid grid{1, 1};
  CellGeometry geometry;
  /// Optional per-cell geometry; empty or grid.size() entries.
  std::vector<std::optional<CellGeometry>> cell_geometry;
  GapMap gaps{Grid{1, 1}, GapMaterial::oxide, GapMaterial::oxide};
  std::vector<CellVoltages> voltages;  // grid.size() entries
  std::vector<int> base_occupation;    // n0, grid.size() entries
  /// Explicit effective gate charge per cell. When absent it is derived from
  /// the voltages and the base occupation.
  std::optional<std::vector<double>> gate_charge;
  /// Floating gate to neighbouring control gate capacitance (C_E, C_F, C_M, C_N).
  double c_cross_gate = 0.0;

  /// Uniform lattice with zero bias and zero base occupation.
  static LatticeSpec uniform(int rows, int cols, const CellGeometry& geometry,
                             GapMaterial lateral = GapMaterial::oxide,
                             GapMaterial diagonal = GapMaterial::oxide);

  const CellGeometry& geometry_at(int i, int j) const;
  void validate() const;
};

}  // namespace fga
