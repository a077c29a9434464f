#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fga/ising.hpp"
#include "fga/lattice.hpp"

namespace fga::embed {

enum class BondType { fixed, absent, tunable };
std::string_view to_string(BondType type);

/// Classification of one in-lattice gap. For tunable gaps `chain_a` and
/// `chain_b` name the logical edge it realises (chain_a < chain_b); for fixed
/// gaps both name the owning chain.
struct BondAssignment {
  Gap gap;
  BondType type = BondType::absent;
  int chain_a = -1;
  int chain_b = -1;
};

struct Embedding {
  Grid grid;
  int logical_size = 0;
  /// Lattice cells (raster index) per logical spin, head first.
  std::vector<std::vector<int>> chains;
  /// Data sign per lattice cell: +1/-1 on chain sites, 0 elsewhere.
  std::vector<int> signs;
  /// Every in-lattice gap, in enumerate_gaps order.
  std::vector<BondAssignment> bonds;
  /// J_F per logical spin.
  std::vector<double> chain_strengths;
  /// Compact physical qubit -> lattice cell, raster order of chain sites.
  std::vector<int> physical_cells;
  /// Lattice cell -> physical qubit, -1 for unused cells.
  std::vector<int> cell_qubit;

  int physical_size() const { return static_cast<int>(physical_cells.size()); }
  /// Rows actually used by the chains.
  int rows_used() const;
};

/// J_F(a) = (1 + margin) (|h_a| + sum_b |J_ab|).
std::vector<double> chain_strengths(const IsingModel& logical, double margin);

/// Places one vertical chain per logical spin in the top-left corner of the
/// lattice. Chains start in column order and exchange neighbours on alternate
/// row boundaries through crossing diagonal bonds, so every pair of chains
/// eventually shares a row (same data sign) and a vertical or diagonal gap
/// across rows (opposite data signs). Rows are added until every coupled pair
/// has a contact whose sign product matches the sign of its coupling.
Embedding embed_complete_graph(const IsingModel& logical, const Grid& lattice, double margin = 0.25);

/// Lattice dimensions embed_complete_graph needs for this problem.
Grid required_lattice(const IsingModel& logical);

enum class LayoutDirective { oxide, air_gap, control_qubit };
std::string_view to_string(LayoutDirective directive);

struct LayoutMask {
  Grid grid;
  std::vector<std::pair<Gap, LayoutDirective>> gaps;  // aligned with Embedding::bonds

  /// Material view for the capacitance model.
  GapMap gap_map() const;
};

struct Compiled {
  IsingModel physical;  // compact qubit indices
  LayoutMask layout;
};

Compiled compile_physical(const Embedding& emb, const IsingModel& logical);

struct Decoded {
  Spins logical;
  std::vector<bool> intact;
};

/// Majority vote of the sign-corrected spins per chain. Ties go to +1 and
/// mark the chain broken.
Decoded decode(const Embedding& emb, std::span<const int> physical_spins);

/// Physical spins that represent `logical` with every chain intact.
Spins encode(const Embedding& emb, std::span<const int> logical);

struct VerificationReport {
  std::vector<std::string> violations;
  std::vector<int> degenerate_chains;  // J_F bound of zero
  bool ground_states_checked = false;
  bool decoded_ground_set_matches = false;

  bool ok() const { return violations.empty(); }
};

/// Structural and chain-strength checks; when the physical model is small
/// enough, also checks that physical ground states decode onto the logical
/// ground-state set with intact chains.
VerificationReport verify_embedding(const Embedding& emb, const IsingModel& logical, const IsingModel& physical);

}  // namespace fga::embed
