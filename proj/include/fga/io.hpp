#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "fga/annealer.hpp"
#include "fga/capnet.hpp"
#include "fga/embedder.hpp"
#include "fga/ising.hpp"
#include "fga/lattice.hpp"

namespace fga::io {

using nlohmann::json;

json read_json_file(const std::filesystem::path& path);

/// Lattice document:
///   rows, cols
///   geometry: {L_nm, W_nm, Z_nm, d_ox_nm, CR, eps_oxide, C_H_aF, C_I_aF}
///   cell_geometry (optional): [{i, j, <geometry fields>}]
///   gap_map (optional): {lateral, diagonal, gaps: [{bond, i, j, material | directive}]}
///   voltages (optional): {V_CG, V_sub, V_s, V_d} or one such object per cell
///   n0 (optional): integer or per-cell array
///   n_G (optional): number or per-cell array
///   C_cross_aF (optional)
LatticeSpec parse_lattice(const json& doc);

/// Problem document: {n, edges: [{i, j, J_eV | J}], fields: [h...]}. Edges
/// keyed J_eV give an eV model, J an algorithmic one; "unit" overrides.
IsingModel parse_problem(const json& doc);

json to_json(const IsingModel& model);
json to_json(const capnet::Extraction& extraction);
json to_json(const embed::Embedding& emb);
json to_json(const embed::LayoutMask& layout);
json to_json(const anneal::AnnealResult& result);

/// Basis index rendered as a spin string, qubit 0 first: '+' for +1, '-' for -1.
std::string spin_string(std::span<const int> spins);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double value);

/// Comma-separated table with a header row.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  CsvWriter& row(const std::vector<std::string>& cells);
  std::string str() const { return text_; }

 private:
  std::size_t columns_;
  std::string text_;
};

/// Deterministic JSON text: two-space indent, trailing newline.
std::string dump(const json& doc);

}  // namespace fga::io
