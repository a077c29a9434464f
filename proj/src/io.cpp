#include "fga/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "fga/error.hpp"
#include "fga/units.hpp"

namespace fga::io {

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::io, path.string() + ": " + e.what());
  }
}

namespace {

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::invalid_input, std::string("field '") + key + "': " + e.what());
  }
}

CellGeometry parse_geometry(const json& obj, const CellGeometry& base) {
  if (!obj.is_object()) throw Error(ErrorKind::invalid_input, "geometry must be an object");
  CellGeometry g = base;
  g.length = get_or(obj, "L_nm", base.length / units::nm) * units::nm;
  g.width = get_or(obj, "W_nm", base.width / units::nm) * units::nm;
  g.height = get_or(obj, "Z_nm", base.height / units::nm) * units::nm;
  g.oxide_thickness = get_or(obj, "d_ox_nm", base.oxide_thickness / units::nm) * units::nm;
  g.coupling_ratio = get_or(obj, "CR", base.coupling_ratio);
  g.eps_oxide = get_or(obj, "eps_oxide", base.eps_oxide);
  g.c_source = get_or(obj, "C_H_aF", base.c_source / units::attofarad) * units::attofarad;
  g.c_drain = get_or(obj, "C_I_aF", base.c_drain / units::attofarad) * units::attofarad;
  return g;
}

CellVoltages parse_voltages(const json& obj) {
  if (!obj.is_object()) throw Error(ErrorKind::invalid_input, "voltages must be objects");
  return {get_or(obj, "V_CG", 0.0), get_or(obj, "V_sub", 0.0), get_or(obj, "V_s", 0.0), get_or(obj, "V_d", 0.0)};
}

/// Scalar broadcast to every cell, or an array with one entry per cell.
template <typename T>
std::vector<T> per_cell(const json& value, int cells, const char* name) {
  try {
    if (value.is_array()) {
      if (static_cast<int>(value.size()) != cells) {
        throw Error(ErrorKind::size_mismatch, std::string(name) + " has " + std::to_string(value.size()) +
                                                  " entries for " + std::to_string(cells) + " cells");
      }
      return value.get<std::vector<T>>();
    }
    return std::vector<T>(cells, value.get<T>());
  } catch (const json::exception& e) {
    throw Error(ErrorKind::invalid_input, std::string("field '") + name + "': " + e.what());
  }
}

json cell_pair(const Grid& grid, int cell) {
  auto [i, j] = grid.cell(cell);
  return json::array({i, j});
}

}  // namespace

LatticeSpec parse_lattice(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorKind::invalid_input, "lattice document must be an object");
  const int rows = get_or(doc, "rows", 0);
  const int cols = get_or(doc, "cols", 0);
  if (rows < 1 || cols < 1) throw Error(ErrorKind::invalid_input, "lattice needs rows >= 1 and cols >= 1");
  const CellGeometry geometry = doc.contains("geometry") ? parse_geometry(doc.at("geometry"), {}) : CellGeometry{};

  GapMaterial lateral = GapMaterial::oxide;
  GapMaterial diagonal = GapMaterial::oxide;
  const json gap_doc = doc.value("gap_map", json::object());
  if (gap_doc.contains("lateral")) lateral = parse_gap_material(gap_doc.at("lateral").get<std::string>());
  if (gap_doc.contains("diagonal")) diagonal = parse_gap_material(gap_doc.at("diagonal").get<std::string>());
  LatticeSpec spec = LatticeSpec::uniform(rows, cols, geometry, lateral, diagonal);
  const int cells = spec.grid.size();

  try {
    for (const auto& entry : gap_doc.value("gaps", json::array())) {
      const Gap gap{parse_bond(entry.at("bond").get<std::string>()), entry.at("i").get<int>(),
                    entry.at("j").get<int>()};
      const auto material = entry.contains("material") ? entry.at("material") : entry.at("directive");
      spec.gaps.set(gap, parse_gap_material(material.get<std::string>()));
    }
    if (doc.contains("cell_geometry")) {
      spec.cell_geometry.assign(cells, std::nullopt);
      for (const auto& entry : doc.at("cell_geometry")) {
        const int i = entry.at("i").get<int>();
        const int j = entry.at("j").get<int>();
        if (!spec.grid.contains(i, j)) throw Error(ErrorKind::invalid_input, "cell_geometry entry outside lattice");
        spec.cell_geometry[spec.grid.index(i, j)] = parse_geometry(entry, geometry);
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::invalid_input, std::string("lattice document: ") + e.what());
  }

  if (doc.contains("voltages")) {
    const auto& v = doc.at("voltages");
    if (v.is_array()) {
      if (static_cast<int>(v.size()) != cells) throw Error(ErrorKind::size_mismatch, "voltages must cover the lattice");
      for (int k = 0; k < cells; ++k) spec.voltages[k] = parse_voltages(v[k]);
    } else {
      spec.voltages.assign(cells, parse_voltages(v));
    }
  }
  if (doc.contains("n0")) spec.base_occupation = per_cell<int>(doc.at("n0"), cells, "n0");
  if (doc.contains("n_G")) spec.gate_charge = per_cell<double>(doc.at("n_G"), cells, "n_G");
  spec.c_cross_gate = get_or(doc, "C_cross_aF", 0.0) * units::attofarad;
  spec.validate();
  return spec;
}

IsingModel parse_problem(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorKind::invalid_input, "problem document must be an object");
  try {
    const int n = doc.at("n").get<int>();
    if (n < 1) throw Error(ErrorKind::invalid_input, "problem needs n >= 1");
    bool ev = false;
    for (const auto& e : doc.value("edges", json::array())) ev = ev || e.contains("J_eV");
    EnergyUnit unit = ev ? EnergyUnit::ev : EnergyUnit::algorithmic;
    if (doc.contains("unit")) {
      const auto u = doc.at("unit").get<std::string>();
      if (u == "eV") {
        unit = EnergyUnit::ev;
      } else if (u == "algorithmic") {
        unit = EnergyUnit::algorithmic;
      } else {
        throw Error(ErrorKind::invalid_input, "unknown unit '" + u + "'");
      }
    }
    IsingModel model(n, unit);
    for (const auto& e : doc.value("edges", json::array())) {
      const double j = e.contains("J_eV") ? e.at("J_eV").get<double>() : e.at("J").get<double>();
      model.add_coupling(e.at("i").get<int>(), e.at("j").get<int>(), j);
    }
    if (doc.contains("fields")) {
      const auto h = doc.at("fields").get<std::vector<double>>();
      if (static_cast<int>(h.size()) != n) throw Error(ErrorKind::size_mismatch, "fields must have n entries");
      for (int i = 0; i < n; ++i) model.set_field(i, h[i]);
    }
    model.validate();
    return model;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::invalid_input, std::string("problem document: ") + e.what());
  }
}

json to_json(const IsingModel& model) {
  const bool ev = model.unit() == EnergyUnit::ev;
  json edges = json::array();
  for (const auto& [key, j] : model.couplings()) {
    edges.push_back({{"i", key.first}, {"j", key.second}, {ev ? "J_eV" : "J", j}});
  }
  return {{"n", model.size()}, {"unit", std::string(to_string(model.unit()))}, {"edges", edges},
          {"fields", model.fields()}};
}

json to_json(const capnet::Extraction& extraction) {
  const auto& net = extraction.network;
  const Grid& grid = net.grid();
  json edges = json::array();
  for (const Gap& gap : enumerate_gaps(grid)) {
    auto [a, b] = gap.endpoints();
    const int ka = grid.index(a.first, a.second);
    const int kb = grid.index(b.first, b.second);
    const double j = extraction.model.coupling(ka, kb);
    if (j == 0.0) continue;
    edges.push_back({{"bond", std::string(to_string(gap.bond))},
                     {"i", ka},
                     {"j", kb},
                     {"cells", json::array({cell_pair(grid, ka), cell_pair(grid, kb)})},
                     {"J_eV", j}});
  }
  return {{"rows", grid.rows},
          {"cols", grid.cols},
          {"unit", "eV"},
          {"J", edges},
          {"h_eV", extraction.model.fields()},
          {"U_h_eV", extraction.u_h_ev},
          {"n_G", extraction.offsets.gate_charge},
          {"Q0_e", extraction.offsets.q0},
          {"C_a_F", net.c_a},
          {"C_a_reduced_F", net.c_a_red}};
}

json to_json(const embed::LayoutMask& layout) {
  json gaps = json::array();
  for (const auto& [gap, directive] : layout.gaps) {
    gaps.push_back({{"bond", std::string(to_string(gap.bond))},
                    {"i", gap.i},
                    {"j", gap.j},
                    {"directive", std::string(to_string(directive))}});
  }
  return {{"rows", layout.grid.rows}, {"cols", layout.grid.cols}, {"gaps", gaps}};
}

json to_json(const embed::Embedding& emb) {
  const Grid& grid = emb.grid;
  json chains = json::array();
  for (int a = 0; a < emb.logical_size; ++a) {
    json sites = json::array();
    for (int cell : emb.chains[a]) {
      sites.push_back({{"cell", cell_pair(grid, cell)}, {"qubit", emb.cell_qubit[cell]}, {"sign", emb.signs[cell]}});
    }
    chains.push_back({{"logical", a}, {"J_F", emb.chain_strengths[a]}, {"sites", sites}});
  }
  json bonds = json::array();
  for (const auto& bond : emb.bonds) {
    json entry = {{"bond", std::string(to_string(bond.gap.bond))},
                  {"i", bond.gap.i},
                  {"j", bond.gap.j},
                  {"type", std::string(to_string(bond.type))}};
    if (bond.type == embed::BondType::tunable) entry["logical_edge"] = json::array({bond.chain_a, bond.chain_b});
    if (bond.type == embed::BondType::fixed) entry["chain"] = bond.chain_a;
    bonds.push_back(entry);
  }
  return {{"rows", grid.rows},
          {"cols", grid.cols},
          {"rows_used", emb.rows_used()},
          {"logical_size", emb.logical_size},
          {"physical_size", emb.physical_size()},
          {"chains", chains},
          {"bonds", bonds}};
}

std::string spin_string(std::span<const int> spins) {
  std::string s;
  for (int v : spins) s.push_back(v > 0 ? '+' : '-');
  return s;
}

json to_json(const anneal::AnnealResult& result) {
  json histogram = json::array();
  for (const auto& [state, count] : result.histogram) {
    histogram.push_back({{"state", spin_string(spins_from_index(state, result.n))}, {"count", count}});
  }
  json doc = {{"n", result.n},
              {"total_time", result.total_time},
              {"steps", result.steps},
              {"shots", result.shots},
              {"norm_drift", result.norm_drift},
              {"dephased", result.dephased},
              {"histogram", histogram}};
  if (result.dephased) {
    doc["trajectories"] = result.trajectories;
    doc["t2"] = result.t2;
  }
  return doc;
}

std::string format_double(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) throw Error(ErrorKind::io, "number formatting failed");
  return std::string(buf, end);
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) { row(header); }

CsvWriter& CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw Error(ErrorKind::io, "CSV row has the wrong number of columns");
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (c) text_ += ',';
    text_ += cells[c];
  }
  text_ += '\n';
  return *this;
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

}  // namespace fga::io
