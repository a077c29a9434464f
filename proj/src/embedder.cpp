#include "fga/embedder.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <set>
#include <string>

#include "fga/error.hpp"

namespace fga::embed {

std::string_view to_string(BondType type) {
  switch (type) {
    case BondType::fixed: return "fixed";
    case BondType::absent: return "absent";
    case BondType::tunable: return "tunable";
  }
  return "?";
}

std::string_view to_string(LayoutDirective directive) {
  switch (directive) {
    case LayoutDirective::oxide: return "oxide";
    case LayoutDirective::air_gap: return "air_gap";
    case LayoutDirective::control_qubit: return "control_qubit";
  }
  return "?";
}

int Embedding::rows_used() const {
  int rows = 0;
  for (const auto& chain : chains) rows = std::max(rows, static_cast<int>(chain.size()));
  return rows;
}

std::vector<double> chain_strengths(const IsingModel& logical, double margin) {
  if (!(margin > 0.0)) throw Error(ErrorKind::invalid_input, "chain-strength margin must be positive");
  std::vector<double> out(logical.size());
  for (int a = 0; a < logical.size(); ++a) {
    double bound = std::abs(logical.field(a));
    for (const auto& [b, j] : logical.neighbours(a)) bound += std::abs(j);
    out[a] = (1.0 + margin) * bound;
  }
  return out;
}

namespace {

int sign_of(double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); }

int row_sign(int row) { return row % 2 == 0 ? 1 : -1; }

/// rows[r][c] = chain in column c of row r, for the full reversal network.
std::vector<std::vector<int>> transposition_network(int n) {
  std::vector<std::vector<int>> rows;
  std::vector<int> order(n);
  for (int c = 0; c < n; ++c) order[c] = c;
  rows.push_back(order);
  for (int r = 0; n > 1 && r < n; ++r) {
    for (int c = r % 2; c + 1 < n; c += 2) std::swap(order[c], order[c + 1]);
    rows.push_back(order);
  }
  return rows;
}

struct Contact {
  Gap gap;
  int sign_product = 0;
};

/// Inter-chain contacts of the first `used` network rows, keyed by chain pair.
std::map<std::pair<int, int>, std::vector<Contact>> contacts(const std::vector<std::vector<int>>& rows, int used,
                                                             const Grid& lattice) {
  const int n = static_cast<int>(rows.front().size());
  const Grid block{used, n};
  std::map<std::pair<int, int>, std::vector<Contact>> out;
  for (const Gap& gap : enumerate_gaps(lattice)) {
    auto [p, q] = gap.endpoints();
    if (!block.contains(p.first, p.second) || !block.contains(q.first, q.second)) continue;
    const int a = rows[p.first][p.second];
    const int b = rows[q.first][q.second];
    if (a == b) continue;
    out[{std::min(a, b), std::max(a, b)}].push_back({gap, row_sign(p.first) * row_sign(q.first)});
  }
  return out;
}

bool satisfied(const IsingModel& logical, const std::map<std::pair<int, int>, std::vector<Contact>>& found) {
  for (const auto& [key, j] : logical.couplings()) {
    auto it = found.find(key);
    if (it == found.end()) return false;
    const bool ok = std::any_of(it->second.begin(), it->second.end(),
                                [&](const Contact& c) { return c.sign_product == sign_of(j); });
    if (!ok) return false;
  }
  return true;
}

int rows_needed(const IsingModel& logical, const std::vector<std::vector<int>>& rows) {
  const int n = logical.size();
  const Grid roomy{static_cast<int>(rows.size()), n};
  for (int used = 1; used <= static_cast<int>(rows.size()); ++used) {
    if (satisfied(logical, contacts(rows, used, roomy))) return used;
  }
  return static_cast<int>(rows.size());
}

}  // namespace

Grid required_lattice(const IsingModel& logical) {
  if (logical.size() < 1) throw Error(ErrorKind::invalid_input, "logical problem needs at least one spin");
  const auto rows = transposition_network(logical.size());
  return Grid{rows_needed(logical, rows), logical.size()};
}

Embedding embed_complete_graph(const IsingModel& logical, const Grid& lattice, double margin) {
  logical.validate();
  const int n = logical.size();
  if (n < 1) throw Error(ErrorKind::invalid_input, "logical problem needs at least one spin");
  const auto network = transposition_network(n);
  const int used = rows_needed(logical, network);
  if (lattice.rows < used || lattice.cols < n) {
    throw Error(ErrorKind::capacity, "problem needs a " + std::to_string(used) + "x" + std::to_string(n) +
                                         " lattice, got " + std::to_string(lattice.rows) + "x" +
                                         std::to_string(lattice.cols));
  }

  Embedding emb;
  emb.grid = lattice;
  emb.logical_size = n;
  emb.chains.assign(n, {});
  emb.signs.assign(lattice.size(), 0);
  emb.cell_qubit.assign(lattice.size(), -1);
  std::vector<int> owner(lattice.size(), -1);
  for (int r = 0; r < used; ++r) {
    for (int c = 0; c < n; ++c) {
      const int cell = lattice.index(r, c);
      emb.chains[network[r][c]].push_back(cell);
      emb.signs[cell] = row_sign(r);
      owner[cell] = network[r][c];
    }
  }
  for (int cell = 0; cell < lattice.size(); ++cell) {
    if (owner[cell] < 0) continue;
    emb.cell_qubit[cell] = emb.physical_size();
    emb.physical_cells.push_back(cell);
  }

  // First gap in enumeration order with the right sign product carries the edge.
  const auto found = contacts(network, used, lattice);
  std::set<std::pair<Bond, int>> tunable;
  std::map<std::pair<Bond, int>, std::pair<int, int>> edge_of;
  for (const auto& [key, j] : logical.couplings()) {
    for (const auto& contact : found.at(key)) {
      if (contact.sign_product != sign_of(j)) continue;
      const auto id = std::make_pair(contact.gap.bond, lattice.index(contact.gap.i, contact.gap.j));
      tunable.insert(id);
      edge_of[id] = key;
      break;
    }
  }

  for (const Gap& gap : enumerate_gaps(lattice)) {
    auto [p, q] = gap.endpoints();
    const int a = owner[lattice.index(p.first, p.second)];
    const int b = owner[lattice.index(q.first, q.second)];
    BondAssignment bond{gap, BondType::absent, -1, -1};
    const auto id = std::make_pair(gap.bond, lattice.index(gap.i, gap.j));
    if (a >= 0 && a == b) {
      bond = {gap, BondType::fixed, a, a};
    } else if (tunable.count(id)) {
      const auto [lo, hi] = edge_of.at(id);
      bond = {gap, BondType::tunable, lo, hi};
    }
    emb.bonds.push_back(bond);
  }
  emb.chain_strengths = chain_strengths(logical, margin);
  return emb;
}

GapMap LayoutMask::gap_map() const {
  GapMap map(grid, GapMaterial::air, GapMaterial::air);
  for (const auto& [gap, directive] : gaps) {
    map.set(gap, directive == LayoutDirective::air_gap ? GapMaterial::air : GapMaterial::oxide);
  }
  return map;
}

Compiled compile_physical(const Embedding& emb, const IsingModel& logical) {
  if (logical.size() != emb.logical_size) {
    throw Error(ErrorKind::size_mismatch, "logical problem does not match the embedding");
  }
  const Grid& grid = emb.grid;
  IsingModel physical(emb.physical_size(), logical.unit());
  LayoutMask layout{grid, {}};
  std::set<std::pair<int, int>> realised;

  for (const auto& bond : emb.bonds) {
    auto [p, q] = bond.gap.endpoints();
    const int cp = grid.index(p.first, p.second);
    const int cq = grid.index(q.first, q.second);
    switch (bond.type) {
      case BondType::fixed:
        physical.set_coupling(emb.cell_qubit[cp], emb.cell_qubit[cq], emb.chain_strengths[bond.chain_a]);
        layout.gaps.emplace_back(bond.gap, LayoutDirective::oxide);
        break;
      case BondType::tunable: {
        const double j = logical.coupling(bond.chain_a, bond.chain_b);
        physical.set_coupling(emb.cell_qubit[cp], emb.cell_qubit[cq], emb.signs[cp] * emb.signs[cq] * j);
        realised.insert({bond.chain_a, bond.chain_b});
        layout.gaps.emplace_back(bond.gap, LayoutDirective::control_qubit);
        break;
      }
      case BondType::absent:
        layout.gaps.emplace_back(bond.gap, LayoutDirective::air_gap);
        break;
    }
  }
  for (const auto& [key, j] : logical.couplings()) {
    if (!realised.count(key)) {
      throw Error(ErrorKind::embedding_incomplete, "logical edge (" + std::to_string(key.first) + "," +
                                                       std::to_string(key.second) + ") has no tunable gap");
    }
  }
  for (int a = 0; a < logical.size(); ++a) {
    const auto& chain = emb.chains[a];
    const double share = logical.field(a) / static_cast<double>(chain.size());
    for (int cell : chain) physical.set_field(emb.cell_qubit[cell], emb.signs[cell] * share);
  }
  return {std::move(physical), std::move(layout)};
}

Decoded decode(const Embedding& emb, std::span<const int> physical_spins) {
  if (static_cast<int>(physical_spins.size()) != emb.physical_size()) {
    throw Error(ErrorKind::size_mismatch, "physical spin vector does not cover the chain sites");
  }
  Decoded out{Spins(emb.logical_size), std::vector<bool>(emb.logical_size)};
  for (int a = 0; a < emb.logical_size; ++a) {
    int up = 0;
    int down = 0;
    for (int cell : emb.chains[a]) {
      (emb.signs[cell] * physical_spins[emb.cell_qubit[cell]] > 0 ? up : down)++;
    }
    out.logical[a] = up >= down ? 1 : -1;
    out.intact[a] = up == 0 || down == 0;
  }
  return out;
}

Spins encode(const Embedding& emb, std::span<const int> logical) {
  if (static_cast<int>(logical.size()) != emb.logical_size) {
    throw Error(ErrorKind::size_mismatch, "logical spin vector does not match the embedding");
  }
  Spins out(emb.physical_size());
  for (int a = 0; a < emb.logical_size; ++a) {
    for (int cell : emb.chains[a]) out[emb.cell_qubit[cell]] = emb.signs[cell] * logical[a];
  }
  return out;
}

namespace {

bool king_adjacent(const Grid& grid, int a, int b) {
  auto [ia, ja] = grid.cell(a);
  auto [ib, jb] = grid.cell(b);
  return a != b && std::abs(ia - ib) <= 1 && std::abs(ja - jb) <= 1;
}

}  // namespace

VerificationReport verify_embedding(const Embedding& emb, const IsingModel& logical, const IsingModel& physical) {
  VerificationReport report;
  auto fail = [&](std::string message) { report.violations.push_back(std::move(message)); };
  const Grid& grid = emb.grid;

  if (logical.size() != emb.logical_size || static_cast<int>(emb.chains.size()) != emb.logical_size) {
    fail("logical size does not match the embedding");
    return report;
  }
  if (physical.size() != emb.physical_size()) {
    fail("physical model size does not match the chain sites");
    return report;
  }

  // Chains: disjoint connected paths with alternating signs.
  std::vector<int> owner(grid.size(), -1);
  for (int a = 0; a < emb.logical_size; ++a) {
    const auto& chain = emb.chains[a];
    if (chain.empty()) fail("chain " + std::to_string(a) + " is empty");
    for (std::size_t k = 0; k < chain.size(); ++k) {
      const int cell = chain[k];
      if (cell < 0 || cell >= grid.size()) {
        fail("chain " + std::to_string(a) + " leaves the lattice");
        continue;
      }
      if (owner[cell] >= 0) fail("cell " + std::to_string(cell) + " is shared by two chains");
      owner[cell] = a;
      const int expected = (k % 2 == 0 ? 1 : -1) * emb.signs[chain.front()];
      if (emb.signs[cell] != expected) fail("chain " + std::to_string(a) + " signs do not alternate");
      if (k > 0 && !king_adjacent(grid, chain[k - 1], cell)) {
        fail("chain " + std::to_string(a) + " is not a connected path");
      }
    }
  }

  // Bond types and the layout mask derived from them.
  std::map<std::pair<int, int>, int> tunable_count;
  for (const auto& bond : emb.bonds) {
    auto [p, q] = bond.gap.endpoints();
    const int cp = grid.index(p.first, p.second);
    const int cq = grid.index(q.first, q.second);
    const int a = owner[cp];
    const int b = owner[cq];
    const std::string where = std::string(to_string(bond.gap.bond)) + "(" + std::to_string(bond.gap.i) + "," +
                              std::to_string(bond.gap.j) + ")";
    const bool consecutive = a >= 0 && a == b;
    if (consecutive != (bond.type == BondType::fixed)) fail("gap " + where + " fixed/intra-chain mismatch");
    if (bond.type == BondType::tunable) {
      if (a < 0 || b < 0 || std::minmax(a, b) != std::minmax(bond.chain_a, bond.chain_b)) {
        fail("tunable gap " + where + " does not join the chains of its logical edge");
      } else {
        tunable_count[{std::min(a, b), std::max(a, b)}]++;
      }
    }
    const double value = (a >= 0 && b >= 0) ? physical.coupling(emb.cell_qubit[cp], emb.cell_qubit[cq]) : 0.0;
    if (value < 0.0) fail("gap " + where + " carries a ferromagnetic coupling");
    if (bond.type == BondType::absent && value != 0.0) fail("absent gap " + where + " carries a coupling");
  }
  for (const auto& [key, j] : logical.couplings()) {
    const int count = tunable_count.count(key) ? tunable_count.at(key) : 0;
    if (count != 1) {
      fail("logical edge (" + std::to_string(key.first) + "," + std::to_string(key.second) + ") has " +
           std::to_string(count) + " tunable gaps");
    }
  }

  // Chain-strength condition, checked on the stored J_F and on the hardware.
  for (int a = 0; a < emb.logical_size; ++a) {
    double bound = std::abs(logical.field(a));
    for (const auto& [b, j] : logical.neighbours(a)) bound += std::abs(j);
    if (bound == 0.0) {
      report.degenerate_chains.push_back(a);
      continue;
    }
    auto check = [&](double strength, const std::string& what) {
      if (strength < bound) {
        fail("chain " + std::to_string(a) + " " + what + " below the chain-strength bound");
      } else if (!(strength > bound)) {
        fail("chain " + std::to_string(a) + " " + what + " equals the bound (non-strict)");
      }
    };
    check(emb.chain_strengths[a], "J_F");
    const auto& chain = emb.chains[a];
    for (std::size_t k = 1; k < chain.size(); ++k) {
      check(physical.coupling(emb.cell_qubit[chain[k - 1]], emb.cell_qubit[chain[k]]), "intra-chain coupling");
    }
  }

  if (report.ok() && physical.size() <= max_bruteforce_spins) {
    report.ground_states_checked = true;
    const auto logical_ground = ground_states_bruteforce(logical);
    const auto physical_ground = ground_states_bruteforce(physical);
    std::set<Spins> expected(logical_ground.states.begin(), logical_ground.states.end());
    std::set<Spins> decoded;
    for (const auto& state : physical_ground.states) {
      const auto d = decode(emb, state);
      for (int a = 0; a < emb.logical_size; ++a) {
        const bool degenerate = std::find(report.degenerate_chains.begin(), report.degenerate_chains.end(), a) !=
                                report.degenerate_chains.end();
        if (!d.intact[a] && !degenerate) {
          fail("a physical ground state breaks chain " + std::to_string(a));
          break;
        }
      }
      if (!expected.count(d.logical)) fail("a physical ground state decodes outside the logical ground set");
      decoded.insert(d.logical);
    }
    report.decoded_ground_set_matches = decoded == expected;
    if (!report.decoded_ground_set_matches) fail("decoded ground set differs from the logical ground set");
  }
  return report;
}

}  // namespace fga::embed
