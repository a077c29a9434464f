#include "fga/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>

#include "fga/annealer.hpp"
#include "fga/capnet.hpp"
#include "fga/embedder.hpp"
#include "fga/error.hpp"
#include "fga/io.hpp"
#include "fga/ising.hpp"
#include "fga/units.hpp"

namespace fga::cli {

using io::json;

namespace {

const std::filesystem::path& require(const std::optional<std::filesystem::path>& path, const char* flag) {
  if (!path) throw Error(ErrorKind::invalid_input, std::string("missing required option ") + flag);
  return *path;
}

json spins_json(const Spins& s) { return io::spin_string(s); }

json ground_json(const GroundStates& g) {
  json states = json::array();
  for (const auto& s : g.states) states.push_back(spins_json(s));
  return {{"energy", g.energy}, {"states", states}};
}

// ---------------------------------------------------------------------------

std::vector<Artifact> run_extract(const RunConfig& cfg) {
  const auto spec = io::parse_lattice(io::read_json_file(require(cfg.lattice, "--lattice")));
  const auto extraction = capnet::extract(spec);
  return {{"extraction.json", io::dump(io::to_json(extraction))}};
}

std::vector<Artifact> run_sweep_uh(const RunConfig& cfg) {
  CellGeometry base;
  if (cfg.lattice) base = io::parse_lattice(io::read_json_file(*cfg.lattice)).geometry;
  std::vector<double> lengths;
  for (int l = 5; l <= 30; ++l) lengths.push_back(l);
  const std::vector<double> heights{10.0, 100.0};
  const std::vector<double> oxides{2.0, 4.0, 8.0};
  const auto points = capnet::air_gap_sweep(base, lengths, heights, oxides);

  io::CsvWriter csv({"L_nm", "Z_nm", "d_ox_nm", "material", "U_h_eV", "air_over_oxide"});
  for (const auto& p : points) {
    const auto ratio = io::format_double(p.u_h_air_ev / p.u_h_oxide_ev);
    for (const auto& [name, value] : {std::pair{"oxide", p.u_h_oxide_ev}, std::pair{"air", p.u_h_air_ev}}) {
      csv.row({io::format_double(p.length_nm), io::format_double(p.height_nm), io::format_double(p.oxide_nm), name,
               io::format_double(value), ratio});
    }
  }
  return {{"sweep_uh.csv", csv.str()}};
}

std::vector<Artifact> run_tunnel(const RunConfig& cfg) {
  if (cfg.points < 2) throw Error(ErrorKind::invalid_input, "--points must be at least 2");
  cfg.barrier.validate();
  const double fermi = tunneling::fermi_energy(cfg.barrier.doping_cm3, cfg.barrier.m_si_ratio);
  io::CsvWriter csv({"V_CG", "E_F_prime_eV", "delta_eV"});
  for (int k = 0; k < cfg.points; ++k) {
    const double v = cfg.v_min + (cfg.v_max - cfg.v_min) * k / (cfg.points - 1);
    csv.row({io::format_double(v), io::format_double(fermi + v),
             io::format_double(tunneling::wkb_delta(cfg.barrier, v))});
  }
  return {{"tunnel.csv", csv.str()}};
}

Grid lattice_for(const RunConfig& cfg, const IsingModel& logical) {
  if (cfg.lattice) return io::parse_lattice(io::read_json_file(*cfg.lattice)).grid;
  return embed::required_lattice(logical);
}

json verification_json(const embed::VerificationReport& report) {
  return {{"violations", report.violations},
          {"degenerate_chains", report.degenerate_chains},
          {"ground_states_checked", report.ground_states_checked},
          {"decoded_ground_set_matches", report.decoded_ground_set_matches}};
}

std::vector<Artifact> run_embed(const RunConfig& cfg) {
  const auto logical = io::parse_problem(io::read_json_file(require(cfg.problem, "--problem")));
  const auto emb = embed::embed_complete_graph(logical, lattice_for(cfg, logical), cfg.margin);
  const auto compiled = embed::compile_physical(emb, logical);
  const auto report = embed::verify_embedding(emb, logical, compiled.physical);
  json doc = io::to_json(emb);
  doc["verification"] = verification_json(report);
  return {{"embedding.json", io::dump(doc)},
          {"layout.json", io::dump(io::to_json(compiled.layout))},
          {"physical_problem.json", io::dump(io::to_json(compiled.physical))}};
}

double unit_ev(const IsingModel& model, double algorithmic_ev) {
  switch (model.unit()) {
    case EnergyUnit::ev: return 1.0;
    case EnergyUnit::e2_per_farad: return units::e2_per_farad_to_ev;
    case EnergyUnit::algorithmic: return algorithmic_ev;
  }
  return 1.0;
}

anneal::EvolveOptions evolve_options(const RunConfig& cfg, double energy_unit_ev) {
  anneal::EvolveOptions opt;
  opt.shots = cfg.shots;
  opt.seed = cfg.seed;
  if (cfg.t2_seconds) {
    if (!(*cfg.t2_seconds > 0.0)) throw Error(ErrorKind::invalid_input, "--t2-seconds must be positive");
    opt.t2 = units::seconds_to_internal(*cfg.t2_seconds, energy_unit_ev);
  }
  return opt;
}

std::vector<Artifact> run_anneal(const RunConfig& cfg) {
  const auto model = io::parse_problem(io::read_json_file(require(cfg.problem, "--problem")));
  const auto qubits = QubitParams::uniform(model.size(), cfg.delta);
  const auto options = evolve_options(cfg, unit_ev(model, cfg.energy_unit_ev));

  std::optional<GroundStates> ground;
  if (model.size() <= max_bruteforce_spins) ground = ground_states_bruteforce(model);
  std::optional<anneal::GapResult> gap;
  if (cfg.gap || !cfg.sweep.empty()) {
    gap = anneal::spectral_gap(model, qubits, anneal::Schedule{}, cfg.grid);
  }

  const auto result = anneal::evolve(model, qubits, anneal::Schedule::linear_dt(cfg.anneal_time, cfg.max_dt), options);
  json doc = io::to_json(result);
  doc["unit"] = std::string(to_string(model.unit()));
  doc["delta"] = cfg.delta;
  doc["seed"] = cfg.seed;
  if (ground) {
    doc["bruteforce"] = ground_json(*ground);
    doc["success_probability"] = anneal::success_probability(result, ground->states);
    doc["success_frequency"] = anneal::success_probability(result, ground->states, anneal::Source::samples);
  }
  if (gap) doc["min_gap"] = {{"gap", gap->min_gap}, {"s", gap->s_at_min}};
  std::vector<Artifact> out{{"anneal.json", io::dump(doc)}};

  if (!cfg.sweep.empty()) {
    if (!ground) throw Error(ErrorKind::scale, "T-sweep needs a brute-force reference");
    io::CsvWriter csv({"T", "P_success", "min_gap"});
    for (double t : cfg.sweep) {
      const auto r = anneal::evolve(model, qubits, anneal::Schedule::linear_dt(t, cfg.max_dt), options);
      csv.row({io::format_double(t), io::format_double(anneal::success_probability(r, ground->states)),
               io::format_double(gap->min_gap)});
    }
    out.push_back({"anneal_sweep.csv", csv.str()});
  }
  return out;
}

std::vector<Artifact> run_pipeline(const RunConfig& cfg) {
  const auto problem = io::parse_problem(io::read_json_file(require(cfg.problem, "--problem")));
  const IsingModel logical = problem.scaled(1.0, EnergyUnit::algorithmic);

  LatticeSpec hardware;
  Grid grid = embed::required_lattice(logical);
  if (cfg.lattice) {
    hardware = io::parse_lattice(io::read_json_file(*cfg.lattice));
    grid = hardware.grid;
  } else {
    hardware = LatticeSpec::uniform(grid.rows, grid.cols, CellGeometry{});
  }

  const auto emb = embed::embed_complete_graph(logical, grid, cfg.margin);
  const auto compiled = embed::compile_physical(emb, logical);
  const auto report = embed::verify_embedding(emb, logical, compiled.physical);

  // The layout decides which gaps keep their oxide fill.
  hardware.gaps = compiled.layout.gap_map();
  const auto extraction = capnet::extract(hardware);
  double fixed_min = std::numeric_limits<double>::infinity();
  double fixed_max = 0.0;
  double tunable_max = 0.0;
  for (const auto& bond : emb.bonds) {
    if (bond.type == embed::BondType::absent) continue;
    auto [p, q] = bond.gap.endpoints();
    const double j = extraction.model.coupling(grid.index(p.first, p.second), grid.index(q.first, q.second));
    if (bond.type == embed::BondType::fixed) {
      fixed_min = std::min(fixed_min, j);
      fixed_max = std::max(fixed_max, j);
    } else {
      tunable_max = std::max(tunable_max, j);
    }
  }
  double used_max = std::max(fixed_max, tunable_max);
  if (used_max == 0.0) {
    for (const auto& [key, j] : extraction.model.couplings()) used_max = std::max(used_max, j);
  }
  tunneling::BarrierParams barrier = cfg.barrier;
  barrier.length = hardware.geometry.length;
  double mean_vcg = 0.0;
  for (const auto& v : hardware.voltages) mean_vcg += v.control_gate;
  mean_vcg /= static_cast<double>(hardware.voltages.size());
  const double delta_ev = tunneling::wkb_delta(barrier, mean_vcg);
  double uh_min = *std::min_element(extraction.u_h_ev.begin(), extraction.u_h_ev.end());

  // One algorithmic unit is pinned to the strongest coupling on the hardware.
  double physical_max = 0.0;
  for (const auto& [key, j] : compiled.physical.couplings()) physical_max = std::max(physical_max, std::abs(j));
  for (double h : compiled.physical.fields()) physical_max = std::max(physical_max, std::abs(h));
  const double algorithmic_ev = (used_max > 0.0 && physical_max > 0.0) ? used_max / physical_max : 1.0;

  const auto qubits = QubitParams::uniform(compiled.physical.size(), 1.0);
  const auto options = evolve_options(cfg, algorithmic_ev);
  const auto result =
      anneal::evolve(compiled.physical, qubits, anneal::Schedule::linear_dt(cfg.anneal_time, cfg.max_dt), options);

  // Decoded distribution over logical states, exact and sampled.
  std::map<Spins, double> mass;
  double intact_mass = 0.0;
  for (std::size_t k = 0; k < result.probabilities.size(); ++k) {
    const double pk = result.probabilities[k];
    if (pk == 0.0) continue;
    const auto d = embed::decode(emb, spins_from_index(k, result.n));
    mass[d.logical] += pk;
    if (std::all_of(d.intact.begin(), d.intact.end(), [](bool b) { return b; })) intact_mass += pk;
  }
  std::map<Spins, int> sampled;
  for (const auto& [state, count] : result.histogram) {
    sampled[embed::decode(emb, spins_from_index(state, result.n)).logical] += count;
  }
  auto most = [](const auto& table) {
    auto best = table.begin();
    for (auto it = table.begin(); it != table.end(); ++it) {
      if (it->second > best->second) best = it;
    }
    return best;
  };
  const auto most_probable = most(mass);
  const auto most_frequent = most(sampled);
  Spins best_sampled = sampled.begin()->first;
  for (const auto& [s, count] : sampled) {
    if (energy(logical, s) < energy(logical, best_sampled)) best_sampled = s;
  }

  json doc;
  doc["seed"] = cfg.seed;
  doc["logical"] = io::to_json(problem);
  doc["lattice"] = {{"rows", grid.rows}, {"cols", grid.cols}};
  doc["embedding"] = {{"rows_used", emb.rows_used()},
                      {"physical_qubits", emb.physical_size()},
                      {"chain_strengths", emb.chain_strengths},
                      {"verification", verification_json(report)}};
  doc["hardware"] = {{"fixed_J_eV_min", std::isfinite(fixed_min) ? fixed_min : 0.0},
                     {"fixed_J_eV_max", fixed_max},
                     {"tunable_J_eV_max", tunable_max},
                     {"U_h_eV_min", uh_min},
                     {"delta_wkb_eV", delta_ev},
                     {"delta_over_J", used_max > 0.0 ? delta_ev / used_max : 0.0},
                     {"algorithmic_unit_eV", algorithmic_ev}};
  json anneal_doc = io::to_json(result);
  anneal_doc.erase("histogram");
  anneal_doc["delta"] = 1.0;
  anneal_doc["unit"] = "algorithmic";
  anneal_doc["intact_probability"] = intact_mass;
  doc["anneal"] = anneal_doc;

  json decoded = {{"most_probable", {{"spins", spins_json(most_probable->first)},
                                     {"probability", most_probable->second},
                                     {"energy", energy(logical, most_probable->first)}}},
                  {"most_frequent", {{"spins", spins_json(most_frequent->first)},
                                     {"count", most_frequent->second},
                                     {"energy", energy(logical, most_frequent->first)}}},
                  {"best_sampled", {{"spins", spins_json(best_sampled)}, {"energy", energy(logical, best_sampled)}}}};
  doc["decoded"] = decoded;
  if (logical.size() <= max_bruteforce_spins) {
    const auto ground = ground_states_bruteforce(logical);
    doc["bruteforce"] = ground_json(ground);
    const std::set<Spins> targets(ground.states.begin(), ground.states.end());
    doc["matches_bruteforce"] = targets.count(most_probable->first) == 1;
    double ground_mass = 0.0;
    for (const auto& s : targets) {
      if (mass.count(s)) ground_mass += mass.at(s);
    }
    doc["decoded_ground_probability"] = ground_mass;
  }

  json emb_doc = io::to_json(emb);
  emb_doc["verification"] = verification_json(report);
  return {{"pipeline.json", io::dump(doc)},
          {"embedding.json", io::dump(emb_doc)},
          {"layout.json", io::dump(io::to_json(compiled.layout))},
          {"extraction.json", io::dump(io::to_json(extraction))},
          {"physical_problem.json", io::dump(io::to_json(compiled.physical))}};
}

}  // namespace

std::vector<Artifact> run(const RunConfig& cfg) {
  if (cfg.command == "extract") return run_extract(cfg);
  if (cfg.command == "sweep-uh") return run_sweep_uh(cfg);
  if (cfg.command == "tunnel") return run_tunnel(cfg);
  if (cfg.command == "embed") return run_embed(cfg);
  if (cfg.command == "anneal") return run_anneal(cfg);
  if (cfg.command == "pipeline") return run_pipeline(cfg);
  throw Error(ErrorKind::invalid_input, "unknown subcommand '" + cfg.command + "'");
}

void write_artifacts(const std::filesystem::path& dir, const std::vector<Artifact>& artifacts) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::io, "cannot create " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> staged;
  auto cleanup = [&] {
    for (const auto& p : staged) std::filesystem::remove(p, ec);
  };
  for (const auto& a : artifacts) {
    const auto tmp = dir / (a.name + ".partial");
    staged.push_back(tmp);
    std::ofstream out(tmp, std::ios::binary);
    out << a.content;
    out.close();
    if (!out) {
      cleanup();
      throw Error(ErrorKind::io, "cannot write " + tmp.string());
    }
  }
  for (std::size_t k = 0; k < artifacts.size(); ++k) {
    std::filesystem::rename(staged[k], dir / artifacts[k].name, ec);
    if (ec) {
      cleanup();
      for (std::size_t m = 0; m < k; ++m) std::filesystem::remove(dir / artifacts[m].name, ec);
      throw Error(ErrorKind::io, "cannot move " + artifacts[k].name + " into place");
    }
  }
}

}  // namespace fga::cli
