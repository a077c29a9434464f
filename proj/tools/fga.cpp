// Command-line front end: fga <subcommand> [options]

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>

#include "fga/annealer.hpp"
#include "fga/commands.hpp"
#include "fga/error.hpp"
#include "fga/kernels.hpp"

namespace {

int report(const std::string& kind, const std::string& message, int code) {
  nlohmann::json err = {{"error", kind}, {"message", message}};
  std::cerr << err.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  fga::kernels::configure_threads_from_env();
  fga::cli::RunConfig cfg;
  CLI::App app{"Floating-gate qubit array toolchain"};
  app.require_subcommand(1);

  auto lattice = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--lattice", cfg.lattice, "Lattice JSON")->check(CLI::ExistingFile);
    if (required) opt->required();
  };
  auto problem = [&](CLI::App* sub) {
    sub->add_option("--problem", cfg.problem, "Problem JSON")->check(CLI::ExistingFile)->required();
  };
  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.out, "Output directory (default: primary artifact to stdout)");
  };
  std::string t2_text;
  std::vector<CLI::Option*> t2_options;
  auto annealing = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
    sub->add_option("--anneal-time", cfg.anneal_time, "Anneal time in hbar per energy unit")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sub->add_option("--max-dt", cfg.max_dt, "Largest integration step")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--shots", cfg.shots, "Measurement shots")->capture_default_str()->check(CLI::NonNegativeNumber);
    t2_options.push_back(sub->add_option("--t2-seconds", t2_text, "Enable dephasing; T2 defaults to 4.8e-7 s")
                             ->expected(0, 1));
    sub->add_option("--grid", cfg.grid, "Points on the s-grid for gap diagnostics")->capture_default_str();
  };

  auto* extract = app.add_subcommand("extract", "Lattice geometry to Ising couplings, fields and U_h");
  lattice(extract, true);
  common(extract);

  auto* sweep = app.add_subcommand("sweep-uh", "U_h for oxide versus air diagonal gaps");
  lattice(sweep, false);
  common(sweep);

  auto* tunnel = app.add_subcommand("tunnel", "WKB tunneling amplitude versus control-gate bias");
  common(tunnel);
  double d_ox_nm = cfg.barrier.oxide_thickness * 1e9;
  double length_nm = cfg.barrier.length * 1e9;
  tunnel->add_option("--d-ox-nm", d_ox_nm, "Barrier thickness")->capture_default_str();
  tunnel->add_option("--length-nm", length_nm, "Confinement length")->capture_default_str();
  tunnel->add_option("--v-ox", cfg.barrier.barrier_ev, "Barrier height (eV)")->capture_default_str();
  tunnel->add_option("--m-ox", cfg.barrier.m_ox_ratio, "Oxide effective mass ratio")->capture_default_str();
  tunnel->add_option("--m-si", cfg.barrier.m_si_ratio, "Silicon effective mass ratio")->capture_default_str();
  tunnel->add_option("--n-left", cfg.barrier.n_left, "N_L")->capture_default_str();
  tunnel->add_option("--n-right", cfg.barrier.n_right, "N_R")->capture_default_str();
  tunnel->add_option("--doping", cfg.barrier.doping_cm3, "Donor density (cm^-3)")->capture_default_str();
  tunnel->add_option("--v-min", cfg.v_min, "First V_CG")->capture_default_str();
  tunnel->add_option("--v-max", cfg.v_max, "Last V_CG")->capture_default_str();
  tunnel->add_option("--points", cfg.points, "Number of bias points")->capture_default_str();

  auto* embed = app.add_subcommand("embed", "Compile a logical problem onto the lattice");
  problem(embed);
  lattice(embed, false);
  common(embed);
  embed->add_option("--margin", cfg.margin, "Chain-strength margin")->capture_default_str();

  auto* anneal = app.add_subcommand("anneal", "State-vector anneal of an Ising problem");
  problem(anneal);
  common(anneal);
  annealing(anneal);
  anneal->add_option("--delta", cfg.delta, "Transverse amplitude per qubit")->capture_default_str();
  anneal->add_option("--energy-unit-ev", cfg.energy_unit_ev, "eV per unit for algorithmic problems")
      ->capture_default_str();
  anneal->add_flag("--gap", cfg.gap, "Report the minimum spectral gap");
  anneal->add_option("--sweep", cfg.sweep, "Anneal times for a T-sweep CSV")->delimiter(',');

  auto* pipeline = app.add_subcommand("pipeline", "Embed, extract hardware parameters, anneal and decode");
  problem(pipeline);
  lattice(pipeline, false);
  common(pipeline);
  annealing(pipeline);
  pipeline->add_option("--margin", cfg.margin, "Chain-strength margin")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report("usage", e.what(), 2);
  }

  cfg.command = app.get_subcommands().front()->get_name();
  for (const auto* opt : t2_options) {
    if (opt->count() == 0) continue;
    try {
      cfg.t2_seconds = t2_text.empty() ? fga::anneal::default_t2_seconds : std::stod(t2_text);
    } catch (const std::exception&) {
      return report("usage", "--t2-seconds: not a number: " + t2_text, 2);
    }
  }
  cfg.barrier.oxide_thickness = d_ox_nm * 1e-9;
  cfg.barrier.length = length_nm * 1e-9;
  if (cfg.command == "tunnel") {
    for (const auto& w : cfg.barrier.warnings()) std::cerr << "warning: " << w << "\n";
  }

  try {
    const auto artifacts = fga::cli::run(cfg);
    if (cfg.out) {
      fga::cli::write_artifacts(*cfg.out, artifacts);
    } else {
      std::cout << artifacts.front().content;
    }
  } catch (const fga::Error& e) {
    return report(std::string(fga::to_string(e.kind())), e.what(), 1);
  } catch (const std::exception& e) {
    return report("internal", e.what(), 1);
  }
  return 0;
}
