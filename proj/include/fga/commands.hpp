#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fga/tunneling.hpp"

namespace fga::cli {

inline constexpr std::uint64_t default_seed = 12345;

struct RunConfig {
  std::string command;
  std::optional<std::filesystem::path> lattice;
  std::optional<std::filesystem::path> problem;
  std::optional<std::filesystem::path> out;
  std::uint64_t seed = default_seed;
  double margin = 0.25;
  /// Anneal time in hbar per problem energy unit.
  double anneal_time = 100.0;
  double max_dt = 0.05;
  int shots = 1024;
  std::optional<double> t2_seconds;
  /// Points on the s-grid for gap diagnostics.
  int grid = 201;
  bool gap = false;
  /// Transverse amplitude per qubit for `anneal`, in problem units.
  double delta = 1.0;
  /// eV per problem unit when the problem is in algorithmic units.
  double energy_unit_ev = 1.0;
  /// Anneal times for a T-sweep CSV.
  std::vector<double> sweep;
  // tunnel
  tunneling::BarrierParams barrier;
  double v_min = 0.0;
  double v_max = 2.5;
  int points = 101;
};

struct Artifact {
  std::string name;
  std::string content;
};

/// Runs one subcommand and returns its outputs; nothing touches the disk
/// apart from reading inputs. Throws fga::Error on domain failures.
std::vector<Artifact> run(const RunConfig& config);

/// Writes every artifact into `dir` or none of them.
void write_artifacts(const std::filesystem::path& dir, const std::vector<Artifact>& artifacts);

}  // namespace fga::cli
