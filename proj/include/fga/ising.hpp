#pragma once

#include <map>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace fga {

enum class EnergyUnit {
  e2_per_farad,  // (charge in e)^2 / (capacitance in F)
  ev,
  algorithmic,   // dimensionless problem units
};

std::string_view to_string(EnergyUnit unit);

/// H(s) = sum_{i<j} J_ij s_i s_j + sum_i h_i s_i with s_i in {-1, +1}.
/// s = -1 is the lower occupation |n>, s = +1 is |n+1>.
class IsingModel {
 public:
  using Key = std::pair<int, int>;

  IsingModel() = default;
  explicit IsingModel(int n, EnergyUnit unit = EnergyUnit::algorithmic);

  int size() const { return n_; }
  EnergyUnit unit() const { return unit_; }

  /// Stores J for the unordered pair {i, j}; zero removes the entry.
  void set_coupling(int i, int j, double value);
  void add_coupling(int i, int j, double value);
  double coupling(int i, int j) const;
  const std::map<Key, double>& couplings() const { return couplings_; }

  void set_field(int i, double value);
  double field(int i) const { return fields_.at(i); }
  const std::vector<double>& fields() const { return fields_; }

  /// Neighbours of i with their couplings.
  std::vector<std::pair<int, double>> neighbours(int i) const;

  /// Scales every coefficient; returns a model tagged with `unit`.
  IsingModel scaled(double factor, EnergyUnit unit) const;

  /// Sum of |J| plus sum of |h|; used as an energy scale for tolerances.
  double magnitude() const;

  void validate() const;

 private:
  Key key(int i, int j) const;

  int n_ = 0;
  EnergyUnit unit_ = EnergyUnit::algorithmic;
  std::map<Key, double> couplings_;
  std::vector<double> fields_;
};

using Spins = std::vector<int>;

double energy(const IsingModel& model, std::span<const int> spins);

/// Bit q of the basis index is spin q: 0 -> -1, 1 -> +1.
Spins spins_from_index(unsigned long long index, int n);
unsigned long long index_from_spins(std::span<const int> spins);

struct GroundStates {
  double energy = 0.0;
  std::vector<Spins> states;  // lexicographic, -1 before +1
};

inline constexpr int max_bruteforce_spins = 24;

/// Exhaustive minimisation returning every degenerate minimiser.
GroundStates ground_states_bruteforce(const IsingModel& model);

/// Per-qubit annealing parameters.
struct QubitParams {
  std::vector<double> delta;  // transverse amplitude, >= 0
  std::vector<double> field;  // longitudinal contribution

  static QubitParams uniform(int n, double delta);
  int size() const { return static_cast<int>(delta.size()); }
};

/// Reduces a two-dot single-electron Hamiltonian
///   t a^+ b + t^* b^+ a + eps_alpha a^+ a + eps_beta b^+ b
/// to delta = |t| and h = (eps_alpha - eps_beta) / 2, dropping the trace.
/// s = +1 places the electron in the upper dot.
struct DotQubit {
  double delta = 0.0;
  double field = 0.0;
  double offset = 0.0;
};

DotQubit cqd_qubit_params(double tunneling_re, double tunneling_im, double eps_alpha, double eps_beta);
inline DotQubit cqd_qubit_params(double tunneling, double eps_alpha, double eps_beta) {
  return cqd_qubit_params(tunneling, 0.0, eps_alpha, eps_beta);
}

}  // namespace fga
