#include "fga/ising.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "fga/error.hpp"
#include "fga/kernels.hpp"

namespace fga {

std::string_view to_string(EnergyUnit unit) {
  switch (unit) {
    case EnergyUnit::e2_per_farad: return "e2_per_F";
    case EnergyUnit::ev: return "eV";
    case EnergyUnit::algorithmic: return "algorithmic";
  }
  return "?";
}

IsingModel::IsingModel(int n, EnergyUnit unit) : n_(n), unit_(unit), fields_(std::max(n, 0), 0.0) {
  if (n < 0) throw Error(ErrorKind::invalid_input, "negative qubit count");
}

IsingModel::Key IsingModel::key(int i, int j) const {
  if (i < 0 || j < 0 || i >= n_ || j >= n_) {
    throw Error(ErrorKind::invalid_input,
                "coupling (" + std::to_string(i) + "," + std::to_string(j) + ") out of range");
  }
  if (i == j) throw Error(ErrorKind::invalid_input, "self-coupling on qubit " + std::to_string(i));
  return i < j ? Key{i, j} : Key{j, i};
}

void IsingModel::set_coupling(int i, int j, double value) {
  const auto k = key(i, j);
  if (value == 0.0) {
    couplings_.erase(k);
  } else {
    couplings_[k] = value;
  }
}

void IsingModel::add_coupling(int i, int j, double value) { set_coupling(i, j, coupling(i, j) + value); }

double IsingModel::coupling(int i, int j) const {
  auto it = couplings_.find(key(i, j));
  return it == couplings_.end() ? 0.0 : it->second;
}

void IsingModel::set_field(int i, double value) {
  if (i < 0 || i >= n_) throw Error(ErrorKind::invalid_input, "field index out of range");
  fields_[i] = value;
}

std::vector<std::pair<int, double>> IsingModel::neighbours(int i) const {
  std::vector<std::pair<int, double>> out;
  for (const auto& [k, v] : couplings_) {
    if (k.first == i) out.emplace_back(k.second, v);
    if (k.second == i) out.emplace_back(k.first, v);
  }
  return out;
}

IsingModel IsingModel::scaled(double factor, EnergyUnit unit) const {
  IsingModel out(n_, unit);
  for (const auto& [k, v] : couplings_) out.couplings_[k] = v * factor;
  for (int i = 0; i < n_; ++i) out.fields_[i] = fields_[i] * factor;
  return out;
}

double IsingModel::magnitude() const {
  double m = 0.0;
  for (const auto& [k, v] : couplings_) m += std::abs(v);
  for (double h : fields_) m += std::abs(h);
  return m;
}

void IsingModel::validate() const {
  if (static_cast<int>(fields_.size()) != n_) throw Error(ErrorKind::size_mismatch, "field count != n");
  for (double h : fields_) {
    if (!std::isfinite(h)) throw Error(ErrorKind::invalid_input, "non-finite field");
  }
  for (const auto& [k, v] : couplings_) {
    if (k.first >= k.second || k.first < 0 || k.second >= n_) {
      throw Error(ErrorKind::invalid_input, "coupling key not canonical");
    }
    if (!std::isfinite(v)) throw Error(ErrorKind::invalid_input, "non-finite coupling");
  }
}

double energy(const IsingModel& model, std::span<const int> spins) {
  if (static_cast<int>(spins.size()) != model.size()) {
    throw Error(ErrorKind::size_mismatch, "spin vector has " + std::to_string(spins.size()) +
                                              " entries, model has " + std::to_string(model.size()));
  }
  for (int s : spins) {
    if (s != 1 && s != -1) throw Error(ErrorKind::invalid_input, "spins must be +1 or -1");
  }
  double e = 0.0;
  for (const auto& [k, v] : model.couplings()) e += v * spins[k.first] * spins[k.second];
  for (int i = 0; i < model.size(); ++i) e += model.field(i) * spins[i];
  return e;
}

Spins spins_from_index(unsigned long long index, int n) {
  Spins s(n);
  for (int q = 0; q < n; ++q) s[q] = ((index >> q) & 1ULL) ? 1 : -1;
  return s;
}

unsigned long long index_from_spins(std::span<const int> spins) {
  unsigned long long index = 0;
  for (std::size_t q = 0; q < spins.size(); ++q) {
    if (spins[q] > 0) index |= 1ULL << q;
  }
  return index;
}

GroundStates ground_states_bruteforce(const IsingModel& model) {
  if (model.size() > max_bruteforce_spins) {
    throw Error(ErrorKind::scale, "brute force limited to " + std::to_string(max_bruteforce_spins) +
                                      " spins, model has " + std::to_string(model.size()));
  }
  model.validate();
  const auto flat = kernels::FlatIsing::from(model);
  const double tolerance = 1e-9 * std::max(model.magnitude(), 1e-300);
  const auto scan = kernels::omp::ground_scan(flat, tolerance);
  GroundStates out;
  out.energy = scan.energy;
  for (auto state : scan.minimizers) out.states.push_back(spins_from_index(state, model.size()));
  std::sort(out.states.begin(), out.states.end());
  return out;
}

QubitParams QubitParams::uniform(int n, double delta) {
  QubitParams q;
  q.delta.assign(n, delta);
  q.field.assign(n, 0.0);
  return q;
}

DotQubit cqd_qubit_params(double tunneling_re, double tunneling_im, double eps_alpha, double eps_beta) {
  for (double v : {tunneling_re, tunneling_im, eps_alpha, eps_beta}) {
    if (!std::isfinite(v)) throw Error(ErrorKind::invalid_input, "non-finite dot parameter");
  }
  DotQubit q;
  // The phase of t is removed by rotating the relative phase of the two dot states.
  q.delta = std::abs(std::complex<double>(tunneling_re, tunneling_im));
  q.field = 0.5 * (eps_alpha - eps_beta);
  q.offset = 0.5 * (eps_alpha + eps_beta);
  return q;
}

}  // namespace fga
