#include <algorithm>
#include <cmath>
#include <limits>

#include "fga/ising.hpp"
#include "fga/kernels.hpp"

namespace fga::kernels {

FlatIsing FlatIsing::from(const IsingModel& model) {
  FlatIsing flat;
  flat.n = model.size();
  flat.fields = model.fields();
  flat.adjacency.resize(flat.n);
  for (const auto& [key, weight] : model.couplings()) {
    flat.edges.push_back({key.first, key.second, weight});
    flat.adjacency[key.first].emplace_back(key.second, weight);
    flat.adjacency[key.second].emplace_back(key.first, weight);
  }
  return flat;
}

namespace serial {

namespace {
inline double spin(Index state, int q) { return ((state >> q) & 1U) ? 1.0 : -1.0; }
}  // namespace

double state_energy(const FlatIsing& model, Index state) {
  double e = 0.0;
  for (int q = 0; q < model.n; ++q) e += model.fields[q] * spin(state, q);
  for (const auto& edge : model.edges) e += edge.weight * spin(state, edge.a) * spin(state, edge.b);
  return e;
}

void energy_table(const FlatIsing& model, std::span<double> out) {
  for (Index k = 0; k < out.size(); ++k) out[k] = state_energy(model, k);
}

GroundScan ground_scan(const FlatIsing& model, double tolerance) {
  const Index count = Index{1} << model.n;
  double best = std::numeric_limits<double>::infinity();
  for (Index k = 0; k < count; ++k) best = std::min(best, state_energy(model, k));
  GroundScan scan{best, {}};
  for (Index k = 0; k < count; ++k) {
    if (state_energy(model, k) <= best + tolerance) scan.minimizers.push_back(k);
  }
  return scan;
}

void diagonal_phase(std::span<cplx> psi, std::span<const double> diag, double scale) {
  for (std::size_t k = 0; k < psi.size(); ++k) {
    const double phase = -scale * diag[k];
    psi[k] *= cplx(std::cos(phase), std::sin(phase));
  }
}

void x_rotation(std::span<cplx> psi, int qubit, double angle) {
  const double c = std::cos(angle);
  const cplx mis(0.0, -std::sin(angle));
  const Index bit = Index{1} << qubit;
  for (Index k = 0; k < psi.size(); ++k) {
    if (k & bit) continue;
    const cplx a = psi[k];
    const cplx b = psi[k | bit];
    psi[k] = c * a + mis * b;
    psi[k | bit] = mis * a + c * b;
  }
}

void z_flip(std::span<cplx> psi, int qubit) {
  const Index bit = Index{1} << qubit;
  for (Index k = 0; k < psi.size(); ++k) {
    if (k & bit) psi[k] = -psi[k];
  }
}

double norm_squared(std::span<const cplx> psi) {
  double s = 0.0;
  for (const auto& a : psi) s += std::norm(a);
  return s;
}

}  // namespace serial
}  // namespace fga::kernels
