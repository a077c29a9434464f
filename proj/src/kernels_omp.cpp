#include <omp.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "fga/kernels.hpp"

namespace fga::kernels {

namespace omp {

namespace {

inline double spin(Index state, int q) { return ((state >> q) & 1U) ? 1.0 : -1.0; }

// Partial sums are formed over fixed-size blocks and combined in block order,
// so reductions do not depend on the thread count.
constexpr Index reduction_block = 4096;

// Low bits enumerated by Gray code inside one chunk of the state space.
constexpr int gray_bits = 12;

/// Visits every state of chunk `chunk` (high bits fixed, low `low_bits` bits
/// enumerated in Gray order) with its energy.
template <typename Visit>
void visit_chunk(const FlatIsing& model, Index chunk, int low_bits, std::vector<double>& s,
                 Visit&& visit) {
  Index state = chunk << low_bits;
  for (int q = 0; q < model.n; ++q) s[q] = spin(state, q);
  double e = state_energy(model, state);
  visit(state, e);
  const Index count = Index{1} << low_bits;
  for (Index k = 1; k < count; ++k) {
    const int q = std::countr_zero(k);
    double local = model.fields[q];
    for (const auto& [r, w] : model.adjacency[q]) local += w * s[r];
    e -= 2.0 * s[q] * local;
    s[q] = -s[q];
    state ^= Index{1} << q;
    visit(state, e);
  }
}

}  // namespace

double state_energy(const FlatIsing& model, Index state) {
  double e = 0.0;
  for (int q = 0; q < model.n; ++q) e += model.fields[q] * spin(state, q);
  for (const auto& edge : model.edges) e += edge.weight * spin(state, edge.a) * spin(state, edge.b);
  return e;
}

void energy_table(const FlatIsing& model, std::span<double> out) {
  const auto count = static_cast<std::int64_t>(out.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < count; ++k) out[k] = state_energy(model, static_cast<Index>(k));
}

GroundScan ground_scan(const FlatIsing& model, double tolerance) {
  const int low_bits = std::min(model.n, gray_bits);
  const auto chunks = static_cast<std::int64_t>(Index{1} << (model.n - low_bits));

  // Gray-code energies accumulate rounding; candidates are re-evaluated
  // directly before the final comparison.
  double best = std::numeric_limits<double>::infinity();
#pragma omp parallel
  {
    std::vector<double> s(model.n);
    double local_best = std::numeric_limits<double>::infinity();
#pragma omp for schedule(static)
    for (std::int64_t c = 0; c < chunks; ++c) {
      visit_chunk(model, static_cast<Index>(c), low_bits, s,
                  [&](Index, double e) { local_best = std::min(local_best, e); });
    }
#pragma omp critical
    best = std::min(best, local_best);
  }

  const double slack = 4.0 * tolerance;
  std::vector<std::vector<Index>> per_chunk(chunks);
#pragma omp parallel
  {
    std::vector<double> s(model.n);
#pragma omp for schedule(static)
    for (std::int64_t c = 0; c < chunks; ++c) {
      visit_chunk(model, static_cast<Index>(c), low_bits, s, [&](Index state, double e) {
        if (e <= best + slack) per_chunk[c].push_back(state);
      });
    }
  }

  std::vector<std::pair<Index, double>> candidates;
  for (const auto& list : per_chunk) {
    for (Index state : list) candidates.emplace_back(state, state_energy(model, state));
  }
  GroundScan scan;
  scan.energy = std::numeric_limits<double>::infinity();
  for (const auto& [state, e] : candidates) scan.energy = std::min(scan.energy, e);
  for (const auto& [state, e] : candidates) {
    if (e <= scan.energy + tolerance) scan.minimizers.push_back(state);
  }
  std::sort(scan.minimizers.begin(), scan.minimizers.end());
  return scan;
}

void diagonal_phase(std::span<cplx> psi, std::span<const double> diag, double scale) {
  const auto count = static_cast<std::int64_t>(psi.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < count; ++k) {
    const double phase = -scale * diag[k];
    psi[k] *= cplx(std::cos(phase), std::sin(phase));
  }
}

void x_rotation(std::span<cplx> psi, int qubit, double angle) {
  const double c = std::cos(angle);
  const cplx mis(0.0, -std::sin(angle));
  const Index bit = Index{1} << qubit;
  const auto pairs = static_cast<std::int64_t>(psi.size() / 2);
#pragma omp parallel for schedule(static)
  for (std::int64_t p = 0; p < pairs; ++p) {
    // Insert a zero at position `qubit` to get the lower index of the pair.
    const auto up = static_cast<Index>(p);
    const Index lo = ((up >> qubit) << (qubit + 1)) | (up & (bit - 1));
    const cplx a = psi[lo];
    const cplx b = psi[lo | bit];
    psi[lo] = c * a + mis * b;
    psi[lo | bit] = mis * a + c * b;
  }
}

void z_flip(std::span<cplx> psi, int qubit) {
  const Index bit = Index{1} << qubit;
  const auto count = static_cast<std::int64_t>(psi.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < count; ++k) {
    if (static_cast<Index>(k) & bit) psi[k] = -psi[k];
  }
}

double norm_squared(std::span<const cplx> psi) {
  const Index blocks = (psi.size() + reduction_block - 1) / reduction_block;
  std::vector<double> partial(blocks, 0.0);
#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < static_cast<std::int64_t>(blocks); ++b) {
    const Index begin = static_cast<Index>(b) * reduction_block;
    const Index end = std::min<Index>(begin + reduction_block, psi.size());
    double s = 0.0;
    for (Index k = begin; k < end; ++k) s += std::norm(psi[k]);
    partial[b] = s;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace omp

int configure_threads_from_env() {
  if (const char* env = std::getenv("FGA_THREADS")) {
    try {
      const int cap = std::stoi(env);
      if (cap > 0) omp_set_num_threads(cap);
    } catch (const std::exception&) {
      // Ignored: an unparsable cap leaves the runtime default.
    }
  }
  return omp_get_max_threads();
}

}  // namespace fga::kernels
