#include <Eigen/Dense>

#include <cstdint>
#include <string>

#include "fga/capnet.hpp"
#include "fga/error.hpp"
#include "fga/units.hpp"

namespace fga::capnet {

namespace {

// Capacitances are handled in units of this reference to keep the saddle-point
// matrix well conditioned.
constexpr double c_ref = units::attofarad;

struct Capacitor {
  double c = 0.0;  // in c_ref
  int a = -1;      // floating gate holding +q
  int b = -1;      // floating gate holding -q, or -1 for an electrode
  double volts = 0.0;
};

std::vector<Capacitor> collect(const CapacitanceSet& caps, std::span<const CellVoltages> voltages) {
  const Grid& grid = caps.grid;
  std::vector<Capacitor> out;
  auto vcg = [&](int i, int j) { return voltages[grid.index(i, j)].control_gate; };
  auto electrode = [&](double c, int fg, double v) {
    if (c != 0.0) out.push_back({c / c_ref, fg, -1, v});
  };
  auto pair = [&](double c, int a, int b) {
    if (c != 0.0) out.push_back({c / c_ref, a, b, 0.0});
  };
  for (int i = 0; i < grid.rows; ++i) {
    for (int j = 0; j < grid.cols; ++j) {
      const int k = grid.index(i, j);
      const auto& v = voltages[k];
      electrode(caps.A[k], k, v.control_gate);
      electrode(caps.B[k], k, v.substrate);
      electrode(caps.H[k], k, v.source);
      electrode(caps.I[k], k, v.drain);
      if (grid.contains(i, j + 1)) {
        const int r = grid.index(i, j + 1);
        pair(caps.D[k], k, r);
        electrode(caps.F[k], k, vcg(i, j + 1));
        electrode(caps.E[k], r, v.control_gate);
      }
      if (grid.contains(i + 1, j)) {
        const int d = grid.index(i + 1, j);
        pair(caps.L[k], k, d);
        electrode(caps.N[k], k, vcg(i + 1, j));
        electrode(caps.M[k], d, v.control_gate);
      }
      if (grid.contains(i + 1, j + 1)) {
        pair(caps.J[k], k, grid.index(i + 1, j + 1));
        pair(caps.K[k], grid.index(i + 1, j), grid.index(i, j + 1));
      }
    }
  }
  return out;
}

}  // namespace

struct ChargingEnergyOracle::Impl {
  int cells = 0;
  std::vector<Capacitor> capacitors;
  std::vector<double> background;
  // Charges are affine in the constraint right-hand side: q = q_bias + response * rhs.
  Eigen::VectorXd q_bias;
  Eigen::MatrixXd response;

  double energy(std::span<const double> occupation) const {
    Eigen::VectorXd rhs(cells);
    for (int k = 0; k < cells; ++k) rhs[k] = -(occupation[k] + background[k]);
    const Eigen::VectorXd q = q_bias + response * rhs;
    double e = 0.0;
    for (std::size_t c = 0; c < capacitors.size(); ++c) {
      const auto& cap = capacitors[c];
      e += q[c] * q[c] / (2.0 * cap.c);
      if (cap.b < 0) e -= q[c] * cap.volts * c_ref / units::elementary_charge;
    }
    return e / c_ref;
  }
};

ChargingEnergyOracle::ChargingEnergyOracle(const CapacitanceSet& caps, std::span<const CellVoltages> voltages,
                                           std::span<const double> background)
    : impl_(std::make_unique<Impl>()) {
  const int cells = caps.grid.size();
  if (cells > max_oracle_cells) {
    throw Error(ErrorKind::scale, "oracle limited to " + std::to_string(max_oracle_cells) + " cells");
  }
  if (static_cast<int>(voltages.size()) != cells || static_cast<int>(background.size()) != cells) {
    throw Error(ErrorKind::size_mismatch, "oracle inputs do not cover the lattice");
  }
  impl_->cells = cells;
  impl_->capacitors = collect(caps, voltages);
  impl_->background.assign(background.begin(), background.end());

  const auto& capacitors = impl_->capacitors;
  const int nq = static_cast<int>(capacitors.size());
  const int n = nq + cells;
  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd drive = Eigen::VectorXd::Zero(n);
  for (int c = 0; c < nq; ++c) {
    const auto& cap = capacitors[c];
    kkt(c, c) = 1.0 / cap.c;
    kkt(nq + cap.a, c) = 1.0;
    kkt(c, nq + cap.a) = 1.0;
    if (cap.b >= 0) {
      kkt(nq + cap.b, c) = -1.0;
      kkt(c, nq + cap.b) = -1.0;
    } else {
      drive[c] = cap.volts * c_ref / units::elementary_charge;
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
  if (lu.rank() < n) {
    throw Error(ErrorKind::oracle_failure,
                "charge constraints are singular; some floating gate is not connected to any electrode");
  }
  impl_->q_bias = lu.solve(drive).head(nq);
  Eigen::MatrixXd unit = Eigen::MatrixXd::Zero(n, cells);
  for (int k = 0; k < cells; ++k) unit(nq + k, k) = 1.0;
  impl_->response = lu.solve(unit).topRows(nq);
}

ChargingEnergyOracle::~ChargingEnergyOracle() = default;
ChargingEnergyOracle::ChargingEnergyOracle(ChargingEnergyOracle&&) noexcept = default;
ChargingEnergyOracle& ChargingEnergyOracle::operator=(ChargingEnergyOracle&&) noexcept = default;

double ChargingEnergyOracle::energy(std::span<const double> occupation) const {
  if (static_cast<int>(occupation.size()) != impl_->cells) {
    throw Error(ErrorKind::size_mismatch, "occupation does not cover the lattice");
  }
  return impl_->energy(occupation);
}

int ChargingEnergyOracle::cells() const { return impl_->cells; }

namespace {

// Fixed charge that reproduces an explicit n_G on top of the bias-induced charge.
std::vector<double> spec_background(const LatticeSpec& spec, const CapacitanceSet& caps) {
  const auto offsets = gate_offset(spec, caps);
  const auto induced = induced_charge(caps, spec.voltages);
  std::vector<double> b(offsets.q0.size());
  for (std::size_t k = 0; k < b.size(); ++k) b[k] = offsets.q0[k] - induced[k];
  return b;
}

}  // namespace

double oracle_charging_energy(const LatticeSpec& spec, std::span<const int> occupation) {
  const auto caps = build_capacitances(spec);
  const auto background = spec_background(spec, caps);
  ChargingEnergyOracle oracle(caps, spec.voltages, background);
  std::vector<double> n(occupation.begin(), occupation.end());
  return oracle.energy(n);
}

IsingModel oracle_ising_extract(const CapacitanceSet& caps, std::span<const CellVoltages> voltages,
                                std::span<const double> background, std::span<const int> base_occupation) {
  const int cells = caps.grid.size();
  if (cells > max_walsh_cells) {
    throw Error(ErrorKind::scale, "Walsh extraction limited to " + std::to_string(max_walsh_cells) + " cells");
  }
  if (static_cast<int>(base_occupation.size()) != cells) {
    throw Error(ErrorKind::size_mismatch, "base occupation does not cover the lattice");
  }
  const ChargingEnergyOracle oracle(caps, voltages, background);
  const auto count = static_cast<std::int64_t>(1) << cells;
  std::vector<double> table(count);
#pragma omp parallel
  {
    std::vector<double> n(cells);
#pragma omp for schedule(static)
    for (std::int64_t m = 0; m < count; ++m) {
      for (int k = 0; k < cells; ++k) n[k] = base_occupation[k] + ((m >> k) & 1);
      table[m] = oracle.energy(n);
    }
  }

  auto s = [](std::int64_t m, int k) { return ((m >> k) & 1) ? 1.0 : -1.0; };
  const double norm = 1.0 / static_cast<double>(count);
  IsingModel model(cells, EnergyUnit::e2_per_farad);
  for (int i = 0; i < cells; ++i) {
    double h = 0.0;
    for (std::int64_t m = 0; m < count; ++m) h += table[m] * s(m, i);
    model.set_field(i, h * norm);
    for (int j = i + 1; j < cells; ++j) {
      double jij = 0.0;
      for (std::int64_t m = 0; m < count; ++m) jij += table[m] * s(m, i) * s(m, j);
      model.set_coupling(i, j, jij * norm);
    }
  }
  return model;
}

IsingModel oracle_ising_extract(const LatticeSpec& spec) {
  const auto caps = build_capacitances(spec);
  const auto background = spec_background(spec, caps);
  return oracle_ising_extract(caps, spec.voltages, background, spec.base_occupation);
}

}  // namespace fga::capnet
