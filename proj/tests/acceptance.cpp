// Acceptance gate: one criterion per invocation, one PASS/FAIL line on
// stdout, exit 0/1.  Tolerances are pinned here, not configurable.
//
//   acceptance <criterion 1..8>
//
//   1  single-precision accuracy along a 10^4-step production trajectory
//   2  scheme x width x cache-depth equivalence matrix
//   3  analytic forces vs central finite differences
//   4  NVE conservation: energy drift, force sum, momentum drift
//   5  max-cutoff filter on/off equivalence
//   6  fast-forward fires at most as often as naive lockstep
//   7  vector building blocks vs scalar oracles
//   8  throughput direction of the optimized schemes (non-gating)

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "tmd/engine.hpp"
#include "tmd/neighbor.hpp"
#include "tmd/potential_opt.hpp"
#include "tmd/potential_ref.hpp"
#include "tmd/system.hpp"
#include "tmd/verify.hpp"

using namespace tmd;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double max_force_gap(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max({m, std::abs(a[i].x - b[i].x), std::abs(a[i].y - b[i].y),
                  std::abs(a[i].z - b[i].z)});
  return m;
}

AtomSystem silicon_cells(int cells, double temp, std::uint64_t seed) {
  AtomSystem sys = make_diamond_lattice(cells, cells, cells, 5.431, 0, 28.0855);
  init_velocities(sys, temp, seed);
  return sys;
}

/* 1: per-sample potential energy of the single-precision production pipeline
   stays within 2e-5 relative of a double reference evaluation of the same
   configurations, along a 512-atom, 10^4-step, 300 K trajectory. */
Outcome criterion_1() {
  constexpr double kTol = 2e-5;
  constexpr long kSteps = 10000;
  constexpr long kSampleEvery = 100;

  const ParamTable params = builtin_silicon();
  RunConfig cfg;
  cfg.steps = 0;  // stepped manually
  cfg.dt = 0.001;
  cfg.precision = PrecisionMode::OptS;
  cfg.scheme = Scheme::V2;
  cfg.width = 8;
  Engine engine(silicon_cells(4, 300.0, 2026), params, cfg);

  double worst = 0.0;
  long samples = 0;
  for (long s = 0; s <= kSteps; ++s) {
    if (s % kSampleEvery == 0 || s == kSteps) {
      const NeighborList fresh =
          build_neighbor_list(engine.system(), params.r_cut_max(), 0.0);
      const EnergyForces ref = compute_ref(engine.system(), fresh, params);
      worst = std::max(worst, std::abs(engine.potential_energy() - ref.energy) /
                                  std::abs(ref.energy));
      ++samples;
    }
    if (s < kSteps) engine.step();
  }
  return {worst <= kTol, std::to_string(samples) +
                             " samples over 10^4 steps (512 atoms), max "
                             "relative energy deviation " +
                             sci(worst) + " (limit " + sci(kTol) + ")"};
}

/* 2: every scheme x width x cache depth reproduces compute_ref on 64- and
   512-atom perturbed lattices: energy within 1e-12 relative, forces within
   1e-10 eV/A. */
Outcome criterion_2() {
  constexpr double kETol = 1e-12;
  constexpr double kFTol = 1e-10;

  const ParamTable params = builtin_silicon();
  double worst_e = 0.0, worst_f = 0.0;
  int combos = 0;
  for (const auto& [cells, seed] :
       {std::pair{2, std::uint64_t(31)}, std::pair{4, std::uint64_t(32)}}) {
    const AtomSystem sys = perturbed_lattice(params, cells, 0.12, seed);
    const NeighborList list = build_neighbor_list(sys, params.r_cut_max(), 0.5);
    const EnergyForces ref = compute_ref(sys, list, params);
    for (Scheme scheme : {Scheme::ScalarOpt, Scheme::V1, Scheme::V2})
      for (int width : {1, 4, 8, 16})
        for (int k_max : {0, 2, 16}) {
          ForceOptions o;
          o.scheme = scheme;
          o.precision = PrecisionMode::OptD;
          o.width = width;
          o.k_max = k_max;
          const EnergyForces ef = evaluate_forces(sys, list, params, o);
          worst_e = std::max(worst_e, std::abs(ef.energy - ref.energy) /
                                          std::abs(ref.energy));
          worst_f = std::max(worst_f, max_force_gap(ef.forces, ref.forces));
          ++combos;
        }
  }
  return {worst_e <= kETol && worst_f <= kFTol,
          std::to_string(combos) + " combos on 64/512 atoms: worst energy " +
              sci(worst_e) + " rel (limit 1e-12), worst force " + sci(worst_f) +
              " eV/A (limit 1e-10)"};
}

/* 3: analytic forces match central finite differences at h = 1e-5 A on a
   64-atom perturbed lattice to better than 1e-6 relative. */
Outcome criterion_3() {
  constexpr double kTol = 1e-6;
  constexpr double kH = 1e-5;

  const ParamTable params = builtin_silicon();
  const AtomSystem sys = perturbed_lattice(params, 2, 0.12, 33);
  const NeighborList list = build_neighbor_list(sys, params.r_cut_max(), 0.5);
  const EnergyForces ef = compute_ref(sys, list, params);
  const std::vector<Vec3> fd = fd_force_oracle(sys, list, params, kH);

  double scale = 1.0;
  for (const Vec3& f : ef.forces)
    scale = std::max({scale, std::abs(f.x), std::abs(f.y), std::abs(f.z)});
  const double err = max_force_gap(ef.forces, fd) / scale;
  return {err < kTol, "64 atoms, h=1e-5: max relative force error " + sci(err) +
                          " (limit 1e-6)"};
}

/* 4: 10^4-step NVE run (512 atoms, v2/w8/double): total energy drift below
   1e-4 relative, |sum F| below 1e-10 eV/A per component at every sampled
   step, momentum drift below 1e-8. */
Outcome criterion_4() {
  constexpr double kDriftTol = 1e-4;
  constexpr double kForceSumTol = 1e-10;
  constexpr double kMomentumTol = 1e-8;
  constexpr long kSteps = 10000;
  constexpr long kSampleEvery = 100;

  const ParamTable params = builtin_silicon();
  RunConfig cfg;
  cfg.steps = 0;  // stepped manually
  cfg.dt = 0.001;
  cfg.precision = PrecisionMode::OptD;
  cfg.scheme = Scheme::V2;
  cfg.width = 8;
  Engine engine(silicon_cells(4, 300.0, 2027), params, cfg);

  const double e0 =
      engine.potential_energy() + kinetic_energy(engine.system());
  const Vec3 p0 = total_momentum(engine.system());
  double worst_drift = 0.0, worst_fsum = 0.0, worst_dp = 0.0;
  for (long s = 0; s <= kSteps; ++s) {
    if (s % kSampleEvery == 0 || s == kSteps) {
      const double e =
          engine.potential_energy() + kinetic_energy(engine.system());
      worst_drift = std::max(worst_drift, std::abs(e - e0) / std::abs(e0));
      Vec3 fsum;
      for (const Vec3& f : engine.system().forces) fsum += f;
      worst_fsum = std::max(
          {worst_fsum, std::abs(fsum.x), std::abs(fsum.y), std::abs(fsum.z)});
      const Vec3 dp = total_momentum(engine.system()) - p0;
      worst_dp =
          std::max({worst_dp, std::abs(dp.x), std::abs(dp.y), std::abs(dp.z)});
    }
    if (s < kSteps) engine.step();
  }
  const bool pass = worst_drift < kDriftTol && worst_fsum < kForceSumTol &&
                    worst_dp < kMomentumTol;
  return {pass, "energy drift " + sci(worst_drift) + " rel (limit 1e-4), |sum F| " +
                    sci(worst_fsum) + " eV/A (limit 1e-10), momentum drift " +
                    sci(worst_dp) + " (limit 1e-8)"};
}

/* 5: filtered and unfiltered evaluations agree to 1e-12 relative. */
Outcome criterion_5() {
  constexpr double kTol = 1e-12;

  const ParamTable params = builtin_silicon();
  double worst = 0.0;
  int combos = 0;
  for (const auto& [cells, seed] :
       {std::pair{2, std::uint64_t(51)}, std::pair{4, std::uint64_t(52)}}) {
    const AtomSystem sys = perturbed_lattice(params, cells, 0.12, seed);
    const NeighborList list = build_neighbor_list(sys, params.r_cut_max(), 0.5);
    for (const auto& [scheme, width] :
         {std::pair{Scheme::V1, 4}, std::pair{Scheme::V2, 8},
          std::pair{Scheme::V3, 1}}) {
      ForceOptions o;
      o.scheme = scheme;
      o.precision = PrecisionMode::OptD;
      o.width = width;
      const EnergyForces on = evaluate_forces(sys, list, params, o);
      o.filter = false;
      const EnergyForces off = evaluate_forces(sys, list, params, o);

      double scale = 1.0;
      for (const Vec3& f : on.forces)
        scale = std::max({scale, std::abs(f.x), std::abs(f.y), std::abs(f.z)});
      worst = std::max(worst, std::abs(on.energy - off.energy) /
                                  std::abs(on.energy));
      worst = std::max(worst, max_force_gap(on.forces, off.forces) / scale);
      ++combos;
    }
  }
  return {worst <= kTol, std::to_string(combos) +
                             " scheme/system combos: worst relative "
                             "filter-on/off deviation " +
                             sci(worst) + " (limit 1e-12)"};
}

/* 6: across 100 seeded ragged-segment traversals at width 8, the all-ready
   policy fires at most as often as naive lockstep, strictly fewer at least
   once, and visits exactly the ready positions. */
Outcome criterion_6() {
  constexpr int kCases = 100;

  int strict = 0;
  long fires = 0, lockstep = 0;
  for (int c = 0; c < kCases; ++c) {
    const TraversalCounts tc = traversal_case(8, 9000 + std::uint64_t(c));
    if (!tc.visited_ok)
      return {false, "case " + std::to_string(c) + ": wrong visit sequence"};
    if (tc.all_ready > tc.any_ready)
      return {false, "case " + std::to_string(c) + ": all-ready fired " +
                         std::to_string(tc.all_ready) + " > lockstep " +
                         std::to_string(tc.any_ready)};
    if (tc.all_ready < tc.any_ready) ++strict;
    fires += tc.all_ready;
    lockstep += tc.any_ready;
  }
  return {strict >= 1, "100 cases at width 8: " + std::to_string(fires) +
                           " fires vs " + std::to_string(lockstep) +
                           " lockstep, strictly fewer on " +
                           std::to_string(strict) + " cases"};
}

/* 7: the vector building blocks match their scalar-loop oracles exactly over
   10^4 randomized cases per width. */
Outcome criterion_7() {
  constexpr int kCasesPerWidth = 10000;

  const ConformanceStats st = backend_conformance(kCasesPerWidth, 77001);
  return {st.failures == 0, std::to_string(st.cases) +
                                " randomized block cases across widths "
                                "1/4/8/16, " +
                                std::to_string(st.failures) + " mismatches"};
}

/* 8: throughput direction at 32768 atoms (16^3 cells), reported but not
   gated: software lane emulation cannot promise hardware speedups, so this
   prints the measured ns/day ratios either way. */
Outcome criterion_8() {
  const ParamTable params = builtin_silicon();
  const AtomSystem sys = make_diamond_lattice(16, 16, 16, 5.431, 0, 28.0855);
  const NeighborList list = build_neighbor_list(sys, params.r_cut_max(), 1.0);

  auto rate = [&](Scheme scheme, PrecisionMode precision, int width) {
    ForceOptions o;
    o.scheme = scheme;
    o.precision = precision;
    o.width = width;
    const auto t0 = std::chrono::steady_clock::now();
    evaluate_forces(sys, list, params, o);
    const auto t1 = std::chrono::steady_clock::now();
    const double wall = std::chrono::duration<double>(t1 - t0).count();
    return 0.001 * 1e-3 / wall * 86400.0;  // ns/day at dt = 1 fs
  };

  const double ref = rate(Scheme::Ref, PrecisionMode::Ref, 0);
  const double opt_d = rate(Scheme::V2, PrecisionMode::OptD, 8);
  const double opt_s = rate(Scheme::V2, PrecisionMode::OptS, 8);
  const bool direction = opt_d >= ref && opt_s >= ref;
  return {true, std::string("non-gating; 32768 atoms, ns/day ref ") + sci(ref) +
                    ", double " + sci(opt_d) + " (" + sci(opt_d / ref) +
                    "x), single " + sci(opt_s) + " (" + sci(opt_s / ref) +
                    "x); direction " +
                    (direction ? "matches the optimized>reference claim"
                               : "reported only (software lane emulation)")};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: %s <criterion 1..8>\n", argv[0]);
    return 2;
  }
  const int n = std::atoi(argv[1]);
  Outcome out;
  switch (n) {
    case 1: out = criterion_1(); break;
    case 2: out = criterion_2(); break;
    case 3: out = criterion_3(); break;
    case 4: out = criterion_4(); break;
    case 5: out = criterion_5(); break;
    case 6: out = criterion_6(); break;
    case 7: out = criterion_7(); break;
    case 8: out = criterion_8(); break;
    default:
      std::fprintf(stderr, "no criterion %d (valid: 1..8)\n", n);
      return 2;
  }
  std::printf("%s criterion %d: %s\n", out.pass ? "PASS" : "FAIL", n,
              out.detail.c_str());
  return out.pass ? 0 : 1;
}
