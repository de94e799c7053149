#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tmd/neighbor.hpp"
#include "tmd/params.hpp"
#include "tmd/potential_opt.hpp"
#include "tmd/system.hpp"

namespace tmd {

// Everything a run needs beyond the initial state.  Defaults give a stable
// NVE trajectory for crystalline systems at moderate temperature.
struct RunConfig {
  long steps = 0;
  double dt = 0.001;            // ps
  double skin = 1.0;            // A
  int rebuild_check_every = 1;  // steps between staleness checks
  int k_max = 16;
  Scheme scheme = Scheme::Auto;
  PrecisionMode precision = PrecisionMode::OptD;
  int width = 0;                // 0: default for the precision
  int workers = 1;
  int thermo_every = 100;
  std::uint64_t seed = 12345;
  double temperature = 300.0;   // K, for velocity init by the CLI

  void validate() const;
};

struct ThermoSample {
  long step;
  double time_ps, temp_k, pe_ev, ke_ev, etot_ev;
};

struct RunReport {
  std::vector<ThermoSample> samples;
  double wall_seconds = 0.0;  // step loop only
  double ns_per_day = 0.0;
  Scheme scheme = Scheme::Auto;        // resolved
  PrecisionMode precision = PrecisionMode::OptD;
  int width = 0;                       // resolved

  // step,time_ps,temp_K,pe_eV,ke_eV,etot_eV rows followed by footer lines
  // echoing the configuration and the ns/day figure.  Numbers render in
  // shortest round-trip form, so equal runs give byte-equal output.
  std::string to_csv() const;
};

// Cubic diamond lattice of nx*ny*nz conventional cells (8 atoms each) with
// lattice constant a0, single species, fully periodic box.
AtomSystem make_diamond_lattice(int nx, int ny, int nz, double a0,
                                std::int32_t species_id, double mass);

// Maxwell-Boltzmann velocities at the given temperature: seeded Box-Muller
// draws (mt19937_64, one deviate per pair via the cosine branch), net
// momentum removed, then rescaled to the exact target temperature.
void init_velocities(AtomSystem& sys, double temperature, std::uint64_t seed);

// Velocity-Verlet NVE integrator bound to one system + parameter table.
class Engine {
 public:
  Engine(AtomSystem sys, ParamTable params, RunConfig cfg);

  // half-kick, drift + wrap, neighbor staleness check, force pass, half-kick
  void step();

  // Full step loop with thermo sampling at step 0, every thermo_every, and
  // the last step.  Wall time covers the loop only (rebuilds and force
  // passes included, setup and reporting excluded).
  RunReport run();

  const AtomSystem& system() const { return sys_; }
  AtomSystem& system() { return sys_; }
  double potential_energy() const { return pe_; }
  long steps_done() const { return steps_done_; }
  int neighbor_rebuilds() const { return rebuilds_; }

 private:
  void compute_forces();
  ThermoSample sample() const;

  AtomSystem sys_;
  ParamTable params_;
  RunConfig cfg_;
  ForceOptions force_opt_;
  NeighborList list_;
  double pe_ = 0.0;
  long steps_done_ = 0;
  int rebuilds_ = 0;
};

}  // namespace tmd
