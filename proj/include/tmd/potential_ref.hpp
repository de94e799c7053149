#pragma once

#include <functional>
#include <vector>

#include "tmd/neighbor.hpp"
#include "tmd/params.hpp"
#include "tmd/potential.hpp"
#include "tmd/system.hpp"

namespace tmd {

struct EnergyForces {
  double energy = 0.0;
  std::vector<Vec3> forces;
};

/* ---- scalar kernel pieces over a TersoffEntry ------------------------ */

struct FcValue {
  double value, deriv;
};
FcValue cutoff_fc(double r, const TersoffEntry& e);

struct PairValues {
  double fr, dfr, fa, dfa;
};
PairValues pair_terms(double r, const TersoffEntry& e);

struct AngleValue {
  double value, deriv;
};
AngleValue angle_g(double cos_theta, const TersoffEntry& e);

struct BondOrderValue {
  double value, deriv;
};
BondOrderValue bond_order(double zeta, const TersoffEntry& e);

// zeta(i,j,k) and its gradients from raw positions; the displacements
// rj - ri and rk - ri must already be nearest images.
kern::ZetaTerm<double> zeta_term(const Vec3& ri, const Vec3& rj, const Vec3& rk,
                                 const TersoffEntry& e);

/* ---- whole-system evaluations ---------------------------------------- */

// Plain triple-loop evaluation over ordered pairs: per pair, one pass over K
// for zeta, the pair energy/force block, then a second pass over K for the
// zeta-gradient forces.  Single-threaded; the yardstick everything else is
// measured against.
EnergyForces compute_ref(const AtomSystem& sys, const NeighborList& list,
                         const ParamTable& params);

// Same contraction with derivative precomputation: the first K pass caches
// d zeta/d x_k for up to k_max neighbors (and accumulates the i/j gradients),
// so only segments longer than k_max replay the tail with recomputation.
// k_max = 0 disables caching and reproduces compute_ref exactly.
EnergyForces compute_opt_scalar(const AtomSystem& sys, const NeighborList& list,
                                const ParamTable& params, int k_max);

// Central finite differences of the total energy, -dE/dx at step h, using
// compute_ref on displaced copies.  Independent check for all force paths.
std::vector<Vec3> fd_force_oracle(const AtomSystem& sys, const NeighborList& list,
                                  const ParamTable& params, double h);

namespace detail {
// compute_ref with a spy on the ordered pairs it actually processes.
using PairVisitor = std::function<void(std::int32_t i, std::int32_t j)>;
EnergyForces compute_ref_instrumented(const AtomSystem& sys, const NeighborList& list,
                                      const ParamTable& params, const PairVisitor& visit);
}  // namespace detail

}  // namespace tmd
