#pragma once

#include <utility>
#include <vector>

#include "tmd/params.hpp"
#include "tmd/system.hpp"

namespace testing {

// Synthetic single-species entry with easy numbers: cutoff ramp on (1.5, 2.5).
inline tmd::TersoffEntry test_entry() {
  tmd::TersoffEntry e;
  e.m = 1;
  e.gamma = 1.2;
  e.lambda3 = 0.9;
  e.c = 1.5;
  e.d = 0.8;
  e.h = -0.3;
  e.eta = 0.9;
  e.beta = 0.4;
  e.lambda2 = 1.7;
  e.big_b = 12.0;
  e.big_r = 2.0;
  e.big_d = 0.5;
  e.lambda1 = 2.1;
  e.big_a = 25.0;
  return e;
}

inline tmd::ParamTable table_of(const tmd::TersoffEntry& e) {
  return tmd::ParamTable({"Xx"}, {e});
}

// N atoms in a large open box; positions supplied, velocities/forces zero.
inline tmd::AtomSystem open_system(std::vector<tmd::Vec3> positions,
                                   double mass = 28.0) {
  tmd::AtomSystem sys;
  sys.box = {60.0, 60.0, 60.0, false, false, false};
  sys.positions = std::move(positions);
  sys.velocities.assign(sys.positions.size(), tmd::Vec3{});
  sys.forces.assign(sys.positions.size(), tmd::Vec3{});
  sys.species.assign(sys.positions.size(), 0);
  sys.species_masses = {mass};
  return sys;
}

}  // namespace testing
