#pragma once

#include <cstdint>
#include <vector>

#include "tmd/box.hpp"
#include "tmd/vec3.hpp"

namespace tmd {

// Complete dynamic state of a simulation.  Positions live in the box
// ([0, L) on periodic axes), velocities in A/ps, forces in eV/A.
// species_masses maps dense species ids to masses in g/mol.
struct AtomSystem {
  std::vector<Vec3> positions;
  std::vector<Vec3> velocities;
  std::vector<Vec3> forces;
  std::vector<std::int32_t> species;
  std::vector<double> species_masses;
  SimulationBox box;

  std::size_t size() const { return positions.size(); }
  double mass(std::size_t atom) const { return species_masses[std::size_t(species[atom])]; }

  // Checks sequence lengths, box edges, species id range, and positive masses.
  void validate() const;
};

// Sum of 0.5 m v^2 over all atoms, in eV.
double kinetic_energy(const AtomSystem& sys);

// Instantaneous temperature from 2 KE / (3 N kB); zero for an empty system.
double temperature(const AtomSystem& sys);

// Total linear momentum (sum of m v), in g/mol * A/ps.
Vec3 total_momentum(const AtomSystem& sys);

}  // namespace tmd
