#include "tmd/system.hpp"

#include <string>

#include "tmd/error.hpp"
#include "tmd/units.hpp"

namespace tmd {

void AtomSystem::validate() const {
  const std::size_t n = positions.size();
  if (velocities.size() != n || forces.size() != n || species.size() != n)
    throw ConfigError("atom state arrays disagree on atom count");
  box.validate();
  for (std::size_t a = 0; a < n; ++a) {
    const std::int32_t s = species[a];
    if (s < 0 || std::size_t(s) >= species_masses.size())
      throw ConfigError("atom " + std::to_string(a) + " has species id " +
                        std::to_string(s) + " without a mass entry");
  }
  for (std::size_t s = 0; s < species_masses.size(); ++s)
    if (!(species_masses[s] > 0.0))
      throw ConfigError("species " + std::to_string(s) + " has non-positive mass");
}

double kinetic_energy(const AtomSystem& sys) {
  double ke = 0.0;
  for (std::size_t a = 0; a < sys.size(); ++a)
    ke += 0.5 * sys.mass(a) * norm_sq(sys.velocities[a]) * units::mvv2e;
  return ke;
}

double temperature(const AtomSystem& sys) {
  if (sys.size() == 0) return 0.0;
  return 2.0 * kinetic_energy(sys) /
         (3.0 * double(sys.size()) * units::k_boltzmann);
}

Vec3 total_momentum(const AtomSystem& sys) {
  Vec3 p;
  for (std::size_t a = 0; a < sys.size(); ++a)
    p += sys.velocities[a] * sys.mass(a);
  return p;
}

}  // namespace tmd
