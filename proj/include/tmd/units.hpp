#pragma once

#include <optional>
#include <string_view>

namespace tmd::units {

// Metal-style unit system: lengths in Angstrom, energies in eV, time in ps,
// masses in g/mol.  mvv2e converts m*v^2 in (g/mol)*(A/ps)^2 into eV.
inline constexpr double mvv2e = 1.0364269e-4;

// Boltzmann constant in eV/K.
inline constexpr double k_boltzmann = 8.617333e-5;

// Standard atomic weight in g/mol for elements that show up in bond-order
// parameterizations; nullopt for anything else.
std::optional<double> element_mass(std::string_view element);

}  // namespace tmd::units
