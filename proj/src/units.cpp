#include "tmd/units.hpp"

#include <array>
#include <utility>

namespace tmd::units {

namespace {

constexpr std::array<std::pair<std::string_view, double>, 16> kMasses{{
    {"H", 1.008},
    {"He", 4.0026},
    {"B", 10.81},
    {"C", 12.011},
    {"N", 14.007},
    {"O", 15.999},
    {"Al", 26.9815},
    {"Si", 28.0855},
    {"P", 30.9738},
    {"S", 32.06},
    {"Ga", 69.723},
    {"Ge", 72.63},
    {"As", 74.9216},
    {"In", 114.818},
    {"Sn", 118.71},
    {"Sb", 121.76},
}};

}  // namespace

std::optional<double> element_mass(std::string_view element) {
  for (const auto& [name, mass] : kMasses)
    if (name == element) return mass;
  return std::nullopt;
}

}  // namespace tmd::units
