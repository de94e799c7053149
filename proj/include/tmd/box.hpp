#pragma once

#include <cmath>

#include "tmd/error.hpp"
#include "tmd/vec3.hpp"

namespace tmd {

// Orthorhombic cell anchored at the origin.  Non-periodic axes are open.
struct SimulationBox {
  double lx = 0, ly = 0, lz = 0;
  bool periodic_x = true, periodic_y = true, periodic_z = true;

  double length(int axis) const { return axis == 0 ? lx : axis == 1 ? ly : lz; }
  bool periodic(int axis) const {
    return axis == 0 ? periodic_x : axis == 1 ? periodic_y : periodic_z;
  }

  void validate() const {
    if (!(lx > 0.0) || !(ly > 0.0) || !(lz > 0.0))
      throw ConfigError("simulation box edges must be positive");
  }
};

// Nearest-image component: maps a periodic displacement into [-L/2, L/2).
// d = +L/2 lands on -L/2, so each image is counted exactly once.
inline double minimum_image_1d(double d, double length) {
  return d - length * std::floor(d / length + 0.5);
}

inline Vec3 minimum_image(Vec3 d, const SimulationBox& box) {
  if (box.periodic_x) d.x = minimum_image_1d(d.x, box.lx);
  if (box.periodic_y) d.y = minimum_image_1d(d.y, box.ly);
  if (box.periodic_z) d.z = minimum_image_1d(d.z, box.lz);
  return d;
}

// Wraps a coordinate into [0, L).  The post-correction catches the rounding
// case where x/L lands on the wrong side of an integer.
inline double wrap_1d(double x, double length) {
  x -= length * std::floor(x / length);
  if (x < 0.0) x += length;
  if (x >= length) x -= length;
  return x;
}

// Wraps a position into [0, L) on periodic axes.
inline Vec3 wrap_position(Vec3 p, const SimulationBox& box) {
  if (box.periodic_x) p.x = wrap_1d(p.x, box.lx);
  if (box.periodic_y) p.y = wrap_1d(p.y, box.ly);
  if (box.periodic_z) p.z = wrap_1d(p.z, box.lz);
  return p;
}

}  // namespace tmd
