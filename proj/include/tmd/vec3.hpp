#pragma once

#include <cmath>

namespace tmd {

// Cartesian triple over any element type: double for system state, float or a
// lane vector inside kernels.
template <typename T>
struct V3 {
  T x{}, y{}, z{};

  V3() = default;
  V3(T xx, T yy, T zz) : x(xx), y(yy), z(zz) {}

  V3& operator+=(const V3& o) { x = x + o.x; y = y + o.y; z = z + o.z; return *this; }
  V3& operator-=(const V3& o) { x = x - o.x; y = y - o.y; z = z - o.z; return *this; }
  V3& operator*=(const T& s) { x = x * s; y = y * s; z = z * s; return *this; }
};

template <typename T> inline V3<T> operator+(V3<T> a, const V3<T>& b) { return a += b; }
template <typename T> inline V3<T> operator-(V3<T> a, const V3<T>& b) { return a -= b; }
template <typename T> inline V3<T> operator*(V3<T> a, const T& s) { return a *= s; }
template <typename T> inline V3<T> operator*(const T& s, V3<T> a) { return a *= s; }
template <typename T> inline V3<T> operator-(const V3<T>& a) { return {T(0) - a.x, T(0) - a.y, T(0) - a.z}; }

template <typename T>
inline T dot(const V3<T>& a, const V3<T>& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

template <typename T>
inline T norm_sq(const V3<T>& a) { return dot(a, a); }

inline double norm(const V3<double>& a) { return std::sqrt(norm_sq(a)); }

using Vec3 = V3<double>;

}  // namespace tmd
