#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <span>

// Lane-width-oblivious vector layer.  Kernels are written once against the
// types and building blocks below; the width is a compile-time parameter and
// width 1 degenerates to scalar code.  The software implementation here is
// plain arrays; a hardware implementation must reproduce the exact semantics
// (lane order of reductions, serialized scatter conflicts, masked-out lanes
// contributing nothing) and pass the same conformance checks.

namespace tmd::simd {

template <typename T, int W>
struct Vec {
  static_assert(W >= 1);
  static constexpr int width = W;
  using element = T;

  std::array<T, W> lane{};

  Vec() = default;
  explicit Vec(T broadcast) { lane.fill(broadcast); }

  T& operator[](int l) { return lane[std::size_t(l)]; }
  const T& operator[](int l) const { return lane[std::size_t(l)]; }
};

template <int W>
struct Mask {
  static constexpr int width = W;
  std::array<bool, W> lane{};

  Mask() = default;
  explicit Mask(bool broadcast) { lane.fill(broadcast); }

  bool operator[](int l) const { return lane[std::size_t(l)]; }
};

#define TMD_SIMD_BINOP(op)                                              \
  template <typename T, int W>                                          \
  inline Vec<T, W> operator op(const Vec<T, W>& a, const Vec<T, W>& b) { \
    Vec<T, W> r;                                                        \
    for (int l = 0; l < W; ++l) r.lane[l] = a.lane[l] op b.lane[l];     \
    return r;                                                           \
  }
TMD_SIMD_BINOP(+)
TMD_SIMD_BINOP(-)
TMD_SIMD_BINOP(*)
TMD_SIMD_BINOP(/)
#undef TMD_SIMD_BINOP

template <typename T, int W>
inline Vec<T, W> operator-(const Vec<T, W>& a) {
  Vec<T, W> r;
  for (int l = 0; l < W; ++l) r.lane[l] = -a.lane[l];
  return r;
}

#define TMD_SIMD_CMP(op)                                                \
  template <typename T, int W>                                          \
  inline Mask<W> operator op(const Vec<T, W>& a, const Vec<T, W>& b) {  \
    Mask<W> m;                                                          \
    for (int l = 0; l < W; ++l) m.lane[l] = a.lane[l] op b.lane[l];     \
    return m;                                                           \
  }
TMD_SIMD_CMP(<)
TMD_SIMD_CMP(<=)
TMD_SIMD_CMP(>)
TMD_SIMD_CMP(>=)
TMD_SIMD_CMP(==)
TMD_SIMD_CMP(!=)
#undef TMD_SIMD_CMP

template <int W>
inline Mask<W> operator&(const Mask<W>& a, const Mask<W>& b) {
  Mask<W> m;
  for (int l = 0; l < W; ++l) m.lane[l] = a.lane[l] && b.lane[l];
  return m;
}
template <int W>
inline Mask<W> operator|(const Mask<W>& a, const Mask<W>& b) {
  Mask<W> m;
  for (int l = 0; l < W; ++l) m.lane[l] = a.lane[l] || b.lane[l];
  return m;
}
template <int W>
inline Mask<W> operator!(const Mask<W>& a) {
  Mask<W> m;
  for (int l = 0; l < W; ++l) m.lane[l] = !a.lane[l];
  return m;
}

#define TMD_SIMD_MATH1(name, expr)                       \
  template <typename T, int W>                           \
  inline Vec<T, W> name(const Vec<T, W>& a) {            \
    Vec<T, W> r;                                         \
    for (int l = 0; l < W; ++l) r.lane[l] = expr;        \
    return r;                                            \
  }
TMD_SIMD_MATH1(sqrt, std::sqrt(a.lane[l]))
TMD_SIMD_MATH1(exp, std::exp(a.lane[l]))
TMD_SIMD_MATH1(sin, std::sin(a.lane[l]))
TMD_SIMD_MATH1(cos, std::cos(a.lane[l]))
TMD_SIMD_MATH1(floor, std::floor(a.lane[l]))
TMD_SIMD_MATH1(abs, std::abs(a.lane[l]))
#undef TMD_SIMD_MATH1

template <typename T, int W>
inline Vec<T, W> pow(const Vec<T, W>& a, const Vec<T, W>& b) {
  Vec<T, W> r;
  for (int l = 0; l < W; ++l) r.lane[l] = std::pow(a.lane[l], b.lane[l]);
  return r;
}
template <typename T, int W>
inline Vec<T, W> min(const Vec<T, W>& a, const Vec<T, W>& b) {
  Vec<T, W> r;
  for (int l = 0; l < W; ++l) r.lane[l] = a.lane[l] < b.lane[l] ? a.lane[l] : b.lane[l];
  return r;
}
template <typename T, int W>
inline Vec<T, W> max(const Vec<T, W>& a, const Vec<T, W>& b) {
  Vec<T, W> r;
  for (int l = 0; l < W; ++l) r.lane[l] = a.lane[l] > b.lane[l] ? a.lane[l] : b.lane[l];
  return r;
}

template <typename T, int W>
inline Vec<T, W> select(const Mask<W>& m, const Vec<T, W>& a, const Vec<T, W>& b) {
  Vec<T, W> r;
  for (int l = 0; l < W; ++l) r.lane[l] = m.lane[l] ? a.lane[l] : b.lane[l];
  return r;
}

/* ---- vector-wide conditionals -------------------------------------- */

template <int W>
inline bool vall(const Mask<W>& m) {
  for (int l = 0; l < W; ++l)
    if (!m.lane[l]) return false;
  return true;
}

template <int W>
inline bool vany(const Mask<W>& m) {
  for (int l = 0; l < W; ++l)
    if (m.lane[l]) return true;
  return false;
}

/* ---- horizontal reduction ------------------------------------------ */

// Masked sum in ascending lane order; masked-out lanes contribute nothing.
// Acc sets the accumulation type, so double accumulation over float lanes is
// the mixed-precision variant.
template <typename Acc, typename T, int W>
inline Acc reduce_add(const Vec<T, W>& v, const Mask<W>& m) {
  Acc s{};
  for (int l = 0; l < W; ++l)
    if (m.lane[l]) s += Acc(v.lane[l]);
  return s;
}

/* ---- conflict-safe scatter ------------------------------------------ */

// Equivalent to the ascending-lane scalar loop, so lanes hitting the same
// index pile up deterministically.  Indices of masked-out lanes are ignored
// entirely; live indices are bounds-checked in debug builds.
template <typename Acc, typename T, int W>
inline void scatter_add(std::span<Acc> target, const Vec<std::int32_t, W>& idx,
                        const Vec<T, W>& v, const Mask<W>& m) {
  for (int l = 0; l < W; ++l) {
    if (!m.lane[l]) continue;
    assert(idx.lane[l] >= 0 && std::size_t(idx.lane[l]) < target.size());
    target[std::size_t(idx.lane[l])] += Acc(v.lane[l]);
  }
}

/* ---- element gather ---------------------------------------------------- */

// Unmasked lane gather; every index must be in range.
template <typename T, int W>
inline Vec<T, W> gather(std::span<const T> src, const Vec<std::int32_t, W>& idx) {
  Vec<T, W> r;
  for (int l = 0; l < W; ++l) {
    assert(idx.lane[l] >= 0 && std::size_t(idx.lane[l]) < src.size());
    r.lane[l] = src[std::size_t(idx.lane[l])];
  }
  return r;
}

/* ---- row gather ------------------------------------------------------ */

// Gathers W rows of row_width consecutive values and transposes them into
// row_width lane vectors: out[f][l] = table[rows[l] * row_width + f].
template <typename T, int W>
inline void adjacent_gather(std::span<const T> table, const Vec<std::int32_t, W>& rows,
                            int row_width, Vec<T, W>* out) {
  for (int l = 0; l < W; ++l) {
    const std::size_t base = std::size_t(rows.lane[l]) * std::size_t(row_width);
    assert(rows.lane[l] >= 0 && base + std::size_t(row_width) <= table.size());
    for (int f = 0; f < row_width; ++f) out[f].lane[l] = table[base + std::size_t(f)];
  }
}

/* ---- per-lane traversal ---------------------------------------------- */

// One iteration cursor per lane over half-open index ranges.
template <int W>
struct LaneCursorSet {
  std::array<std::int32_t, W> cursor{}, begin{}, end{};

  void set_lane(int l, std::int32_t b, std::int32_t e) {
    begin[std::size_t(l)] = cursor[std::size_t(l)] = b;
    end[std::size_t(l)] = e;
  }
  bool exhausted(int l) const { return cursor[std::size_t(l)] >= end[std::size_t(l)]; }
  bool all_exhausted() const {
    for (int l = 0; l < W; ++l)
      if (!exhausted(l)) return false;
    return true;
  }
};

// Advances every lane that is neither ready nor exhausted until the whole set
// is ready-or-exhausted, then reports the ready lanes.  The kernel body runs
// only when every live lane has work, which trades per-step latency for full
// occupancy.  ready(lane, cursor) must be pure.
template <int W, typename Pred>
inline Mask<W> fast_forward(LaneCursorSet<W>& cur, Pred&& ready) {
  Mask<W> m;
  for (int l = 0; l < W; ++l) {
    std::int32_t c = cur.cursor[std::size_t(l)];
    const std::int32_t e = cur.end[std::size_t(l)];
    while (c < e && !ready(l, c)) ++c;
    cur.cursor[std::size_t(l)] = c;
    m.lane[std::size_t(l)] = c < e;
  }
  return m;
}

// Companion step: consume the just-processed position on the ready lanes.
template <int W>
inline void advance_ready(LaneCursorSet<W>& cur, const Mask<W>& ready) {
  for (int l = 0; l < W; ++l)
    if (ready.lane[std::size_t(l)]) ++cur.cursor[std::size_t(l)];
}

/* ---- backends --------------------------------------------------------- */

// Bundles the value kinds a kernel instantiation needs: compute element type,
// accumulation element type, and lane count.  OptS uses <float, float, W>,
// OptM <float, double, W>, double paths <double, double, W>.
template <typename Flt, typename Acc, int W>
struct SoftwareBackend {
  static constexpr int width = W;
  using flt_t = Flt;
  using acc_t = Acc;
  using fvec = Vec<Flt, W>;
  using avec = Vec<Acc, W>;
  using ivec = Vec<std::int32_t, W>;
  using mask_t = Mask<W>;
};

template <typename B>
concept VectorBackend = requires {
  { B::width } -> std::convertible_to<int>;
  typename B::flt_t;
  typename B::acc_t;
  typename B::fvec;
  typename B::avec;
  typename B::ivec;
  typename B::mask_t;
};

}  // namespace tmd::simd
