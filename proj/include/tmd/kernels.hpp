#pragma once

#include <cmath>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "tmd/error.hpp"
#include "tmd/neighbor.hpp"
#include "tmd/pair_queue.hpp"
#include "tmd/potential.hpp"
#include "tmd/potential_ref.hpp"
#include "tmd/simd.hpp"

// Width-templated force kernels.  Both consume filtered neighbor segments and
// run the same generic math as the scalar paths; they differ in how work maps
// to lanes:
//
//   compute_v1: one atom i at a time, its neighbors j spread across lanes,
//   the K loop shared by all lanes (k uniform).  Natural for widths that
//   roughly match the neighbor count.
//
//   compute_v2: W (i, j) pairs in flight at once from the pair queue, each
//   lane walking its own K segment; lanes are kept busy by fast-forwarding
//   cursors past non-contributing candidates and the kernel fires only when
//   every unfinished lane has work.  Zeta gradients are cached up to k_max
//   per pair, with a recomputation pass for longer segments.  Width 1 of
//   this kernel is the scalar-pipeline scheme.

namespace tmd {

namespace detail {

template <typename R>
inline R min_image_axis(R d, R len, bool periodic) {
  using simd::floor;
  using std::floor;
  if (!periodic) return d;
  return d - len * floor(d / len + R(0.5));
}

// Per-evaluation state in compute precision: SoA positions, species ids,
// flattened parameters, box geometry.
template <typename Flt>
struct KernelState {
  std::vector<Flt> x, y, z;
  std::vector<std::int32_t> species;
  FlatParams<Flt> flat;
  Flt blen[3];
  bool bper[3];
  int ns = 0;

  static KernelState build(const AtomSystem& sys, const ParamTable& params) {
    KernelState st;
    const std::size_t n = sys.size();
    st.x.resize(n);
    st.y.resize(n);
    st.z.resize(n);
    for (std::size_t a = 0; a < n; ++a) {
      st.x[a] = Flt(sys.positions[a].x);
      st.y[a] = Flt(sys.positions[a].y);
      st.z[a] = Flt(sys.positions[a].z);
    }
    st.species = sys.species;
    st.flat = FlatParams<Flt>::from(params);
    st.blen[0] = Flt(sys.box.lx);
    st.blen[1] = Flt(sys.box.ly);
    st.blen[2] = Flt(sys.box.lz);
    st.bper[0] = sys.box.periodic_x;
    st.bper[1] = sys.box.periodic_y;
    st.bper[2] = sys.box.periodic_z;
    st.ns = params.species_count();
    return st;
  }

  // Nearest-image displacement a -> b in compute precision.
  V3<Flt> delta(std::int32_t a, std::int32_t b) const {
    return {min_image_axis(Flt(x[std::size_t(b)] - x[std::size_t(a)]), blen[0], bper[0]),
            min_image_axis(Flt(y[std::size_t(b)] - y[std::size_t(a)]), blen[1], bper[1]),
            min_image_axis(Flt(z[std::size_t(b)] - z[std::size_t(a)]), blen[2], bper[2])};
  }

  Flt pair_cutsq(int si, int sj, int sk) const {
    return flat.rows[std::size_t(flat.row_index(si, sj, sk)) * ParamField::kCount +
                     ParamField::kCutSq];
  }
};

template <typename T, int W>
inline V3<simd::Vec<T, W>> select3(const simd::Mask<W>& m, const V3<simd::Vec<T, W>>& a,
                                   const V3<simd::Vec<T, W>>& b) {
  return {simd::select(m, a.x, b.x), simd::select(m, a.y, b.y),
          simd::select(m, a.z, b.z)};
}

// Private per-worker accumulation buffers.
template <typename Acc>
struct WorkerBuffers {
  std::vector<Acc> fx, fy, fz;
  Acc energy{};
  explicit WorkerBuffers(std::size_t n) : fx(n, Acc{}), fy(n, Acc{}), fz(n, Acc{}) {}
};

// Splits [0, items) into `workers` contiguous ranges, runs `body(range
// begin, range end, buffers)` on each (threads only when workers > 1), and
// merges buffers in ascending worker order in the accumulation type.
template <typename Acc, typename Body>
EnergyForces run_sharded(std::size_t n_atoms, std::size_t items, int workers,
                         Body&& body) {
  if (workers < 1) throw ConfigError("workers must be at least 1");
  const int nw = int(std::min<std::size_t>(std::size_t(workers), std::max<std::size_t>(items, 1)));
  std::vector<WorkerBuffers<Acc>> buffers;
  buffers.reserve(std::size_t(nw));
  for (int w = 0; w < nw; ++w) buffers.emplace_back(n_atoms);

  auto range_of = [&](int w) {
    const std::size_t lo = items * std::size_t(w) / std::size_t(nw);
    const std::size_t hi = items * std::size_t(w + 1) / std::size_t(nw);
    return std::pair<std::size_t, std::size_t>(lo, hi);
  };

  if (nw == 1) {
    body(std::size_t(0), items, buffers[0]);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(std::size_t(nw));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(nw));
    for (int w = 0; w < nw; ++w)
      pool.emplace_back([&, w] {
        try {
          const auto [lo, hi] = range_of(w);
          body(lo, hi, buffers[std::size_t(w)]);
        } catch (...) {
          errors[std::size_t(w)] = std::current_exception();
        }
      });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  EnergyForces out;
  out.forces.assign(n_atoms, Vec3{});
  Acc energy{};
  for (int w = 0; w < nw; ++w) energy += buffers[std::size_t(w)].energy;
  out.energy = double(energy);
  for (std::size_t a = 0; a < n_atoms; ++a) {
    Acc ax{}, ay{}, az{};
    for (int w = 0; w < nw; ++w) {
      ax += buffers[std::size_t(w)].fx[a];
      ay += buffers[std::size_t(w)].fy[a];
      az += buffers[std::size_t(w)].fz[a];
    }
    out.forces[a] = {double(ax), double(ay), double(az)};
  }
  return out;
}

inline void check_finite(const EnergyForces& ef) {
  if (!std::isfinite(ef.energy))
    throw NumericError("non-finite total energy");
  for (std::size_t a = 0; a < ef.forces.size(); ++a)
    if (!std::isfinite(ef.forces[a].x) || !std::isfinite(ef.forces[a].y) ||
        !std::isfinite(ef.forces[a].z))
      throw NumericError("non-finite force on atom " + std::to_string(a));
}

}  // namespace detail

/* ----------------------------------------------------------------------
   scheme V1: neighbors across lanes, shared K loop
------------------------------------------------------------------------- */

template <simd::VectorBackend B>
EnergyForces compute_v1(const AtomSystem& sys, const NeighborList& list,
                        const ParamTable& params, int workers = 1,
                        bool filter = true) {
  using Flt = typename B::flt_t;
  using Acc = typename B::acc_t;
  using fvec = typename B::fvec;
  using ivec = typename B::ivec;
  using mask_t = typename B::mask_t;
  constexpr int W = B::width;

  const auto st = detail::KernelState<Flt>::build(sys, params);
  const PackedSegments segs =
      filter_all_segments(list, sys, params.r_cut_max(), filter);
  const std::size_t n = sys.size();
  const std::span<const Flt> xs(st.x), ys(st.y), zs(st.z);
  const std::span<const std::int32_t> sp(st.species);

  auto body = [&](std::size_t i_begin, std::size_t i_end,
                  detail::WorkerBuffers<Acc>& buf) {
    const std::span<Acc> fx(buf.fx), fy(buf.fy), fz(buf.fz);
    const ivec nsv(st.ns);
    for (std::size_t i = i_begin; i < i_end; ++i) {
      const auto seg = segs.segment(i);
      if (seg.empty()) continue;
      const int si = st.species[i];
      const fvec xi(st.x[i]), yi(st.y[i]), zi(st.z[i]);
      const ivec siv{std::int32_t(si)};
      Acc fi_x{}, fi_y{}, fi_z{};

      for (std::size_t base = 0; base < seg.size(); base += std::size_t(W)) {
        const int cnt = int(std::min<std::size_t>(std::size_t(W), seg.size() - base));
        mask_t live;
        ivec jv;
        for (int l = 0; l < W; ++l) {
          live.lane[l] = l < cnt;
          jv.lane[l] = seg[base + std::size_t(l < cnt ? l : cnt - 1)];
        }
        const V3<fvec> dij{
            detail::min_image_axis(simd::gather(xs, jv) - xi, fvec(st.blen[0]), st.bper[0]),
            detail::min_image_axis(simd::gather(ys, jv) - yi, fvec(st.blen[1]), st.bper[1]),
            detail::min_image_axis(simd::gather(zs, jv) - zi, fvec(st.blen[2]), st.bper[2])};
        const fvec r2 = norm_sq(dij);
        const ivec sjv = simd::gather(sp, jv);
        const ivec trip_jj = (siv * nsv + sjv) * nsv + sjv;
        const auto pij = kern::gather_rows(st.flat, trip_jj);
        const mask_t mpair = live & (r2 <= pij.cutsq);
        if (!simd::vany(mpair)) continue;
        const fvec r = simd::sqrt(r2);

        // zeta pass, k uniform across lanes
        fvec zeta{Flt(0)};
        for (std::size_t pos = 0; pos < seg.size(); ++pos) {
          const std::int32_t k = seg[pos];
          mask_t mk = mpair & (jv != ivec(k));
          if (!simd::vany(mk)) continue;
          const V3<Flt> dik_s = st.delta(std::int32_t(i), k);
          const Flt r2k = norm_sq(dik_s);
          const ivec skv{std::int32_t(st.species[std::size_t(k)])};
          const ivec trip = (siv * nsv + sjv) * nsv + skv;
          const auto pijk = kern::gather_rows(st.flat, trip);
          mk = mk & (fvec(r2k) <= pijk.cutsq);
          if (!simd::vany(mk)) continue;
          const V3<fvec> dik{fvec(dik_s.x), fvec(dik_s.y), fvec(dik_s.z)};
          const fvec rk(std::sqrt(r2k));
          const fvec zv = kern::zeta_value(dij, r, dik, rk, pijk);
          zeta = zeta + simd::select(mk, zv, fvec(Flt(0)));
        }

        // pair block
        const auto pv = kern::pair_v_terms(r, zeta, pij);
        buf.energy += simd::reduce_add<Acc>(pv.energy, mpair);
        const V3<fvec> u = dij * (fvec(Flt(1)) / r);
        const V3<fvec> fpair = u * pv.dv_dr;
        fi_x += simd::reduce_add<Acc>(fpair.x, mpair);
        fi_y += simd::reduce_add<Acc>(fpair.y, mpair);
        fi_z += simd::reduce_add<Acc>(fpair.z, mpair);
        V3<fvec> fj = -fpair;

        // force pass, k uniform across lanes
        for (std::size_t pos = 0; pos < seg.size(); ++pos) {
          const std::int32_t k = seg[pos];
          mask_t mk = mpair & (jv != ivec(k));
          if (!simd::vany(mk)) continue;
          const V3<Flt> dik_s = st.delta(std::int32_t(i), k);
          const Flt r2k = norm_sq(dik_s);
          const ivec skv{std::int32_t(st.species[std::size_t(k)])};
          const ivec trip = (siv * nsv + sjv) * nsv + skv;
          const auto pijk = kern::gather_rows(st.flat, trip);
          mk = mk & (fvec(r2k) <= pijk.cutsq);
          if (!simd::vany(mk)) continue;
          const V3<fvec> dik{fvec(dik_s.x), fvec(dik_s.y), fvec(dik_s.z)};
          const fvec rk(std::sqrt(r2k));
          const auto zt = kern::zeta_term(dij, r, dik, rk, pijk);
          const fvec zero{Flt(0)};
          // i gradient: lane-reduced into the scalar accumulators
          fi_x += simd::reduce_add<Acc>(-(zt.grad_i.x * pv.dv_dzeta), mk);
          fi_y += simd::reduce_add<Acc>(-(zt.grad_i.y * pv.dv_dzeta), mk);
          fi_z += simd::reduce_add<Acc>(-(zt.grad_i.z * pv.dv_dzeta), mk);
          // j gradient: per-lane accumulation, applied after the K loop
          fj.x = fj.x - simd::select(mk, zt.grad_j.x * pv.dv_dzeta, zero);
          fj.y = fj.y - simd::select(mk, zt.grad_j.y * pv.dv_dzeta, zero);
          fj.z = fj.z - simd::select(mk, zt.grad_j.z * pv.dv_dzeta, zero);
          // k gradient: lane-reduced, applied once (k is uniform)
          buf.fx[std::size_t(k)] -= simd::reduce_add<Acc>(zt.grad_k.x * pv.dv_dzeta, mk);
          buf.fy[std::size_t(k)] -= simd::reduce_add<Acc>(zt.grad_k.y * pv.dv_dzeta, mk);
          buf.fz[std::size_t(k)] -= simd::reduce_add<Acc>(zt.grad_k.z * pv.dv_dzeta, mk);
        }

        simd::scatter_add(fx, jv, fj.x, mpair);
        simd::scatter_add(fy, jv, fj.y, mpair);
        simd::scatter_add(fz, jv, fj.z, mpair);
      }

      buf.fx[i] += fi_x;
      buf.fy[i] += fi_y;
      buf.fz[i] += fi_z;
    }
  };

  EnergyForces out = detail::run_sharded<Acc>(n, n, workers, body);
  detail::check_finite(out);
  return out;
}

/* ----------------------------------------------------------------------
   scheme V2: pairs across lanes, per-lane K traversal with fast-forward
------------------------------------------------------------------------- */

template <simd::VectorBackend B>
EnergyForces compute_v2(const AtomSystem& sys, const NeighborList& list,
                        const ParamTable& params, int k_max = 16,
                        int workers = 1, bool filter = true) {
  using Flt = typename B::flt_t;
  using Acc = typename B::acc_t;
  using fvec = typename B::fvec;
  using ivec = typename B::ivec;
  using mask_t = typename B::mask_t;
  constexpr int W = B::width;

  if (k_max < 0) throw ConfigError("k_max must be non-negative");
  const auto st = detail::KernelState<Flt>::build(sys, params);
  const PackedSegments segs =
      filter_all_segments(list, sys, params.r_cut_max(), filter);
  const PairQueue queue = build_pair_queue(sys, list, params, filter);
  const std::size_t n = sys.size();
  const std::size_t groups = (queue.size() + std::size_t(W) - 1) / std::size_t(W);
  const std::span<const Flt> xs(st.x), ys(st.y), zs(st.z);
  const std::span<const std::int32_t> sp(st.species);

  auto body = [&](std::size_t g_begin, std::size_t g_end,
                  detail::WorkerBuffers<Acc>& buf) {
    const std::span<Acc> fx(buf.fx), fy(buf.fy), fz(buf.fz);
    const ivec nsv(st.ns);
    const fvec zero{Flt(0)};
    std::vector<ivec> cache_k(static_cast<std::size_t>(k_max));
    std::vector<V3<fvec>> cache_g(static_cast<std::size_t>(k_max));

    for (std::size_t g = g_begin; g < g_end; ++g) {
      const std::size_t base = g * std::size_t(W);
      const int cnt = int(std::min<std::size_t>(std::size_t(W), queue.size() - base));
      mask_t live;
      ivec iv, jv;
      for (int l = 0; l < W; ++l) {
        live.lane[l] = l < cnt;
        const std::size_t q = base + std::size_t(l < cnt ? l : cnt - 1);
        iv.lane[l] = queue.i_idx[q];
        jv.lane[l] = queue.j_idx[q];
      }
      const fvec xi = simd::gather(xs, iv), yi = simd::gather(ys, iv),
                 zi = simd::gather(zs, iv);
      const V3<fvec> dij{
          detail::min_image_axis(simd::gather(xs, jv) - xi, fvec(st.blen[0]), st.bper[0]),
          detail::min_image_axis(simd::gather(ys, jv) - yi, fvec(st.blen[1]), st.bper[1]),
          detail::min_image_axis(simd::gather(zs, jv) - zi, fvec(st.blen[2]), st.bper[2])};
      const fvec r2 = norm_sq(dij);
      const ivec siv = simd::gather(sp, iv);
      const ivec sjv = simd::gather(sp, jv);
      const ivec trip_jj = (siv * nsv + sjv) * nsv + sjv;
      const auto pij = kern::gather_rows(st.flat, trip_jj);
      const mask_t mpair = live & (r2 <= pij.cutsq);
      if (!simd::vany(mpair)) continue;
      const fvec r = simd::sqrt(r2);

      // Lane l walks the filtered segment of its own i.  A candidate k is
      // ready when it is not the pair's j and sits inside the triplet
      // cutoff; the cheap distance probe runs scalar, full math only on
      // fired iterations.
      auto pred = [&](int l, std::int32_t c) {
        const std::int32_t k = segs.indices[std::size_t(c)];
        if (k == jv.lane[l]) return false;
        const V3<Flt> d = st.delta(iv.lane[l], k);
        const int sk = st.species[std::size_t(k)];
        return norm_sq(d) <=
               st.pair_cutsq(int(siv.lane[l]), int(sjv.lane[l]), sk);
      };

      simd::LaneCursorSet<W> cur;
      for (int l = 0; l < W; ++l) {
        if (mpair.lane[l])
          cur.set_lane(l, segs.offsets[std::size_t(iv.lane[l])],
                       segs.offsets[std::size_t(iv.lane[l]) + 1]);
        else
          cur.set_lane(l, 0, 0);
      }
      std::array<std::int32_t, W> overflow_start = cur.end;

      fvec zeta = zero;
      V3<fvec> dzi{zero, zero, zero}, dzj{zero, zero, zero};
      ivec count(0);

      // traversal 1: zeta and cached gradients
      while (true) {
        const mask_t ready = simd::fast_forward(cur, pred);
        if (!simd::vany(ready)) break;
        ivec kv;
        for (int l = 0; l < W; ++l)
          kv.lane[l] = ready.lane[l]
                           ? segs.indices[std::size_t(cur.cursor[std::size_t(l)])]
                           : iv.lane[l];
        const V3<fvec> dik{
            detail::min_image_axis(simd::gather(xs, kv) - xi, fvec(st.blen[0]), st.bper[0]),
            detail::min_image_axis(simd::gather(ys, kv) - yi, fvec(st.blen[1]), st.bper[1]),
            detail::min_image_axis(simd::gather(zs, kv) - zi, fvec(st.blen[2]), st.bper[2])};
        const fvec rk = simd::sqrt(norm_sq(dik));
        const ivec skv = simd::gather(sp, kv);
        const ivec trip = (siv * nsv + sjv) * nsv + skv;
        const auto pijk = kern::gather_rows(st.flat, trip);
        const auto zt = kern::zeta_term(dij, r, dik, rk, pijk);
        zeta = zeta + simd::select(ready, zt.zeta, zero);
        const mask_t mcache = ready & (count < ivec(std::int32_t(k_max)));
        dzi += detail::select3(mcache, zt.grad_i, {zero, zero, zero});
        dzj += detail::select3(mcache, zt.grad_j, {zero, zero, zero});
        for (int l = 0; l < W; ++l) {
          if (mcache.lane[l]) {
            const int slot = int(count.lane[l]);
            cache_k[std::size_t(slot)].lane[l] = kv.lane[l];
            cache_g[std::size_t(slot)].x.lane[l] = zt.grad_k.x.lane[l];
            cache_g[std::size_t(slot)].y.lane[l] = zt.grad_k.y.lane[l];
            cache_g[std::size_t(slot)].z.lane[l] = zt.grad_k.z.lane[l];
            ++count.lane[l];
          } else if (ready.lane[l] &&
                     overflow_start[std::size_t(l)] == cur.end[std::size_t(l)]) {
            overflow_start[std::size_t(l)] = cur.cursor[std::size_t(l)];
          }
        }
        simd::advance_ready(cur, ready);
      }

      // pair block; every update goes through scatter_add because lanes may
      // collide on i, j, or k
      const auto pv = kern::pair_v_terms(r, zeta, pij);
      buf.energy += simd::reduce_add<Acc>(pv.energy, mpair);
      const V3<fvec> u = dij * (fvec(Flt(1)) / r);
      const V3<fvec> fpair = u * pv.dv_dr;
      simd::scatter_add(fx, iv, fpair.x, mpair);
      simd::scatter_add(fy, iv, fpair.y, mpair);
      simd::scatter_add(fz, iv, fpair.z, mpair);
      simd::scatter_add(fx, jv, -fpair.x, mpair);
      simd::scatter_add(fy, jv, -fpair.y, mpair);
      simd::scatter_add(fz, jv, -fpair.z, mpair);

      if (k_max > 0) {
        simd::scatter_add(fx, iv, -(dzi.x * pv.dv_dzeta), mpair);
        simd::scatter_add(fy, iv, -(dzi.y * pv.dv_dzeta), mpair);
        simd::scatter_add(fz, iv, -(dzi.z * pv.dv_dzeta), mpair);
        simd::scatter_add(fx, jv, -(dzj.x * pv.dv_dzeta), mpair);
        simd::scatter_add(fy, jv, -(dzj.y * pv.dv_dzeta), mpair);
        simd::scatter_add(fz, jv, -(dzj.z * pv.dv_dzeta), mpair);
        for (int s = 0; s < k_max; ++s) {
          const mask_t ms = mpair & (count > ivec(std::int32_t(s)));
          if (!simd::vany(ms)) break;
          simd::scatter_add(fx, cache_k[std::size_t(s)],
                            -(cache_g[std::size_t(s)].x * pv.dv_dzeta), ms);
          simd::scatter_add(fy, cache_k[std::size_t(s)],
                            -(cache_g[std::size_t(s)].y * pv.dv_dzeta), ms);
          simd::scatter_add(fz, cache_k[std::size_t(s)],
                            -(cache_g[std::size_t(s)].z * pv.dv_dzeta), ms);
        }
      }

      // traversal 2: recomputation for neighbors past the cache
      simd::LaneCursorSet<W> cur2;
      for (int l = 0; l < W; ++l)
        cur2.set_lane(l, overflow_start[std::size_t(l)], cur.end[std::size_t(l)]);
      while (true) {
        const mask_t ready = simd::fast_forward(cur2, pred);
        if (!simd::vany(ready)) break;
        ivec kv;
        for (int l = 0; l < W; ++l)
          kv.lane[l] = ready.lane[l]
                           ? segs.indices[std::size_t(cur2.cursor[std::size_t(l)])]
                           : iv.lane[l];
        const V3<fvec> dik{
            detail::min_image_axis(simd::gather(xs, kv) - xi, fvec(st.blen[0]), st.bper[0]),
            detail::min_image_axis(simd::gather(ys, kv) - yi, fvec(st.blen[1]), st.bper[1]),
            detail::min_image_axis(simd::gather(zs, kv) - zi, fvec(st.blen[2]), st.bper[2])};
        const fvec rk = simd::sqrt(norm_sq(dik));
        const ivec skv = simd::gather(sp, kv);
        const ivec trip = (siv * nsv + sjv) * nsv + skv;
        const auto pijk = kern::gather_rows(st.flat, trip);
        const auto zt = kern::zeta_term(dij, r, dik, rk, pijk);
        simd::scatter_add(fx, iv, -(zt.grad_i.x * pv.dv_dzeta), ready);
        simd::scatter_add(fy, iv, -(zt.grad_i.y * pv.dv_dzeta), ready);
        simd::scatter_add(fz, iv, -(zt.grad_i.z * pv.dv_dzeta), ready);
        simd::scatter_add(fx, jv, -(zt.grad_j.x * pv.dv_dzeta), ready);
        simd::scatter_add(fy, jv, -(zt.grad_j.y * pv.dv_dzeta), ready);
        simd::scatter_add(fz, jv, -(zt.grad_j.z * pv.dv_dzeta), ready);
        simd::scatter_add(fx, kv, -(zt.grad_k.x * pv.dv_dzeta), ready);
        simd::scatter_add(fy, kv, -(zt.grad_k.y * pv.dv_dzeta), ready);
        simd::scatter_add(fz, kv, -(zt.grad_k.z * pv.dv_dzeta), ready);
        simd::advance_ready(cur2, ready);
      }
    }
  };

  EnergyForces out = detail::run_sharded<Acc>(n, groups, workers, body);
  detail::check_finite(out);
  return out;
}

}  // namespace tmd
