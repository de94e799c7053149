#include "tmd/potential_ref.hpp"

#include <cmath>
#include <string>

#include "tmd/error.hpp"

namespace tmd {

namespace {

kern::ParamRow<double> row_of(const TersoffEntry& e) {
  const double cut = e.cutoff();
  return {e.big_a, e.big_b, e.lambda1, e.lambda2, e.lambda3, e.beta, e.eta,
          e.c,     e.d,     e.h,       e.gamma,   double(e.m), e.big_r,
          e.big_d, cut,     cut * cut};
}

}  // namespace

FcValue cutoff_fc(double r, const TersoffEntry& e) {
  FcValue out;
  kern::cutoff_fc(r, e.big_r, e.big_d, out.value, out.deriv);
  return out;
}

PairValues pair_terms(double r, const TersoffEntry& e) {
  PairValues out;
  const auto p = row_of(e);
  kern::pair_terms(r, p, out.fr, out.dfr, out.fa, out.dfa);
  return out;
}

AngleValue angle_g(double cos_theta, const TersoffEntry& e) {
  AngleValue out;
  const auto p = row_of(e);
  kern::angle_g(cos_theta, p, out.value, out.deriv);
  return out;
}

BondOrderValue bond_order(double zeta, const TersoffEntry& e) {
  BondOrderValue out;
  const auto p = row_of(e);
  kern::bond_order(zeta, p, out.value, out.deriv);
  return out;
}

kern::ZetaTerm<double> zeta_term(const Vec3& ri, const Vec3& rj, const Vec3& rk,
                                 const TersoffEntry& e) {
  const Vec3 d_ij = rj - ri;
  const Vec3 d_ik = rk - ri;
  return kern::zeta_term(d_ij, norm(d_ij), d_ik, norm(d_ik), row_of(e));
}

/* ----------------------------------------------------------------------
   reference evaluation

   E = sum over ordered pairs (i, j) of 1/2 fc(r_ij) [fR + b(zeta_ij) fA],
   zeta_ij = sum over k != i, j of the triplet term.  Forces from the exact
   gradient: the radial part acts along the bond, the zeta part fans out to
   i, j and every k through the chain factor dV/dzeta.
------------------------------------------------------------------------- */

namespace {

struct RefCtx {
  const AtomSystem& sys;
  const NeighborList& list;
  FlatParams<double> flat;
  int species;
};

// Shared by compute_ref and the zero-cache path of compute_opt_scalar so the
// two stay bitwise identical there.
template <typename Visit>
EnergyForces ref_eval(const RefCtx& ctx, Visit&& visit_pair) {
  const AtomSystem& sys = ctx.sys;
  const std::size_t n = sys.size();
  EnergyForces out;
  out.forces.assign(n, Vec3{});

  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 xi = sys.positions[i];
    const int si = sys.species[i];
    const auto seg = ctx.list.segment(i);
    for (std::int32_t j : seg) {
      const int sj = sys.species[std::size_t(j)];
      const auto pij = kern::load_row(ctx.flat, ctx.flat.row_index(si, sj, sj));
      const Vec3 d_ij = minimum_image(sys.positions[std::size_t(j)] - xi, sys.box);
      const double r2 = norm_sq(d_ij);
      if (r2 > pij.cutsq) continue;
      const double r_ij = std::sqrt(r2);
      visit_pair(std::int32_t(i), j);

      // first K pass: accumulate zeta
      double zeta = 0.0;
      for (std::int32_t k : seg) {
        if (k == j) continue;
        const int sk = sys.species[std::size_t(k)];
        const auto pijk = kern::load_row(ctx.flat, ctx.flat.row_index(si, sj, sk));
        const Vec3 d_ik = minimum_image(sys.positions[std::size_t(k)] - xi, sys.box);
        const double r2k = norm_sq(d_ik);
        if (r2k > pijk.cutsq) continue;
        zeta += kern::zeta_value(d_ij, r_ij, d_ik, std::sqrt(r2k), pijk);
      }

      // pair block
      const auto pv = kern::pair_v_terms(r_ij, zeta, pij);
      if (!std::isfinite(pv.energy) || !std::isfinite(pv.dv_dr) ||
          !std::isfinite(pv.dv_dzeta))
        throw NumericError("non-finite pair term for atoms " + std::to_string(i) +
                           "," + std::to_string(j));
      out.energy += pv.energy;
      const Vec3 u_ij = d_ij * (1.0 / r_ij);
      out.forces[i] += u_ij * pv.dv_dr;
      out.forces[std::size_t(j)] -= u_ij * pv.dv_dr;

      // second K pass: zeta-gradient forces
      for (std::int32_t k : seg) {
        if (k == j) continue;
        const int sk = sys.species[std::size_t(k)];
        const auto pijk = kern::load_row(ctx.flat, ctx.flat.row_index(si, sj, sk));
        const Vec3 d_ik = minimum_image(sys.positions[std::size_t(k)] - xi, sys.box);
        const double r2k = norm_sq(d_ik);
        if (r2k > pijk.cutsq) continue;
        const auto zt = kern::zeta_term(d_ij, r_ij, d_ik, std::sqrt(r2k), pijk);
        out.forces[i] -= zt.grad_i * pv.dv_dzeta;
        out.forces[std::size_t(j)] -= zt.grad_j * pv.dv_dzeta;
        out.forces[std::size_t(k)] -= zt.grad_k * pv.dv_dzeta;
      }
    }
  }
  return out;
}

}  // namespace

EnergyForces compute_ref(const AtomSystem& sys, const NeighborList& list,
                         const ParamTable& params) {
  RefCtx ctx{sys, list, FlatParams<double>::from(params), params.species_count()};
  return ref_eval(ctx, [](std::int32_t, std::int32_t) {});
}

namespace detail {
EnergyForces compute_ref_instrumented(const AtomSystem& sys, const NeighborList& list,
                                      const ParamTable& params, const PairVisitor& visit) {
  RefCtx ctx{sys, list, FlatParams<double>::from(params), params.species_count()};
  return ref_eval(ctx, [&](std::int32_t i, std::int32_t j) { visit(i, j); });
}
}  // namespace detail

/* ----------------------------------------------------------------------
   derivative precomputation

   The zeta pass stores d zeta/d x_k for the first k_max contributing
   neighbors (plus the running i/j gradient sums), then the force pass
   multiplies the cached gradients by dV/dzeta instead of recomputing the
   triplet term.  Neighbors beyond the cache are handled exactly like the
   reference: zeta-only in the first pass, full recomputation in the replay
   pass.  With k_max = 0 nothing is cached and the call sequence collapses
   to compute_ref's, bit for bit.
------------------------------------------------------------------------- */

EnergyForces compute_opt_scalar(const AtomSystem& sys, const NeighborList& list,
                                const ParamTable& params, int k_max) {
  if (k_max < 0) throw ConfigError("k_max must be non-negative");
  const FlatParams<double> flat = FlatParams<double>::from(params);
  const std::size_t n = sys.size();
  EnergyForces out;
  out.forces.assign(n, Vec3{});

  std::vector<std::int32_t> cache_k(static_cast<std::size_t>(k_max));
  std::vector<Vec3> cache_gk(static_cast<std::size_t>(k_max));

  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 xi = sys.positions[i];
    const int si = sys.species[i];
    const auto seg = list.segment(i);
    for (std::int32_t j : seg) {
      const int sj = sys.species[std::size_t(j)];
      const auto pij = kern::load_row(flat, flat.row_index(si, sj, sj));
      const Vec3 d_ij = minimum_image(sys.positions[std::size_t(j)] - xi, sys.box);
      const double r2 = norm_sq(d_ij);
      if (r2 > pij.cutsq) continue;
      const double r_ij = std::sqrt(r2);

      double zeta = 0.0;
      Vec3 dzeta_di{}, dzeta_dj{};
      int cached = 0;
      std::size_t resume = 0;

      // caching pass: full triplet terms while the cache has room
      std::size_t pos = 0;
      for (; pos < seg.size() && cached < k_max; ++pos) {
        const std::int32_t k = seg[pos];
        if (k == j) continue;
        const int sk = sys.species[std::size_t(k)];
        const auto pijk = kern::load_row(flat, flat.row_index(si, sj, sk));
        const Vec3 d_ik = minimum_image(sys.positions[std::size_t(k)] - xi, sys.box);
        const double r2k = norm_sq(d_ik);
        if (r2k > pijk.cutsq) continue;
        const auto zt = kern::zeta_term(d_ij, r_ij, d_ik, std::sqrt(r2k), pijk);
        zeta += zt.zeta;
        dzeta_di += zt.grad_i;
        dzeta_dj += zt.grad_j;
        cache_k[std::size_t(cached)] = k;
        cache_gk[std::size_t(cached)] = zt.grad_k;
        ++cached;
      }
      resume = pos;

      // overflow pass: value only, gradients recomputed later
      for (; pos < seg.size(); ++pos) {
        const std::int32_t k = seg[pos];
        if (k == j) continue;
        const int sk = sys.species[std::size_t(k)];
        const auto pijk = kern::load_row(flat, flat.row_index(si, sj, sk));
        const Vec3 d_ik = minimum_image(sys.positions[std::size_t(k)] - xi, sys.box);
        const double r2k = norm_sq(d_ik);
        if (r2k > pijk.cutsq) continue;
        zeta += kern::zeta_value(d_ij, r_ij, d_ik, std::sqrt(r2k), pijk);
      }

      const auto pv = kern::pair_v_terms(r_ij, zeta, pij);
      if (!std::isfinite(pv.energy) || !std::isfinite(pv.dv_dr) ||
          !std::isfinite(pv.dv_dzeta))
        throw NumericError("non-finite pair term for atoms " + std::to_string(i) +
                           "," + std::to_string(j));
      out.energy += pv.energy;
      const Vec3 u_ij = d_ij * (1.0 / r_ij);
      out.forces[i] += u_ij * pv.dv_dr;
      out.forces[std::size_t(j)] -= u_ij * pv.dv_dr;

      // apply cached gradients
      if (cached > 0) {
        out.forces[i] -= dzeta_di * pv.dv_dzeta;
        out.forces[std::size_t(j)] -= dzeta_dj * pv.dv_dzeta;
        for (int s = 0; s < cached; ++s)
          out.forces[std::size_t(cache_k[std::size_t(s)])] -=
              cache_gk[std::size_t(s)] * pv.dv_dzeta;
      }

      // replay pass for everything past the cache
      for (pos = resume; pos < seg.size(); ++pos) {
        const std::int32_t k = seg[pos];
        if (k == j) continue;
        const int sk = sys.species[std::size_t(k)];
        const auto pijk = kern::load_row(flat, flat.row_index(si, sj, sk));
        const Vec3 d_ik = minimum_image(sys.positions[std::size_t(k)] - xi, sys.box);
        const double r2k = norm_sq(d_ik);
        if (r2k > pijk.cutsq) continue;
        const auto zt = kern::zeta_term(d_ij, r_ij, d_ik, std::sqrt(r2k), pijk);
        out.forces[i] -= zt.grad_i * pv.dv_dzeta;
        out.forces[std::size_t(j)] -= zt.grad_j * pv.dv_dzeta;
        out.forces[std::size_t(k)] -= zt.grad_k * pv.dv_dzeta;
      }
    }
  }
  return out;
}

std::vector<Vec3> fd_force_oracle(const AtomSystem& sys, const NeighborList& list,
                                  const ParamTable& params, double h) {
  if (!(h > 0.0)) throw ConfigError("finite-difference step must be positive");
  AtomSystem work = sys;
  std::vector<Vec3> forces(sys.size());
  for (std::size_t a = 0; a < sys.size(); ++a) {
    double* coord[3] = {&work.positions[a].x, &work.positions[a].y,
                        &work.positions[a].z};
    double* slot[3] = {&forces[a].x, &forces[a].y, &forces[a].z};
    for (int c = 0; c < 3; ++c) {
      const double orig = *coord[c];
      *coord[c] = orig + h;
      const double e_plus = compute_ref(work, list, params).energy;
      *coord[c] = orig - h;
      const double e_minus = compute_ref(work, list, params).energy;
      *coord[c] = orig;
      *slot[c] = -(e_plus - e_minus) / (2.0 * h);
    }
  }
  return forces;
}

}  // namespace tmd
