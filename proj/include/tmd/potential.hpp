#pragma once

#include <numbers>

#include "tmd/params.hpp"
#include "tmd/simd.hpp"
#include "tmd/vec3.hpp"

// Generic bond-order math.  Every routine is written against an element type
// R that is either a scalar (double, float) or a lane vector, so the scalar
// reference and the vectorized kernels evaluate the exact same expressions
// lane for lane.  Branches are expressed through select() on the comparison
// result, which is a bool for scalars and a lane mask for vectors.

namespace tmd::kern {

inline double select(bool c, double a, double b) { return c ? a : b; }
inline float select(bool c, float a, float b) { return c ? a : b; }

using simd::select;

// One parameter row in compute precision, field per member.
template <typename R>
struct ParamRow {
  R a, b, lam1, lam2, lam3, beta, eta, c, d, h, gamma, m, big_r, big_d, cut, cutsq;
};

template <typename Real>
inline ParamRow<Real> load_row(const FlatParams<Real>& fp, int triplet) {
  const Real* r = fp.rows.data() + std::size_t(triplet) * ParamField::kCount;
  return {r[ParamField::kA],    r[ParamField::kB],    r[ParamField::kLam1],
          r[ParamField::kLam2], r[ParamField::kLam3], r[ParamField::kBeta],
          r[ParamField::kEta],  r[ParamField::kC],    r[ParamField::kD],
          r[ParamField::kH],    r[ParamField::kGamma], r[ParamField::kM],
          r[ParamField::kBigR], r[ParamField::kBigD], r[ParamField::kCut],
          r[ParamField::kCutSq]};
}

// Pulls W rows at once; each lane may address a different triplet.
template <typename T, int W>
inline ParamRow<simd::Vec<T, W>> gather_rows(const FlatParams<T>& fp,
                                             const simd::Vec<std::int32_t, W>& triplets) {
  simd::Vec<T, W> f[ParamField::kCount];
  simd::adjacent_gather(std::span<const T>(fp.rows.data(), fp.rows.size()),
                        triplets, ParamField::kCount, f);
  return {f[ParamField::kA],    f[ParamField::kB],    f[ParamField::kLam1],
          f[ParamField::kLam2], f[ParamField::kLam3], f[ParamField::kBeta],
          f[ParamField::kEta],  f[ParamField::kC],    f[ParamField::kD],
          f[ParamField::kH],    f[ParamField::kGamma], f[ParamField::kM],
          f[ParamField::kBigR], f[ParamField::kBigD], f[ParamField::kCut],
          f[ParamField::kCutSq]};
}

/* ----------------------------------------------------------------------
   smooth cutoff ramp: 1 below R-D, 0 above R+D, half-sine in between
------------------------------------------------------------------------- */

template <typename R>
inline void cutoff_fc(R r, R big_r, R big_d, R& value, R& deriv) {
  using std::sin;
  using std::cos;
  const R arg = R(std::numbers::pi / 2) * ((r - big_r) / big_d);
  const R ramp = R(0.5) - R(0.5) * sin(arg);
  const R dramp = (R(-std::numbers::pi / 4) / big_d) * cos(arg);
  const auto below = r <= big_r - big_d;
  const auto above = r >= big_r + big_d;
  value = select(below, R(1), select(above, R(0), ramp));
  deriv = select(below | above, R(0), dramp);
}

/* ----------------------------------------------------------------------
   repulsive / attractive pair pieces and radial derivatives
------------------------------------------------------------------------- */

template <typename R>
inline void pair_terms(R r, const ParamRow<R>& p, R& fr, R& dfr, R& fa, R& dfa) {
  using std::exp;
  fr = p.a * exp(-p.lam1 * r);
  dfr = -p.lam1 * fr;
  fa = -(p.b * exp(-p.lam2 * r));
  dfa = -p.lam2 * fa;
}

/* ----------------------------------------------------------------------
   angular factor g(cos theta) and d g / d cos theta
------------------------------------------------------------------------- */

template <typename R>
inline void angle_g(R cos_theta, const ParamRow<R>& p, R& g, R& dg) {
  const R c2 = p.c * p.c;
  const R d2 = p.d * p.d;
  const R t = p.h - cos_theta;
  const R denom = d2 + t * t;
  g = p.gamma * (R(1) + c2 / d2 - c2 / denom);
  dg = p.gamma * (R(-2) * c2 * t) / (denom * denom);
}

/* ----------------------------------------------------------------------
   bond order b(zeta) and db/dzeta

   The derivative is defined as zero at zeta = 0: the eta < 1 power law is
   singular there, but every zeta gradient it multiplies vanishes as well.
   The computation runs on a value clamped away from zero and the singular
   lane is overwritten by select, so no infinity is ever formed.
------------------------------------------------------------------------- */

template <typename R>
inline void bond_order(R zeta, const ParamRow<R>& p, R& value, R& deriv) {
  using simd::pow;
  using std::pow;
  const auto at_zero = zeta <= R(0);
  const R zs = select(at_zero, R(1), zeta);
  const R u = pow(p.beta * zs, p.eta);
  const R base = R(1) + u;
  const R half_inv_eta = R(-0.5) / p.eta;
  const R b = pow(base, half_inv_eta);
  const R db = R(-0.5) * pow(base, half_inv_eta - R(1)) * u / zs;
  value = select(at_zero, R(1), b);
  deriv = select(at_zero, R(0), db);
}

/* ----------------------------------------------------------------------
   zeta term for one (i, j, k) triplet

   zeta = fc(r_ik) g(cos theta_ijk) exp((lambda3 (r_ij - r_ik))^m), with the
   exponent linear for m = 1 and cubic for m = 3.  zeta_value computes just
   the value (first pass over K); zeta_term adds the gradients with respect
   to the three atom positions (second pass / cached pass).  Both build the
   value through identical expressions, so they agree bitwise.
------------------------------------------------------------------------- */

template <typename R>
struct ZetaParts {
  R fc, dfc;      // cutoff at r_ik
  R g, dg;        // angular factor at cos theta
  R ex, dex;      // exponential factor and its d/d(r_ij - r_ik)
  R cos_theta;
  V3<R> u_ij, u_ik;  // unit vectors i->j, i->k
  R inv_rij, inv_rik;
};

template <typename R>
inline ZetaParts<R> zeta_parts(const V3<R>& d_ij, R r_ij, const V3<R>& d_ik, R r_ik,
                               const ParamRow<R>& p) {
  using std::exp;
  using simd::min;
  using simd::max;
  using std::min;
  using std::max;
  ZetaParts<R> zp;
  zp.inv_rij = R(1) / r_ij;
  zp.inv_rik = R(1) / r_ik;
  zp.u_ij = d_ij * zp.inv_rij;
  zp.u_ik = d_ik * zp.inv_rik;
  zp.cos_theta = min(R(1), max(R(-1), dot(zp.u_ij, zp.u_ik)));
  cutoff_fc(r_ik, p.big_r, p.big_d, zp.fc, zp.dfc);
  angle_g(zp.cos_theta, p, zp.g, zp.dg);
  const R t = p.lam3 * (r_ij - r_ik);
  const auto cubic = p.m > R(2);
  zp.ex = exp(select(cubic, t * t * t, t));
  zp.dex = zp.ex * p.lam3 * select(cubic, R(3) * t * t, R(1));
  return zp;
}

template <typename R>
inline R zeta_value(const V3<R>& d_ij, R r_ij, const V3<R>& d_ik, R r_ik,
                    const ParamRow<R>& p) {
  const ZetaParts<R> zp = zeta_parts(d_ij, r_ij, d_ik, r_ik, p);
  return zp.fc * zp.g * zp.ex;
}

template <typename R>
struct ZetaTerm {
  R zeta;
  V3<R> grad_i, grad_j, grad_k;  // d zeta / d x_i, x_j, x_k
};

template <typename R>
inline ZetaTerm<R> zeta_term(const V3<R>& d_ij, R r_ij, const V3<R>& d_ik, R r_ik,
                             const ParamRow<R>& p) {
  const ZetaParts<R> zp = zeta_parts(d_ij, r_ij, d_ik, r_ik, p);
  ZetaTerm<R> zt;
  zt.zeta = zp.fc * zp.g * zp.ex;

  // cos theta gradients; the i gradient balances the other two.
  const V3<R> gc_j = (zp.u_ik - zp.u_ij * zp.cos_theta) * zp.inv_rij;
  const V3<R> gc_k = (zp.u_ij - zp.u_ik * zp.cos_theta) * zp.inv_rik;
  const V3<R> gc_i = -(gc_j + gc_k);

  const R fgd = zp.fc * zp.dg * zp.ex;   // angular chain factor
  const R fge = zp.fc * zp.g * zp.dex;   // distance-difference chain factor
  const R cge = zp.dfc * zp.g * zp.ex;   // cutoff chain factor (acts along u_ik)

  zt.grad_j = gc_j * fgd + zp.u_ij * fge;
  zt.grad_k = zp.u_ik * cge + gc_k * fgd - zp.u_ik * fge;
  zt.grad_i = -(zp.u_ik * cge) + gc_i * fgd + (zp.u_ik - zp.u_ij) * fge;
  return zt;
}

/* ----------------------------------------------------------------------
   pair-level pieces of V(i, j, zeta) = 1/2 fc(r) [fR(r) + b(zeta) fA(r)]
------------------------------------------------------------------------- */

template <typename R>
struct PairV {
  R energy;    // 1/2 fc (fR + b fA)
  R dv_dr;     // radial derivative at fixed zeta
  R dv_dzeta;  // 1/2 fc fA db/dzeta
};

template <typename R>
inline PairV<R> pair_v_terms(R r, R zeta, const ParamRow<R>& p) {
  R fc, dfc, fr, dfr, fa, dfa, b, db;
  cutoff_fc(r, p.big_r, p.big_d, fc, dfc);
  pair_terms(r, p, fr, dfr, fa, dfa);
  bond_order(zeta, p, b, db);
  PairV<R> pv;
  pv.energy = R(0.5) * fc * (fr + b * fa);
  pv.dv_dr = R(0.5) * (dfc * (fr + b * fa) + fc * (dfr + b * dfa));
  pv.dv_dzeta = R(0.5) * fc * fa * db;
  return pv;
}

}  // namespace tmd::kern
