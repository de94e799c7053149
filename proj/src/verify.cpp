#include "tmd/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <span>
#include <vector>

#include "tmd/engine.hpp"
#include "tmd/kernels.hpp"
#include "tmd/neighbor.hpp"
#include "tmd/pair_queue.hpp"
#include "tmd/potential_opt.hpp"
#include "tmd/potential_ref.hpp"
#include "tmd/simd.hpp"
#include "tmd/units.hpp"

namespace tmd {

namespace {

/* ---- plumbing --------------------------------------------------------- */

// 53-bit uniforms in [0, 1); reproducible across platforms.
struct UniformDraws {
  std::mt19937_64 rng;
  explicit UniformDraws(std::uint64_t seed) : rng(seed) {}
  double operator()() { return double(rng() >> 11) * 0x1p-53; }
  double in(double lo, double hi) { return lo + (hi - lo) * (*this)(); }
  std::int32_t index(std::int32_t n) {
    return std::int32_t(rng() % std::uint64_t(n));
  }
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double max_abs_component(const std::vector<Vec3>& f) {
  double m = 0.0;
  for (const Vec3& v : f)
    m = std::max({m, std::abs(v.x), std::abs(v.y), std::abs(v.z)});
  return m;
}

double max_force_diff(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max({m, std::abs(a[i].x - b[i].x), std::abs(a[i].y - b[i].y),
                  std::abs(a[i].z - b[i].z)});
  return m;
}

bool forces_equal(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].x != b[i].x || a[i].y != b[i].y || a[i].z != b[i].z) return false;
  return true;
}

double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

ForceOptions opts(Scheme s, PrecisionMode p, int width, int k_max = 16,
                  bool filter = true, int workers = 1) {
  ForceOptions o;
  o.scheme = s;
  o.precision = p;
  o.width = width;
  o.k_max = k_max;
  o.filter = filter;
  o.workers = workers;
  return o;
}

}  // namespace

AtomSystem perturbed_lattice(const ParamTable& params, int cells, double jitter,
                             std::uint64_t seed) {
  const double a0 = 1.697 * params.r_cut_max();
  AtomSystem sys = make_diamond_lattice(cells, cells, cells, a0, 0, 28.0);
  const int ns = params.species_count();
  sys.species_masses.clear();
  for (int sp = 0; sp < ns; ++sp) {
    const auto m = units::element_mass(params.species_names()[std::size_t(sp)]);
    sys.species_masses.push_back(m ? *m : 28.0);
  }
  UniformDraws u(seed);
  for (std::size_t a = 0; a < sys.size(); ++a) {
    sys.species[a] = std::int32_t(a % std::size_t(ns));
    sys.positions[a].x =
        wrap_1d(sys.positions[a].x + u.in(-jitter, jitter), sys.box.lx);
    sys.positions[a].y =
        wrap_1d(sys.positions[a].y + u.in(-jitter, jitter), sys.box.ly);
    sys.positions[a].z =
        wrap_1d(sys.positions[a].z + u.in(-jitter, jitter), sys.box.lz);
  }
  return sys;
}

/* ---- building-block conformance ---------------------------------------- */

namespace {

template <int W>
void conformance_width(UniformDraws& u, int cases, ConformanceStats& st) {
  using simd::Mask;
  using simd::Vec;
  for (int t = 0; t < cases; ++t) {
    Vec<double, W> v, w;
    Mask<W> m;
    for (int l = 0; l < W; ++l) {
      v.lane[std::size_t(l)] = u.in(-10.0, 10.0);
      w.lane[std::size_t(l)] = u.in(-10.0, 10.0);
      m.lane[std::size_t(l)] = u() < 0.7;
    }

    // reduce_add, double lanes
    {
      double want = 0.0;
      for (int l = 0; l < W; ++l)
        if (m.lane[std::size_t(l)]) want += v.lane[std::size_t(l)];
      ++st.cases;
      if (simd::reduce_add<double>(v, m) != want) ++st.failures;
    }
    // reduce_add, single lanes with double accumulation (mixed mode)
    {
      Vec<float, W> vf;
      for (int l = 0; l < W; ++l)
        vf.lane[std::size_t(l)] = float(v.lane[std::size_t(l)]);
      double want = 0.0;
      for (int l = 0; l < W; ++l)
        if (m.lane[std::size_t(l)]) want += double(vf.lane[std::size_t(l)]);
      ++st.cases;
      if (simd::reduce_add<double>(vf, m) != want) ++st.failures;
    }
    // scatter_add with duplicate indices vs the sequential loop
    {
      std::vector<double> target(8), oracle(8);
      for (int s = 0; s < 8; ++s)
        target[std::size_t(s)] = oracle[std::size_t(s)] = u.in(-5.0, 5.0);
      Vec<std::int32_t, W> idx;
      for (int l = 0; l < W; ++l) idx.lane[std::size_t(l)] = u.index(8);
      simd::scatter_add(std::span<double>(target), idx, v, m);
      for (int l = 0; l < W; ++l)
        if (m.lane[std::size_t(l)])
          oracle[std::size_t(idx.lane[std::size_t(l)])] += v.lane[std::size_t(l)];
      ++st.cases;
      if (target != oracle) ++st.failures;
    }
    // gather
    {
      std::vector<double> src(16);
      for (double& s : src) s = u.in(-5.0, 5.0);
      Vec<std::int32_t, W> idx;
      for (int l = 0; l < W; ++l) idx.lane[std::size_t(l)] = u.index(16);
      const auto g = simd::gather(std::span<const double>(src), idx);
      bool ok = true;
      for (int l = 0; l < W; ++l)
        ok = ok && g.lane[std::size_t(l)] ==
                       src[std::size_t(idx.lane[std::size_t(l)])];
      ++st.cases;
      if (!ok) ++st.failures;
    }
    // adjacent_gather: W rows of 5 fields, transposed
    {
      constexpr int kFields = 5;
      std::vector<double> table(6 * kFields);
      for (double& s : table) s = u.in(-5.0, 5.0);
      Vec<std::int32_t, W> rows;
      for (int l = 0; l < W; ++l) rows.lane[std::size_t(l)] = u.index(6);
      Vec<double, W> out[kFields];
      simd::adjacent_gather(std::span<const double>(table), rows, kFields, out);
      bool ok = true;
      for (int f = 0; f < kFields; ++f)
        for (int l = 0; l < W; ++l)
          ok = ok &&
               out[f].lane[std::size_t(l)] ==
                   table[std::size_t(rows.lane[std::size_t(l)]) * kFields +
                         std::size_t(f)];
      ++st.cases;
      if (!ok) ++st.failures;
    }
    // select / vall / vany
    {
      const auto s = simd::select(m, v, w);
      bool ok = true;
      bool all = true, any = false;
      for (int l = 0; l < W; ++l) {
        const bool ml = m.lane[std::size_t(l)];
        ok = ok && s.lane[std::size_t(l)] ==
                       (ml ? v.lane[std::size_t(l)] : w.lane[std::size_t(l)]);
        all = all && ml;
        any = any || ml;
      }
      ok = ok && simd::vall(m) == all && simd::vany(m) == any;
      ++st.cases;
      if (!ok) ++st.failures;
    }
  }
}

}  // namespace

ConformanceStats backend_conformance(int cases_per_width, std::uint64_t seed) {
  ConformanceStats st;
  UniformDraws u(seed);
  conformance_width<1>(u, cases_per_width, st);
  conformance_width<4>(u, cases_per_width, st);
  conformance_width<8>(u, cases_per_width, st);
  conformance_width<16>(u, cases_per_width, st);
  return st;
}

/* ---- traversal instrumentation ------------------------------------------ */

namespace {

template <int W>
TraversalCounts traversal_case_w(std::uint64_t seed) {
  UniformDraws u(seed);
  std::array<std::int32_t, W> begin{}, end{};
  std::vector<char> flag;
  std::int32_t pos = 0;
  for (int l = 0; l < W; ++l) {
    const int len = int(u.index(13));  // ragged: 0..12 candidates per lane
    begin[std::size_t(l)] = pos;
    end[std::size_t(l)] = pos + len;
    for (int c = 0; c < len; ++c) flag.push_back(u() < 0.4 ? 1 : 0);
    pos += len;
  }
  auto pred = [&](int, std::int32_t c) { return flag[std::size_t(c)] != 0; };

  TraversalCounts out;

  // production policy: fire only when every unfinished lane is ready
  simd::LaneCursorSet<W> cur;
  for (int l = 0; l < W; ++l)
    cur.set_lane(l, begin[std::size_t(l)], end[std::size_t(l)]);
  std::array<std::vector<std::int32_t>, W> visited;
  long guard = 0;
  const long guard_limit = long(flag.size()) + W + 4;
  bool terminated = true;
  while (true) {
    const auto m = simd::fast_forward(cur, pred);
    if (!simd::vany(m)) break;
    ++out.all_ready;
    for (int l = 0; l < W; ++l)
      if (m.lane[std::size_t(l)])
        visited[std::size_t(l)].push_back(cur.cursor[std::size_t(l)]);
    simd::advance_ready(cur, m);
    if (++guard > guard_limit) {
      terminated = false;
      break;
    }
  }

  // per-lane oracle: exactly the predicate-true positions, in order, and a
  // firing count equal to the longest per-lane ready sequence
  bool ok = terminated;
  long max_ready = 0;
  for (int l = 0; l < W; ++l) {
    std::vector<std::int32_t> want;
    for (std::int32_t c = begin[std::size_t(l)]; c < end[std::size_t(l)]; ++c)
      if (pred(l, c)) want.push_back(c);
    ok = ok && want == visited[std::size_t(l)];
    max_ready = std::max(max_ready, long(want.size()));
  }
  ok = ok && out.all_ready == max_ready;
  out.visited_ok = ok;

  // naive lockstep: all lanes advance together, kernel fires whenever at
  // least one lane holds a ready candidate
  std::array<std::int32_t, W> c = begin;
  while (true) {
    bool live = false, fire = false;
    for (int l = 0; l < W; ++l)
      if (c[std::size_t(l)] < end[std::size_t(l)]) {
        live = true;
        if (pred(l, c[std::size_t(l)])) fire = true;
      }
    if (!live) break;
    if (fire) ++out.any_ready;
    for (int l = 0; l < W; ++l)
      if (c[std::size_t(l)] < end[std::size_t(l)]) ++c[std::size_t(l)];
  }
  return out;
}

}  // namespace

TraversalCounts traversal_case(int width, std::uint64_t seed) {
  switch (width) {
    case 1: return traversal_case_w<1>(seed);
    case 4: return traversal_case_w<4>(seed);
    case 8: return traversal_case_w<8>(seed);
    case 16: return traversal_case_w<16>(seed);
    default: throw ConfigError("unsupported traversal width");
  }
}

/* ---- the battery --------------------------------------------------------- */

namespace {

struct Checker {
  std::vector<CheckResult> results;
  void add(const std::string& name, bool pass, const std::string& detail) {
    results.push_back({name, pass, detail});
  }
};

void check_params(const ParamTable& params, Checker& c) {
  int bad = 0;
  std::string note;

  const std::string once = serialize_param_table(params);
  bool round_trip = false;
  try {
    const ParamTable reparsed = parse_param_text(once, "<roundtrip>");
    round_trip = serialize_param_table(reparsed) == once &&
                 reparsed.species_count() == params.species_count();
    if (round_trip)
      for (std::size_t e = 0; e < params.entries().size(); ++e) {
        const TersoffEntry& a = params.entries()[e];
        const TersoffEntry& b = reparsed.entries()[e];
        round_trip = round_trip && a.m == b.m && a.gamma == b.gamma &&
                     a.lambda3 == b.lambda3 && a.c == b.c && a.d == b.d &&
                     a.h == b.h && a.eta == b.eta && a.beta == b.beta &&
                     a.lambda2 == b.lambda2 && a.big_b == b.big_b &&
                     a.big_r == b.big_r && a.big_d == b.big_d &&
                     a.lambda1 == b.lambda1 && a.big_a == b.big_a;
      }
  } catch (const ParseError&) {
  }
  if (!round_trip) {
    ++bad;
    note += " round-trip broken;";
  }

  // malformed inputs, each of which must be rejected with a parse error
  const char* rejects[] = {
      // d = 0
      "Xx Xx Xx 3 1.0 1.3 4.8 0.0 0.0 22.9 0.33 1.32 95.3 3.0 0.2 3.2 3264.7\n",
      // eta = 0
      "Xx Xx Xx 3 1.0 1.3 4.8 2.0 0.0 0.0 0.33 1.32 95.3 3.0 0.2 3.2 3264.7\n",
      // R <= D
      "Xx Xx Xx 3 1.0 1.3 4.8 2.0 0.0 22.9 0.33 1.32 95.3 0.1 0.2 3.2 3264.7\n",
      // m not in {1, 3}
      "Xx Xx Xx 2 1.0 1.3 4.8 2.0 0.0 22.9 0.33 1.32 95.3 3.0 0.2 3.2 3264.7\n",
      // non-numeric field
      "Xx Xx Xx 3 oops 1.3 4.8 2.0 0.0 22.9 0.33 1.32 95.3 3.0 0.2 3.2 3264.7\n",
      // truncated entry
      "Xx Xx Xx 3 1.0 1.3 4.8 2.0 0.0 22.9 0.33 1.32 95.3 3.0 0.2\n",
      // duplicate triplet
      "Xx Xx Xx 3 1.0 1.3 4.8 2.0 0.0 22.9 0.33 1.32 95.3 3.0 0.2 3.2 3264.7\n"
      "Xx Xx Xx 3 1.0 1.3 4.8 2.0 0.0 22.9 0.33 1.32 95.3 3.0 0.2 3.2 3264.7\n",
      // two species, 2 of 8 triplets supplied
      "Xx Xx Xx 3 1.0 1.3 4.8 2.0 0.0 22.9 0.33 1.32 95.3 3.0 0.2 3.2 3264.7\n"
      "Yy Yy Yy 3 1.0 1.3 4.8 2.0 0.0 22.9 0.33 1.32 95.3 3.0 0.2 3.2 3264.7\n",
  };
  int rejected = 0;
  for (const char* text : rejects) {
    try {
      parse_param_text(text, "<fixture>");
      ++bad;
      note += " malformed fixture accepted;";
    } catch (const ParseError&) {
      ++rejected;
    }
  }
  c.add("param_validation", bad == 0,
        "round-trip stable, " + std::to_string(rejected) + "/" +
            std::to_string(std::size(rejects)) + " malformed inputs rejected" +
            note);
}

void check_min_image(Checker& c, std::uint64_t seed) {
  UniformDraws u(seed);
  int bad = 0;

  SimulationBox box{10.0, 10.0, 10.0, true, true, true};
  const Vec3 zero = minimum_image({0.0, 0.0, 0.0}, box);
  if (zero.x != 0.0 || zero.y != 0.0 || zero.z != 0.0) ++bad;
  if (minimum_image({9.0, 0.0, 0.0}, box).x != -1.0) ++bad;
  if (minimum_image({5.0, 0.0, 0.0}, box).x != -5.0) ++bad;
  if (minimum_image({-5.0, 0.0, 0.0}, box).x != -5.0) ++bad;

  for (int t = 0; t < 4000; ++t) {
    const double len = u.in(1.0, 20.0);
    const double d = u.in(-3.0 * len, 3.0 * len);
    const double m = minimum_image_1d(d, len);
    if (!(m >= -0.5 * len && m < 0.5 * len)) ++bad;
    const double q = (d - m) / len;
    if (std::abs(q - std::round(q)) > 1e-9) ++bad;
    if (minimum_image_1d(m, len) != m) ++bad;  // idempotent
    if (!(std::abs(m) <= std::abs(d) + 1e-12)) ++bad;
    const double w = wrap_1d(d, len);
    if (!(w >= 0.0 && w < len)) ++bad;
    const double qw = (d - w) / len;
    if (std::abs(qw - std::round(qw)) > 1e-9) ++bad;
  }
  c.add("minimum_image", bad == 0,
        bad == 0 ? "4 pinned cases + 4000 random displacements"
                 : std::to_string(bad) + " violations");
}

void check_neighbor(const ParamTable& params, Checker& c, std::uint64_t seed) {
  int bad = 0;
  std::string note;
  AtomSystem sys = perturbed_lattice(params, 2, 0.35, seed);
  const double cutoff = params.r_cut_max();
  const double skin = 0.5;
  const NeighborList list = build_neighbor_list(sys, cutoff, skin);

  // all-pairs oracle
  const double bc2 = (cutoff + skin) * (cutoff + skin);
  for (std::size_t i = 0; i < sys.size(); ++i) {
    std::vector<std::int32_t> brute;
    for (std::size_t j = 0; j < sys.size(); ++j) {
      if (j == i) continue;
      const Vec3 d = minimum_image(sys.positions[j] - sys.positions[i], sys.box);
      if (norm_sq(d) <= bc2) brute.push_back(std::int32_t(j));
    }
    const auto seg = list.segment(i);
    if (!std::equal(brute.begin(), brute.end(), seg.begin(), seg.end())) ++bad;
  }
  if (bad > 0) note += " " + std::to_string(bad) + " segments differ from brute force;";

  // filter at the build cutoff reproduces a skinless build
  const NeighborList tight = build_neighbor_list(sys, cutoff, 0.0);
  const PackedSegments filtered = filter_all_segments(list, sys, cutoff, true);
  for (std::size_t i = 0; i < sys.size(); ++i) {
    const auto a = filtered.segment(i);
    const auto b = tight.segment(i);
    if (!std::equal(a.begin(), a.end(), b.begin(), b.end())) {
      ++bad;
      note += " filtered segment " + std::to_string(i) + " != skinless build;";
      break;
    }
  }

  // rebuild trigger: exact boundary stays false, 0.51 skin trips it
  {
    AtomSystem two;
    two.box = {30.0, 30.0, 30.0, false, false, false};
    two.positions = {{1.0, 1.0, 1.0}, {3.0, 1.0, 1.0}};
    two.velocities.assign(2, Vec3{});
    two.forces.assign(2, Vec3{});
    two.species.assign(2, 0);
    two.species_masses = {28.0};
    const NeighborList l2 = build_neighbor_list(two, 2.5, 0.5);
    if (needs_rebuild(l2, two)) ++bad;
    two.positions[0].x = 0.75;  // displacement exactly skin/2
    if (needs_rebuild(l2, two)) ++bad;
    two.positions[0].x = 1.0 - 0.51 * 0.5;
    if (!needs_rebuild(l2, two)) ++bad;
  }

  // periodic box below 2 (cutoff + skin) must be refused
  {
    AtomSystem tiny = sys;
    tiny.box.lx = 2.0 * (cutoff + skin) - 0.1;
    bool threw = false;
    try {
      build_neighbor_list(tiny, cutoff, skin);
    } catch (const ConfigError&) {
      threw = true;
    }
    if (!threw) {
      ++bad;
      note += " undersized periodic box accepted;";
    }
  }

  c.add("neighbor_list", bad == 0,
        bad == 0 ? std::to_string(sys.size()) +
                       " segments match brute force; filter, rebuild and box "
                       "guards hold"
                 : note);
}

void check_pair_queue(const ParamTable& params, Checker& c, std::uint64_t seed) {
  const AtomSystem sys = perturbed_lattice(params, 2, 0.12, seed);
  const NeighborList list = build_neighbor_list(sys, params.r_cut_max(), 0.5);
  const PairQueue queue = build_pair_queue(sys, list, params);

  std::vector<std::pair<std::int32_t, std::int32_t>> visited;
  detail::compute_ref_instrumented(sys, list, params,
                                   [&](std::int32_t i, std::int32_t j) {
                                     visited.push_back({i, j});
                                   });
  bool ok = queue.size() == visited.size();
  if (ok)
    for (std::size_t q = 0; q < queue.size(); ++q)
      ok = ok && queue.i_idx[q] == visited[q].first &&
           queue.j_idx[q] == visited[q].second;
  c.add("pair_queue", ok,
        std::to_string(queue.size()) + " queued pairs " +
            (ok ? "identical to the reference pair stream"
                : "differ from the reference pair stream"));
}

void check_backend_blocks(Checker& c, std::uint64_t seed) {
  const ConformanceStats st = backend_conformance(500, seed);
  c.add("backend_blocks", st.failures == 0,
        std::to_string(st.cases) + " cases across widths 1/4/8/16, " +
            std::to_string(st.failures) + " mismatches");
}

void check_fast_forward(Checker& c, std::uint64_t seed) {
  int bad = 0;
  long strict = 0;
  long fires = 0, lockstep = 0;
  for (int t = 0; t < 60; ++t) {
    for (int width : {1, 4, 8, 16}) {
      const TraversalCounts tc = traversal_case(width, seed + std::uint64_t(t));
      if (!tc.visited_ok) ++bad;
      if (tc.all_ready > tc.any_ready) ++bad;
      if (tc.all_ready < tc.any_ready) ++strict;
      fires += tc.all_ready;
      lockstep += tc.any_ready;
    }
  }
  if (strict == 0) ++bad;  // W >= 4 ragged cases must show a saving somewhere
  c.add("fast_forward", bad == 0,
        "240 traversals visited exactly the ready positions; " +
            std::to_string(fires) + " firings vs " + std::to_string(lockstep) +
            " lockstep (" + std::to_string(strict) + " strictly fewer)");
}

void check_zeta_gradients(const ParamTable& params, Checker& c,
                          std::uint64_t seed) {
  UniformDraws u(seed);
  const int ns = params.species_count();
  int bad = 0;
  double worst_sum = 0.0, worst_fd = 0.0;

  auto random_dir = [&]() {
    while (true) {
      Vec3 v{u.in(-1.0, 1.0), u.in(-1.0, 1.0), u.in(-1.0, 1.0)};
      const double n = norm(v);
      if (n > 0.2) return v * (1.0 / n);
    }
  };

  for (int t = 0; t < 300; ++t) {
    const TersoffEntry& e =
        params.entry(u.index(ns), u.index(ns), u.index(ns));
    const double lo = 0.55 * (e.big_r - e.big_d);
    const double hi = e.big_r + e.big_d + 0.2;
    const Vec3 ri{u.in(0.0, 2.0), u.in(0.0, 2.0), u.in(0.0, 2.0)};
    const Vec3 rj = ri + random_dir() * u.in(lo, hi);
    const Vec3 rk = ri + random_dir() * u.in(lo, hi);
    const auto zt = zeta_term(ri, rj, rk, e);

    const double scale =
        std::max(1.0, max_abs_component({zt.grad_i, zt.grad_j, zt.grad_k}));
    const Vec3 s = zt.grad_i + zt.grad_j + zt.grad_k;
    const double sum_err =
        std::max({std::abs(s.x), std::abs(s.y), std::abs(s.z)}) / scale;
    worst_sum = std::max(worst_sum, sum_err);
    if (sum_err > 1e-12) ++bad;

    // beyond the cutoff the whole term must vanish exactly
    if (norm(rk - ri) >= e.big_r + e.big_d) {
      if (zt.zeta != 0.0 ||
          max_abs_component({zt.grad_i, zt.grad_j, zt.grad_k}) != 0.0)
        ++bad;
      continue;
    }

    // finite differences of zeta on each of the nine coordinates
    if (t < 120) {
      const double h = 1e-6;
      Vec3 pos[3] = {ri, rj, rk};
      const Vec3 grads[3] = {zt.grad_i, zt.grad_j, zt.grad_k};
      for (int a = 0; a < 3; ++a) {
        double* coord[3] = {&pos[a].x, &pos[a].y, &pos[a].z};
        const double analytic[3] = {grads[a].x, grads[a].y, grads[a].z};
        for (int cix = 0; cix < 3; ++cix) {
          const double orig = *coord[cix];
          *coord[cix] = orig + h;
          const double zp = zeta_term(pos[0], pos[1], pos[2], e).zeta;
          *coord[cix] = orig - h;
          const double zm = zeta_term(pos[0], pos[1], pos[2], e).zeta;
          *coord[cix] = orig;
          const double fd = (zp - zm) / (2.0 * h);
          const double err = std::abs(fd - analytic[cix]) /
                             std::max(1.0, std::abs(analytic[cix]));
          worst_fd = std::max(worst_fd, err);
          if (err > 2e-6) ++bad;
        }
      }
    }
  }
  c.add("zeta_gradients", bad == 0,
        "gradient sum residual " + sci(worst_sum) + ", finite-difference gap " +
            sci(worst_fd));
}

void check_force_gradient(const AtomSystem& sys, const NeighborList& list,
                          const ParamTable& params, Checker& c) {
  const EnergyForces ref = compute_ref(sys, list, params);
  const std::vector<Vec3> fd = fd_force_oracle(sys, list, params, 1e-5);
  const double scale = std::max(1.0, max_abs_component(ref.forces));
  const double err = max_force_diff(ref.forces, fd) / scale;
  c.add("force_gradient", err < 1e-6,
        "max relative gap to central differences " + sci(err));
}

void check_newton(const AtomSystem& sys, const NeighborList& list,
                  const ParamTable& params, Checker& c) {
  double worst = 0.0;
  for (const ForceOptions& o :
       {opts(Scheme::Ref, PrecisionMode::Ref, 0),
        opts(Scheme::V1, PrecisionMode::OptD, 4),
        opts(Scheme::V2, PrecisionMode::OptD, 8)}) {
    const EnergyForces ef = evaluate_forces(sys, list, params, o);
    Vec3 s{};
    for (const Vec3& f : ef.forces) s += f;
    worst = std::max({worst, std::abs(s.x), std::abs(s.y), std::abs(s.z)});
  }
  c.add("newton_sum", worst < 1e-10,
        "largest |sum F| component " + sci(worst) + " across ref/v1/v2");
}

void check_translation(const AtomSystem& sys, const NeighborList& list,
                       const ParamTable& params, Checker& c) {
  const EnergyForces base = compute_ref(sys, list, params);
  AtomSystem moved = sys;
  const Vec3 shift{1.7, -0.9, 2.3};
  for (Vec3& p : moved.positions) p = wrap_position(p + shift, moved.box);
  const NeighborList list2 = build_neighbor_list(moved, params.r_cut_max(), list.skin);
  const EnergyForces after = compute_ref(moved, list2, params);
  const double e_err = rel_diff(base.energy, after.energy);
  const double f_err = max_force_diff(base.forces, after.forces);
  c.add("translation_invariance", e_err < 1e-12 && f_err < 1e-12,
        "energy shift " + sci(e_err) + " rel, force shift " + sci(f_err));
}

void check_permutation(const AtomSystem& sys, const NeighborList& list,
                       const ParamTable& params, Checker& c,
                       std::uint64_t seed) {
  const EnergyForces base = compute_ref(sys, list, params);
  const std::size_t n = sys.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t(0));
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);

  AtomSystem shuffled = sys;
  for (std::size_t a = 0; a < n; ++a) {
    shuffled.positions[perm[a]] = sys.positions[a];
    shuffled.species[perm[a]] = sys.species[a];
  }
  const NeighborList list2 =
      build_neighbor_list(shuffled, params.r_cut_max(), list.skin);
  const EnergyForces after = compute_ref(shuffled, list2, params);
  const double e_err = rel_diff(base.energy, after.energy);
  double f_err = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    const Vec3 d = after.forces[perm[a]] - base.forces[a];
    f_err = std::max({f_err, std::abs(d.x), std::abs(d.y), std::abs(d.z)});
  }
  c.add("permutation_equivariance", e_err < 1e-12 && f_err < 1e-10,
        "energy " + sci(e_err) + " rel, permuted force gap " + sci(f_err));
}

void check_scheme_equivalence(const AtomSystem& sys, const NeighborList& list,
                              const ParamTable& params, Checker& c) {
  const EnergyForces ref = compute_ref(sys, list, params);
  const double scale = std::max(1.0, max_abs_component(ref.forces));
  double worst_e = 0.0, worst_f = 0.0;
  int combos = 0;

  auto probe = [&](const ForceOptions& o) {
    const EnergyForces ef = evaluate_forces(sys, list, params, o);
    worst_e = std::max(worst_e, rel_diff(ref.energy, ef.energy));
    worst_f = std::max(worst_f, max_force_diff(ref.forces, ef.forces) / scale);
    ++combos;
  };

  probe(opts(Scheme::ScalarOpt, PrecisionMode::OptD, 0));
  probe(opts(Scheme::V3, PrecisionMode::OptD, 0));
  for (int w : {1, 4, 8, 16}) {
    probe(opts(Scheme::V1, PrecisionMode::OptD, w));
    probe(opts(Scheme::V2, PrecisionMode::OptD, w));
  }
  c.add("scheme_equivalence", worst_e < 1e-12 && worst_f < 1e-10,
        std::to_string(combos) + " combos: worst energy " + sci(worst_e) +
            " rel, worst force " + sci(worst_f));
}

void check_kmax(const AtomSystem& sys, const NeighborList& list,
                const ParamTable& params, Checker& c) {
  const EnergyForces ref = compute_ref(sys, list, params);
  int bad = 0;
  std::string note;
  double worst_e = 0.0, worst_f = 0.0;

  for (int k : {0, 1, 2, 3, 5, 16, 64}) {
    const EnergyForces a = compute_opt_scalar(sys, list, params, k);
    const EnergyForces b = evaluate_forces(
        sys, list, params, opts(Scheme::V2, PrecisionMode::OptD, 4, k));
    worst_e = std::max({worst_e, rel_diff(ref.energy, a.energy),
                        rel_diff(ref.energy, b.energy)});
    worst_f = std::max({worst_f, max_force_diff(ref.forces, a.forces),
                        max_force_diff(ref.forces, b.forces)});
  }
  if (worst_e > 1e-12 || worst_f > 1e-10) {
    ++bad;
    note += " sweep outside tolerance;";
  }

  // the degenerate cache must reproduce the reference bit for bit
  const EnergyForces zero_scalar = compute_opt_scalar(sys, list, params, 0);
  if (zero_scalar.energy != ref.energy ||
      !forces_equal(zero_scalar.forces, ref.forces)) {
    ++bad;
    note += " scalar k_max=0 not bitwise;";
  }
  const EnergyForces zero_v3 = evaluate_forces(
      sys, list, params, opts(Scheme::V3, PrecisionMode::OptD, 0, 0));
  if (zero_v3.energy != ref.energy || !forces_equal(zero_v3.forces, ref.forces)) {
    ++bad;
    note += " v3 k_max=0 not bitwise;";
  }
  // and the scalar pipeline at width 1 must equal the cached scalar path
  const EnergyForces cached_scalar = compute_opt_scalar(sys, list, params, 16);
  const EnergyForces cached_v3 = evaluate_forces(
      sys, list, params, opts(Scheme::V3, PrecisionMode::OptD, 0, 16));
  if (cached_v3.energy != cached_scalar.energy ||
      !forces_equal(cached_v3.forces, cached_scalar.forces)) {
    ++bad;
    note += " v3 k_max=16 differs from cached scalar path;";
  }

  c.add("kmax_sweep", bad == 0,
        bad == 0 ? "k_max {0,1,2,3,5,16,64}: worst energy " + sci(worst_e) +
                       " rel, worst force " + sci(worst_f) +
                       "; degenerate cache bitwise"
                 : note);
}

void check_filter(const AtomSystem& sys, const NeighborList& list,
                  const ParamTable& params, Checker& c) {
  double worst_e = 0.0, worst_f = 0.0;
  for (const auto& [scheme, width] :
       std::initializer_list<std::pair<Scheme, int>>{{Scheme::V1, 4},
                                                     {Scheme::V2, 8}}) {
    const EnergyForces on = evaluate_forces(
        sys, list, params, opts(scheme, PrecisionMode::OptD, width, 16, true));
    const EnergyForces off = evaluate_forces(
        sys, list, params, opts(scheme, PrecisionMode::OptD, width, 16, false));
    const double scale = std::max(1.0, max_abs_component(on.forces));
    worst_e = std::max(worst_e, rel_diff(on.energy, off.energy));
    worst_f = std::max(worst_f, max_force_diff(on.forces, off.forces) / scale);
  }
  c.add("filter_soundness", worst_e < 1e-12 && worst_f < 1e-12,
        "filtered vs raw segments: energy " + sci(worst_e) + " rel, force " +
            sci(worst_f));
}

void check_precision_gap(const AtomSystem& sys, const NeighborList& list,
                         const ParamTable& params, Checker& c) {
  const EnergyForces ref = compute_ref(sys, list, params);
  const EnergyForces single = evaluate_forces(
      sys, list, params, opts(Scheme::V2, PrecisionMode::OptS, 16));
  const EnergyForces mixed = evaluate_forces(
      sys, list, params, opts(Scheme::V2, PrecisionMode::OptM, 16));
  const double e_s = rel_diff(ref.energy, single.energy);
  const double e_m = rel_diff(ref.energy, mixed.energy);
  const double scale = std::max(1.0, max_abs_component(ref.forces));
  const double f_s = max_force_diff(ref.forces, single.forces) / scale;
  c.add("precision_gap", e_s < 1e-5 && e_m < 1e-5,
        "single energy gap " + sci(e_s) + " rel (force " + sci(f_s) +
            "), mixed " + sci(e_m));
}

void check_determinism(const AtomSystem& sys, const NeighborList& list,
                       const ParamTable& params, Checker& c) {
  int bad = 0;
  for (const ForceOptions& o :
       {opts(Scheme::V2, PrecisionMode::OptD, 8),
        opts(Scheme::V2, PrecisionMode::OptS, 8),
        opts(Scheme::V1, PrecisionMode::OptM, 4),
        opts(Scheme::V2, PrecisionMode::OptD, 8, 16, true, 2)}) {
    const EnergyForces a = evaluate_forces(sys, list, params, o);
    const EnergyForces b = evaluate_forces(sys, list, params, o);
    if (a.energy != b.energy || !forces_equal(a.forces, b.forces)) ++bad;
  }

  // identical seeded runs must render identical bytes, wall time aside
  RunConfig cfg;
  cfg.steps = 25;
  cfg.scheme = Scheme::V2;
  cfg.width = 8;
  cfg.thermo_every = 5;
  auto run_once = [&] {
    AtomSystem s = sys;
    init_velocities(s, 300.0, 99);
    Engine eng(std::move(s), params, cfg);
    std::string csv = eng.run().to_csv();
    const std::size_t clock_line = csv.find("ns_per_day,");
    return clock_line == std::string::npos ? csv : csv.substr(0, clock_line);
  };
  if (run_once() != run_once()) ++bad;

  c.add("determinism", bad == 0,
        bad == 0 ? "re-evaluations bitwise, 25-step rerun byte-identical"
                 : std::to_string(bad) + " nondeterministic paths");
}

}  // namespace

std::vector<CheckResult> run_verification(const ParamTable& params,
                                          std::uint64_t seed) {
  Checker c;
  check_params(params, c);
  check_min_image(c, seed + 1);
  check_neighbor(params, c, seed + 2);
  check_pair_queue(params, c, seed + 3);
  check_backend_blocks(c, seed + 4);
  check_fast_forward(c, seed + 5);
  check_zeta_gradients(params, c, seed + 6);

  const AtomSystem sys = perturbed_lattice(params, 2, 0.12, seed + 7);
  const NeighborList list = build_neighbor_list(sys, params.r_cut_max(), 0.5);
  check_force_gradient(sys, list, params, c);
  check_newton(sys, list, params, c);
  check_translation(sys, list, params, c);
  check_permutation(sys, list, params, c, seed + 8);
  check_scheme_equivalence(sys, list, params, c);
  check_kmax(sys, list, params, c);
  check_filter(sys, list, params, c);
  check_precision_gap(sys, list, params, c);
  check_determinism(sys, list, params, c);
  return c.results;
}

}  // namespace tmd
