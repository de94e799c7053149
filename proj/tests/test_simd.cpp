#include <cmath>
#include <cstdint>
#include <span>
#include <type_traits>
#include <vector>

#include "doctest.h"
#include "tmd/simd.hpp"

using namespace tmd::simd;

namespace {

template <int W>
Vec<double, W> iota(double start, double step) {
  Vec<double, W> v;
  for (int l = 0; l < W; ++l) v[l] = start + step * l;
  return v;
}

}  // namespace

TEST_SUITE_BEGIN("simd");

TEST_CASE("lanewise arithmetic agrees with scalar ops bit for bit") {
  const auto a = iota<8>(0.3, 0.7);
  const auto b = iota<8>(2.1, -0.4);
  const auto sum = a + b, dif = a - b, prd = a * b, quo = a / b, neg = -a;
  for (int l = 0; l < 8; ++l) {
    CHECK(sum[l] == a[l] + b[l]);
    CHECK(dif[l] == a[l] - b[l]);
    CHECK(prd[l] == a[l] * b[l]);
    CHECK(quo[l] == a[l] / b[l]);
    CHECK(neg[l] == -a[l]);
  }
}

TEST_CASE("lanewise math functions match the scalar library") {
  const auto a = iota<4>(0.25, 1.5);
  const auto s = sqrt(a), e = exp(a), sn = sin(a), fl = floor(a);
  const auto p = pow(a, Vec<double, 4>(1.7));
  for (int l = 0; l < 4; ++l) {
    CHECK(s[l] == std::sqrt(a[l]));
    CHECK(e[l] == std::exp(a[l]));
    CHECK(sn[l] == std::sin(a[l]));
    CHECK(fl[l] == std::floor(a[l]));
    CHECK(p[l] == std::pow(a[l], 1.7));
  }
  const auto lo = min(a, Vec<double, 4>(1.0));
  const auto hi = max(a, Vec<double, 4>(1.0));
  for (int l = 0; l < 4; ++l) {
    CHECK(lo[l] == std::min(a[l], 1.0));
    CHECK(hi[l] == std::max(a[l], 1.0));
  }
}

TEST_CASE("comparisons, select, and mask logic") {
  const auto a = iota<4>(0.0, 1.0);        // 0 1 2 3
  const Vec<double, 4> b(1.5);
  const Mask<4> lt = a < b;                // 1 1 0 0
  CHECK(lt[0]);
  CHECK(lt[1]);
  CHECK(!lt[2]);
  CHECK(!lt[3]);
  CHECK(vany(lt));
  CHECK(!vall(lt));
  CHECK(vall(lt | !lt));
  CHECK(!vany(lt & !lt));

  const auto pick = select(lt, a, b);
  CHECK(pick[0] == 0.0);
  CHECK(pick[1] == 1.0);
  CHECK(pick[2] == 1.5);
  CHECK(pick[3] == 1.5);

  Vec<std::int32_t, 4> ia, ib;
  for (int l = 0; l < 4; ++l) {
    ia[l] = l;
    ib[l] = 2;
  }
  const Mask<4> ne = ia != ib;
  CHECK(ne[0]);
  CHECK(ne[1]);
  CHECK(!ne[2]);
  CHECK(ne[3]);
}

TEST_CASE("reduce_add pinned cases") {
  const Vec<double, 8> ones(1.0);
  CHECK(reduce_add<double>(ones, Mask<8>(true)) == 8.0);
  CHECK(reduce_add<double>(ones, Mask<8>()) == 0.0);  // default mask is empty

  // ascending lane order, masked lanes skipped
  Vec<double, 4> v;
  v[0] = 0.1;
  v[1] = 1e16;
  v[2] = -1e16;
  v[3] = 0.2;
  Mask<4> m(true);
  CHECK(reduce_add<double>(v, m) == ((0.1 + 1e16) + -1e16) + 0.2);
  m.lane[1] = m.lane[2] = false;
  CHECK(reduce_add<double>(v, m) == 0.1 + 0.2);
}

TEST_CASE("reduce_add can accumulate float lanes in double") {
  Vec<float, 4> v;
  for (int l = 0; l < 4; ++l) v[l] = 0.1f * float(l + 1);
  double want = 0.0;
  for (int l = 0; l < 4; ++l) want += double(v[l]);
  CHECK(reduce_add<double>(v, Mask<4>(true)) == want);
}

TEST_CASE("scatter_add serializes conflicting lanes in lane order") {
  std::vector<double> target(4, 0.0);
  Vec<std::int32_t, 8> idx;
  Vec<double, 8> v;
  for (int l = 0; l < 8; ++l) {
    idx[l] = 2;  // every lane hits the same slot
    v[l] = 0.1 * (l + 1);
  }
  scatter_add(std::span<double>(target), idx, v, Mask<8>(true));
  double want = 0.0;
  for (int l = 0; l < 8; ++l) want += v[l];
  CHECK(target[2] == want);
  CHECK(target[0] == 0.0);
  CHECK(target[1] == 0.0);
  CHECK(target[3] == 0.0);
}

TEST_CASE("scatter_add skips masked lanes") {
  std::vector<double> target(4, 1.0);
  Vec<std::int32_t, 4> idx;
  Vec<double, 4> v;
  Mask<4> m;
  for (int l = 0; l < 4; ++l) {
    idx[l] = l;
    v[l] = 10.0;
    m.lane[l] = (l % 2) == 0;
  }
  scatter_add(std::span<double>(target), idx, v, m);
  CHECK(target[0] == 11.0);
  CHECK(target[1] == 1.0);
  CHECK(target[2] == 11.0);
  CHECK(target[3] == 1.0);
}

TEST_CASE("gather and width-1 degeneration") {
  const std::vector<double> src{10.0, 11.0, 12.0, 13.0};
  Vec<std::int32_t, 4> idx;
  idx[0] = 3;
  idx[1] = 0;
  idx[2] = 2;
  idx[3] = 0;
  const auto g = gather(std::span<const double>(src), idx);
  CHECK(g[0] == 13.0);
  CHECK(g[1] == 10.0);
  CHECK(g[2] == 12.0);
  CHECK(g[3] == 10.0);

  // width 1 is a plain load
  Vec<std::int32_t, 1> one;
  one[0] = 1;
  CHECK(gather(std::span<const double>(src), one)[0] == 11.0);
}

TEST_CASE("adjacent_gather transposes parameter rows") {
  // 3 rows of 5 fields: row r holds {100r, 100r+1, ...}
  std::vector<double> table;
  for (int r = 0; r < 3; ++r)
    for (int f = 0; f < 5; ++f) table.push_back(100.0 * r + f);

  Vec<std::int32_t, 4> rows;
  rows[0] = 2;
  rows[1] = 0;
  rows[2] = 1;
  rows[3] = 2;
  Vec<double, 4> out[5];
  adjacent_gather(std::span<const double>(table), rows, 5, out);
  for (int f = 0; f < 5; ++f)
    for (int l = 0; l < 4; ++l)
      CHECK(out[f][l] == 100.0 * rows[l] + f);

  // all lanes on one row broadcast that row
  adjacent_gather(std::span<const double>(table), Vec<std::int32_t, 4>(1), 5, out);
  for (int f = 0; f < 5; ++f)
    for (int l = 0; l < 4; ++l) CHECK(out[f][l] == 100.0 + f);
}

TEST_CASE("fast_forward visits exactly the ready positions") {
  // shared candidate array; each lane owns a slice
  //   lane 0: [0,3)  flags 1 0 1
  //   lane 1: [3,3)  empty
  //   lane 2: [3,7)  flags 0 0 0 1
  //   lane 3: [7,9)  flags 1 1
  const bool flags[] = {true, false, true, false, false,
                        false, true, true, true};
  LaneCursorSet<4> cur;
  cur.set_lane(0, 0, 3);
  cur.set_lane(1, 3, 3);
  cur.set_lane(2, 3, 7);
  cur.set_lane(3, 7, 9);
  CHECK(cur.exhausted(1));
  CHECK(!cur.all_exhausted());

  auto ready = [&](int, std::int32_t c) { return flags[c]; };
  std::vector<std::vector<std::int32_t>> visited(4);
  int fires = 0;
  while (true) {
    const Mask<4> m = fast_forward(cur, ready);
    if (!vany(m)) break;
    ++fires;
    for (int l = 0; l < 4; ++l)
      if (m[l]) visited[std::size_t(l)].push_back(cur.cursor[std::size_t(l)]);
    advance_ready(cur, m);
  }
  CHECK(fires == 2);  // longest ready sequence has 2 entries
  CHECK(visited[0] == std::vector<std::int32_t>{0, 2});
  CHECK(visited[1].empty());
  CHECK(visited[2] == std::vector<std::int32_t>{6});
  CHECK(visited[3] == std::vector<std::int32_t>{7, 8});
  CHECK(cur.all_exhausted());
}

TEST_CASE("fast_forward with an always-true predicate is lockstep") {
  LaneCursorSet<4> cur;
  for (int l = 0; l < 4; ++l) cur.set_lane(l, 0, 5);
  auto always = [](int, std::int32_t) { return true; };
  int fires = 0;
  while (vany(fast_forward(cur, always))) {
    for (int l = 0; l < 4; ++l)
      CHECK(cur.cursor[std::size_t(l)] == fires);  // no lane runs ahead
    Mask<4> all(true);
    advance_ready(cur, all);
    ++fires;
  }
  CHECK(fires == 5);
}

TEST_CASE("backend type bundles") {
  static_assert(VectorBackend<SoftwareBackend<double, double, 4>>);
  static_assert(VectorBackend<SoftwareBackend<float, float, 8>>);
  static_assert(VectorBackend<SoftwareBackend<float, double, 16>>);
  static_assert(SoftwareBackend<float, double, 16>::width == 16);
  CHECK(std::is_same_v<SoftwareBackend<float, double, 8>::avec, Vec<double, 8>>);
  CHECK(std::is_same_v<SoftwareBackend<float, double, 8>::fvec, Vec<float, 8>>);
}

TEST_SUITE_END();
