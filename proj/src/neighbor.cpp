#include "tmd/neighbor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tmd/error.hpp"

namespace tmd {

namespace {

struct CellGrid {
  int nx, ny, nz;
  double ox, oy, oz;     // origin of the binned region
  double ex, ey, ez;     // extent of the binned region
  const SimulationBox* box;

  int clamp_cell(double frac, int n) const {
    int c = int(std::floor(frac * n));
    return std::clamp(c, 0, n - 1);
  }
  int cell_of(const Vec3& p) const {
    const int cx = clamp_cell((p.x - ox) / ex, nx);
    const int cy = clamp_cell((p.y - oy) / ey, ny);
    const int cz = clamp_cell((p.z - oz) / ez, nz);
    return (cz * ny + cy) * nx + cx;
  }
};

int axis_cells(double extent, double edge) {
  return std::max(1, int(std::floor(extent / edge)));
}

}  // namespace

NeighborList build_neighbor_list(const AtomSystem& sys, double cutoff, double skin) {
  if (!(cutoff > 0.0)) throw ConfigError("neighbor cutoff must be positive");
  if (skin < 0.0) throw ConfigError("neighbor skin must be non-negative");
  sys.validate();
  const double bc = cutoff + skin;
  const double bc_sq = bc * bc;
  const SimulationBox& box = sys.box;
  for (int axis = 0; axis < 3; ++axis)
    if (box.periodic(axis) && box.length(axis) < 2.0 * bc)
      throw ConfigError("periodic box edge " + std::to_string(box.length(axis)) +
                        " A is below 2*(cutoff+skin) = " + std::to_string(2.0 * bc) +
                        " A; minimum image would be ambiguous");

  const std::size_t n = sys.size();
  CellGrid grid;
  grid.box = &box;
  double lo[3] = {0.0, 0.0, 0.0}, hi[3] = {box.lx, box.ly, box.lz};
  for (int axis = 0; axis < 3; ++axis) {
    if (!box.periodic(axis)) {
      // open axis: bin over the occupied extent instead of the box edge
      double mn = 0.0, mx = box.length(axis);
      if (n > 0) {
        mn = mx = axis == 0 ? sys.positions[0].x
                 : axis == 1 ? sys.positions[0].y
                             : sys.positions[0].z;
        for (const Vec3& p : sys.positions) {
          const double v = axis == 0 ? p.x : axis == 1 ? p.y : p.z;
          mn = std::min(mn, v);
          mx = std::max(mx, v);
        }
      }
      lo[axis] = mn;
      hi[axis] = std::max(mx, mn + bc);
    }
  }
  grid.ox = lo[0]; grid.oy = lo[1]; grid.oz = lo[2];
  grid.ex = hi[0] - lo[0]; grid.ey = hi[1] - lo[1]; grid.ez = hi[2] - lo[2];
  grid.nx = axis_cells(grid.ex, bc);
  grid.ny = axis_cells(grid.ey, bc);
  grid.nz = axis_cells(grid.ez, bc);
  const int ncells = grid.nx * grid.ny * grid.nz;

  std::vector<std::vector<std::int32_t>> bins(static_cast<std::size_t>(ncells));
  for (std::size_t a = 0; a < n; ++a)
    bins[std::size_t(grid.cell_of(sys.positions[a]))].push_back(std::int32_t(a));

  // Unique wrapped 27-neighborhoods; small periodic cell counts alias.
  std::vector<std::vector<std::int32_t>> stencil(static_cast<std::size_t>(ncells));
  for (int cz = 0; cz < grid.nz; ++cz)
    for (int cy = 0; cy < grid.ny; ++cy)
      for (int cx = 0; cx < grid.nx; ++cx) {
        auto& cells = stencil[std::size_t((cz * grid.ny + cy) * grid.nx + cx)];
        for (int dz = -1; dz <= 1; ++dz)
          for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
              int wx = cx + dx, wy = cy + dy, wz = cz + dz;
              if (box.periodic_x) wx = (wx + grid.nx) % grid.nx;
              if (box.periodic_y) wy = (wy + grid.ny) % grid.ny;
              if (box.periodic_z) wz = (wz + grid.nz) % grid.nz;
              if (wx < 0 || wx >= grid.nx || wy < 0 || wy >= grid.ny ||
                  wz < 0 || wz >= grid.nz)
                continue;
              cells.push_back(std::int32_t((wz * grid.ny + wy) * grid.nx + wx));
            }
        std::sort(cells.begin(), cells.end());
        cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
      }

  std::vector<std::vector<std::int32_t>> segments(n);
  for (std::size_t a = 0; a < n; ++a) {
    const int home = grid.cell_of(sys.positions[a]);
    for (std::int32_t c : stencil[std::size_t(home)])
      for (std::int32_t b : bins[std::size_t(c)]) {
        if (std::size_t(b) == a) continue;
        const Vec3 d = minimum_image(sys.positions[std::size_t(b)] - sys.positions[a], box);
        if (norm_sq(d) <= bc_sq) segments[a].push_back(b);
      }
    std::sort(segments[a].begin(), segments[a].end());
  }

  NeighborList list;
  list.skin = skin;
  list.build_cutoff = bc;
  list.reference_positions = sys.positions;
  list.offsets.resize(n + 1);
  list.offsets[0] = 0;
  std::size_t total = 0;
  for (std::size_t a = 0; a < n; ++a) {
    total += segments[a].size();
    list.offsets[a + 1] = std::int32_t(total);
  }
  list.neighbors.reserve(total);
  for (std::size_t a = 0; a < n; ++a)
    list.neighbors.insert(list.neighbors.end(), segments[a].begin(), segments[a].end());
  return list;
}

bool needs_rebuild(const NeighborList& list, const AtomSystem& sys) {
  const double limit_sq = 0.25 * list.skin * list.skin;
  for (std::size_t a = 0; a < sys.size(); ++a) {
    const Vec3 d = minimum_image(sys.positions[a] - list.reference_positions[a], sys.box);
    if (norm_sq(d) > limit_sq) return true;
  }
  return false;
}

void filter_segment(const NeighborList& list, std::size_t i, const AtomSystem& sys,
                    double r_cut_max, std::vector<std::int32_t>& out) {
  out.clear();
  const double cut_sq = r_cut_max * r_cut_max;
  const Vec3 xi = sys.positions[i];
  for (std::int32_t j : list.segment(i)) {
    const Vec3 d = minimum_image(sys.positions[std::size_t(j)] - xi, sys.box);
    if (norm_sq(d) <= cut_sq) out.push_back(j);
  }
}

std::vector<std::int32_t> filter_segment(const NeighborList& list, std::size_t i,
                                         const AtomSystem& sys, double r_cut_max) {
  std::vector<std::int32_t> out;
  filter_segment(list, i, sys, r_cut_max, out);
  return out;
}

PackedSegments filter_all_segments(const NeighborList& list, const AtomSystem& sys,
                                   double r_cut_max, bool apply_filter) {
  PackedSegments packed;
  if (!apply_filter) {
    packed.offsets = list.offsets;
    packed.indices = list.neighbors;
    return packed;
  }
  const std::size_t n = list.size();
  packed.offsets.resize(n + 1);
  packed.offsets[0] = 0;
  packed.indices.reserve(list.neighbors.size());
  std::vector<std::int32_t> scratch;
  for (std::size_t i = 0; i < n; ++i) {
    filter_segment(list, i, sys, r_cut_max, scratch);
    packed.indices.insert(packed.indices.end(), scratch.begin(), scratch.end());
    packed.offsets[i + 1] = std::int32_t(packed.indices.size());
  }
  return packed;
}

}  // namespace tmd
