#include "tmd/pair_queue.hpp"

#include <cmath>

namespace tmd {

PairQueue build_pair_queue(const AtomSystem& sys, const NeighborList& list,
                           const ParamTable& params, bool apply_cutoff) {
  const FlatParams<double> flat = FlatParams<double>::from(params);
  PairQueue q;
  q.i_idx.reserve(list.neighbors.size());
  for (std::size_t i = 0; i < sys.size(); ++i) {
    const Vec3 xi = sys.positions[i];
    const int si = sys.species[i];
    for (std::int32_t j : list.segment(i)) {
      const int sj = sys.species[std::size_t(j)];
      const Vec3 d = minimum_image(sys.positions[std::size_t(j)] - xi, sys.box);
      const double r2 = norm_sq(d);
      if (apply_cutoff) {
        const double cutsq =
            flat.rows[std::size_t(flat.row_index(si, sj, sj)) * ParamField::kCount +
                      ParamField::kCutSq];
        if (r2 > cutsq) continue;
      }
      q.i_idx.push_back(std::int32_t(i));
      q.j_idx.push_back(j);
      q.dx.push_back(d.x);
      q.dy.push_back(d.y);
      q.dz.push_back(d.z);
      q.r.push_back(std::sqrt(r2));
    }
  }
  return q;
}

}  // namespace tmd
