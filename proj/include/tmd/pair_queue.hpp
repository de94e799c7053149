#pragma once

#include <cstdint>
#include <vector>

#include "tmd/neighbor.hpp"
#include "tmd/params.hpp"
#include "tmd/system.hpp"

namespace tmd {

// Flattened work queue of ordered (i, j) pairs inside their per-type cutoff,
// in deterministic order: ascending i, then segment order.  Displacements and
// distances are cached in double at enqueue time; single and mixed kernels
// recompute them from single-precision positions instead of trusting these.
struct PairQueue {
  std::vector<std::int32_t> i_idx, j_idx;
  std::vector<double> dx, dy, dz, r;

  std::size_t size() const { return i_idx.size(); }
};

// apply_cutoff = false keeps every ordered pair of the raw segments (the
// unfiltered path); the kernels then mask out-of-range pairs themselves.
PairQueue build_pair_queue(const AtomSystem& sys, const NeighborList& list,
                           const ParamTable& params, bool apply_cutoff = true);

}  // namespace tmd
