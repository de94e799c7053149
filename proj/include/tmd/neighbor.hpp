#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tmd/system.hpp"

namespace tmd {

// Extended Verlet list: for each atom, all others within cutoff + skin under
// minimum image.  Lists are full (i sees j and j sees i) and each segment is
// sorted ascending.  reference_positions remember where the list was built so
// staleness can be detected.
struct NeighborList {
  std::vector<std::int32_t> offsets;    // size N+1
  std::vector<std::int32_t> neighbors;  // packed segments
  double skin = 0.0;
  double build_cutoff = 0.0;            // cutoff + skin
  std::vector<Vec3> reference_positions;

  std::size_t size() const { return offsets.empty() ? 0 : offsets.size() - 1; }
  std::span<const std::int32_t> segment(std::size_t i) const {
    return {neighbors.data() + offsets[i],
            std::size_t(offsets[i + 1] - offsets[i])};
  }
};

// Builds the list with cell binning.  Periodic box edges must satisfy
// L >= 2 (cutoff + skin) so each pair has a unique nearest image.
NeighborList build_neighbor_list(const AtomSystem& sys, double cutoff, double skin);

// True once some atom drifted more than skin/2 from its reference position
// (strictly more; displacement is measured under minimum image).
bool needs_rebuild(const NeighborList& list, const AtomSystem& sys);

// Packs the neighbors of i that currently sit within r_cut_max, preserving
// segment order.  Scratch variant reuses the output vector.
void filter_segment(const NeighborList& list, std::size_t i, const AtomSystem& sys,
                    double r_cut_max, std::vector<std::int32_t>& out);
std::vector<std::int32_t> filter_segment(const NeighborList& list, std::size_t i,
                                         const AtomSystem& sys, double r_cut_max);

// Filtered (or verbatim when apply_filter is false) copies of all segments in
// the same packed layout as the list itself.
struct PackedSegments {
  std::vector<std::int32_t> offsets;
  std::vector<std::int32_t> indices;
  std::span<const std::int32_t> segment(std::size_t i) const {
    return {indices.data() + offsets[i], std::size_t(offsets[i + 1] - offsets[i])};
  }
};
PackedSegments filter_all_segments(const NeighborList& list, const AtomSystem& sys,
                                   double r_cut_max, bool apply_filter);

}  // namespace tmd
