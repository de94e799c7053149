#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tmd/params.hpp"
#include "tmd/system.hpp"

namespace tmd {

// One self-check outcome: a stable name, pass/fail, and a short measurement
// summary (worst error, case counts) for the report line.
struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Diamond lattice of cells^3 conventional cells scaled to the table's
// cutoff, species assigned round-robin, positions jittered by up to the
// given amplitude (A) so forces are nonzero and asymmetric.  Deterministic
// in the seed.
AtomSystem perturbed_lattice(const ParamTable& params, int cells, double jitter,
                             std::uint64_t seed);

// Building-block conformance: reduce_add, scatter_add, gather,
// adjacent_gather, select, vall/vany at widths 1, 4, 8, 16 against scalar
// loop oracles, `cases` randomized cases per width.  Failures are exact
// mismatches (double) - any nonzero count is a defect.
struct ConformanceStats {
  long cases = 0;
  long failures = 0;
};
ConformanceStats backend_conformance(int cases_per_width, std::uint64_t seed);

// One seeded ragged-segment traversal, instrumented both ways: the
// production policy (fire only when every unfinished lane is ready) and the
// naive lockstep that fires whenever at least one lane is ready.  visited_ok
// reports whether the production traversal visited exactly the predicate-true
// positions of every lane, in order, and fired exactly max-per-lane times.
struct TraversalCounts {
  long all_ready = 0;
  long any_ready = 0;
  bool visited_ok = false;
};
TraversalCounts traversal_case(int width, std::uint64_t seed);

// Runs the whole battery against the given parameter table: parser and
// geometry invariants, vector building blocks, finite-difference force
// checks, scheme/width/k_max equivalence, filter soundness, precision gap,
// and determinism.  Systems are generated from the table's own cutoff, so
// any valid table works.
std::vector<CheckResult> run_verification(const ParamTable& params,
                                          std::uint64_t seed = 715);

}  // namespace tmd
