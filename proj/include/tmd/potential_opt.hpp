#pragma once

#include <string>

#include "tmd/modes.hpp"
#include "tmd/neighbor.hpp"
#include "tmd/params.hpp"
#include "tmd/potential_ref.hpp"
#include "tmd/system.hpp"

namespace tmd {

// Vectorization scheme of a force evaluation.  V3 is the scalar-pipeline
// scheme, realized as the width-1 instantiation of V2's control flow.
enum class Scheme { Auto, Ref, ScalarOpt, V1, V2, V3 };

const char* to_string(Scheme s);

// Parses "auto", "ref", "scalar-opt", "v1", "v2", "v3"; throws ConfigError.
Scheme scheme_from_string(const std::string& text);

// Width-driven choice: 1 lane runs the scalar pipeline, short vectors map
// neighbors to lanes, wide vectors need pair fusion to stay occupied.
Scheme select_scheme(int width, PrecisionMode precision);

// Default lane count per precision when the user does not pin one.
int default_width(PrecisionMode precision);

struct ForceOptions {
  Scheme scheme = Scheme::Auto;
  PrecisionMode precision = PrecisionMode::OptD;
  int width = 0;  // 0: default_width(precision)
  int k_max = 16;
  int workers = 1;
  bool filter = true;
};

// Resolves scheme/width/precision and runs the matching kernel
// instantiation.  Supported widths are 1, 4, 8, 16; Ref and ScalarOpt ignore
// the width; Ref requires double precision.
EnergyForces evaluate_forces(const AtomSystem& sys, const NeighborList& list,
                             const ParamTable& params, const ForceOptions& opt);

}  // namespace tmd
