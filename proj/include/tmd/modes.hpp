#pragma once

#include <string>

namespace tmd {

// Numeric behavior of a force evaluation.  Ref and OptD compute and
// accumulate in double; OptS does everything in single; OptM computes in
// single but accumulates (force buffers, reductions, energy) in double.
enum class PrecisionMode { Ref, OptD, OptS, OptM };

const char* to_string(PrecisionMode mode);

// Parses "ref", "opt-d", "opt-s", "opt-m" and the plain aliases "double",
// "single", "mixed" (case-sensitive); throws ConfigError.
PrecisionMode precision_from_string(const std::string& text);

}  // namespace tmd
