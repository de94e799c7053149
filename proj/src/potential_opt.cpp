#include "tmd/potential_opt.hpp"

#include "tmd/error.hpp"
#include "tmd/kernels.hpp"

namespace tmd {

const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::Auto: return "auto";
    case Scheme::Ref: return "ref";
    case Scheme::ScalarOpt: return "scalar-opt";
    case Scheme::V1: return "v1";
    case Scheme::V2: return "v2";
    case Scheme::V3: return "v3";
  }
  return "?";
}

Scheme scheme_from_string(const std::string& text) {
  if (text == "auto") return Scheme::Auto;
  if (text == "ref") return Scheme::Ref;
  if (text == "scalar-opt") return Scheme::ScalarOpt;
  if (text == "v1") return Scheme::V1;
  if (text == "v2") return Scheme::V2;
  if (text == "v3") return Scheme::V3;
  throw ConfigError("unknown scheme '" + text +
                    "' (expected auto, ref, scalar-opt, v1, v2, or v3)");
}

const char* to_string(PrecisionMode mode) {
  switch (mode) {
    case PrecisionMode::Ref: return "ref";
    case PrecisionMode::OptD: return "opt-d";
    case PrecisionMode::OptS: return "opt-s";
    case PrecisionMode::OptM: return "opt-m";
  }
  return "?";
}

PrecisionMode precision_from_string(const std::string& text) {
  if (text == "ref") return PrecisionMode::Ref;
  if (text == "opt-d" || text == "double") return PrecisionMode::OptD;
  if (text == "opt-s" || text == "single") return PrecisionMode::OptS;
  if (text == "opt-m" || text == "mixed") return PrecisionMode::OptM;
  throw ConfigError("unknown precision '" + text +
                    "' (expected ref, double (opt-d), single (opt-s), or "
                    "mixed (opt-m))");
}

Scheme select_scheme(int width, PrecisionMode) {
  if (width == 1) return Scheme::V3;
  if (width <= 4) return Scheme::V1;
  return Scheme::V2;
}

int default_width(PrecisionMode precision) {
  switch (precision) {
    case PrecisionMode::Ref:
    case PrecisionMode::OptD: return 4;
    case PrecisionMode::OptS:
    case PrecisionMode::OptM: return 8;
  }
  return 4;
}

namespace {

template <typename Flt, typename Acc>
EnergyForces dispatch_width(Scheme scheme, int width, const AtomSystem& sys,
                            const NeighborList& list, const ParamTable& params,
                            const ForceOptions& opt) {
  using simd::SoftwareBackend;
  const bool v1 = scheme == Scheme::V1;
  switch (width) {
    case 1:
      return v1 ? compute_v1<SoftwareBackend<Flt, Acc, 1>>(sys, list, params,
                                                           opt.workers, opt.filter)
                : compute_v2<SoftwareBackend<Flt, Acc, 1>>(
                      sys, list, params, opt.k_max, opt.workers, opt.filter);
    case 4:
      return v1 ? compute_v1<SoftwareBackend<Flt, Acc, 4>>(sys, list, params,
                                                           opt.workers, opt.filter)
                : compute_v2<SoftwareBackend<Flt, Acc, 4>>(
                      sys, list, params, opt.k_max, opt.workers, opt.filter);
    case 8:
      return v1 ? compute_v1<SoftwareBackend<Flt, Acc, 8>>(sys, list, params,
                                                           opt.workers, opt.filter)
                : compute_v2<SoftwareBackend<Flt, Acc, 8>>(
                      sys, list, params, opt.k_max, opt.workers, opt.filter);
    case 16:
      return v1 ? compute_v1<SoftwareBackend<Flt, Acc, 16>>(sys, list, params,
                                                            opt.workers, opt.filter)
                : compute_v2<SoftwareBackend<Flt, Acc, 16>>(
                      sys, list, params, opt.k_max, opt.workers, opt.filter);
    default:
      throw ConfigError("unsupported backend width " + std::to_string(width) +
                        " (supported: 1, 4, 8, 16)");
  }
}

}  // namespace

EnergyForces evaluate_forces(const AtomSystem& sys, const NeighborList& list,
                             const ParamTable& params, const ForceOptions& opt) {
  if (opt.k_max < 0) throw ConfigError("k_max must be non-negative");
  if (opt.workers < 1) throw ConfigError("worker count must be at least 1");
  const int width = opt.width > 0 ? opt.width : default_width(opt.precision);
  Scheme scheme = opt.scheme;
  if (opt.precision == PrecisionMode::Ref && scheme == Scheme::Auto)
    scheme = Scheme::Ref;
  if (scheme == Scheme::Auto) scheme = select_scheme(width, opt.precision);

  if (scheme == Scheme::Ref) {
    if (opt.precision != PrecisionMode::Ref && opt.precision != PrecisionMode::OptD)
      throw ConfigError("scheme ref runs in double precision only");
    return compute_ref(sys, list, params);
  }
  if (scheme == Scheme::ScalarOpt) {
    if (opt.precision != PrecisionMode::Ref && opt.precision != PrecisionMode::OptD)
      throw ConfigError("scheme scalar-opt runs in double precision only");
    return compute_opt_scalar(sys, list, params, opt.k_max);
  }
  // V3 is V2's control flow pinned to one lane.
  const int eff_width = scheme == Scheme::V3 ? 1 : width;
  const Scheme kernel = scheme == Scheme::V1 ? Scheme::V1 : Scheme::V2;

  switch (opt.precision) {
    case PrecisionMode::Ref:
    case PrecisionMode::OptD:
      return dispatch_width<double, double>(kernel, eff_width, sys, list, params, opt);
    case PrecisionMode::OptS:
      return dispatch_width<float, float>(kernel, eff_width, sys, list, params, opt);
    case PrecisionMode::OptM:
      return dispatch_width<float, double>(kernel, eff_width, sys, list, params, opt);
  }
  throw ConfigError("unreachable precision mode");
}

}  // namespace tmd
