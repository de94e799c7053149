#include "tmd/engine.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

#include "tmd/error.hpp"
#include "tmd/format.hpp"
#include "tmd/units.hpp"

namespace tmd {

void RunConfig::validate() const {
  if (steps < 0) throw ConfigError("steps must be non-negative");
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  if (skin < 0.0) throw ConfigError("skin must be non-negative");
  if (rebuild_check_every < 1)
    throw ConfigError("rebuild check interval must be at least 1");
  if (k_max < 0) throw ConfigError("k_max must be non-negative");
  if (width < 0 || (width > 0 && width != 1 && width != 4 && width != 8 && width != 16))
    throw ConfigError("width must be one of 1, 4, 8, 16");
  if (workers < 1) throw ConfigError("workers must be at least 1");
  if (thermo_every < 1) throw ConfigError("thermo interval must be at least 1");
  if (temperature < 0.0) throw ConfigError("temperature must be non-negative");
}

AtomSystem make_diamond_lattice(int nx, int ny, int nz, double a0,
                                std::int32_t species_id, double mass) {
  if (nx < 1 || ny < 1 || nz < 1)
    throw ConfigError("lattice cell counts must be positive");
  if (!(a0 > 0.0)) throw ConfigError("lattice constant must be positive");
  if (!(mass > 0.0)) throw ConfigError("species mass must be positive");
  if (species_id < 0) throw ConfigError("species id must be non-negative");

  static const double basis[8][3] = {
      {0.00, 0.00, 0.00}, {0.00, 0.50, 0.50}, {0.50, 0.00, 0.50},
      {0.50, 0.50, 0.00}, {0.25, 0.25, 0.25}, {0.25, 0.75, 0.75},
      {0.75, 0.25, 0.75}, {0.75, 0.75, 0.25}};

  AtomSystem sys;
  sys.box.lx = a0 * nx;
  sys.box.ly = a0 * ny;
  sys.box.lz = a0 * nz;
  const std::size_t n = std::size_t(nx) * std::size_t(ny) * std::size_t(nz) * 8;
  sys.positions.reserve(n);
  for (int cx = 0; cx < nx; ++cx)
    for (int cy = 0; cy < ny; ++cy)
      for (int cz = 0; cz < nz; ++cz)
        for (const auto& b : basis)
          sys.positions.push_back({a0 * (cx + b[0]), a0 * (cy + b[1]),
                                   a0 * (cz + b[2])});
  sys.velocities.assign(n, Vec3{});
  sys.forces.assign(n, Vec3{});
  sys.species.assign(n, species_id);
  sys.species_masses.assign(std::size_t(species_id) + 1, mass);
  return sys;
}

namespace {

// Reproducible standard normal: Box-Muller on 53-bit uniforms, cosine branch
// only, two engine draws per deviate regardless of platform.
class GaussianDraws {
 public:
  explicit GaussianDraws(std::uint64_t seed) : rng_(seed) {}

  double operator()() {
    const double u1 = to_unit(rng_());  // in (0, 1], so log is finite
    const double u2 = to_unit(rng_());
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  static double to_unit(std::uint64_t bits) {
    return double((bits >> 11) + 1) * 0x1p-53;
  }
  std::mt19937_64 rng_;
};

}  // namespace

void init_velocities(AtomSystem& sys, double temperature, std::uint64_t seed) {
  if (temperature < 0.0) throw ConfigError("temperature must be non-negative");
  const std::size_t n = sys.size();
  if (n == 0) return;
  if (temperature == 0.0) {
    sys.velocities.assign(n, Vec3{});
    return;
  }

  GaussianDraws normal(seed);
  for (std::size_t a = 0; a < n; ++a) {
    const double sigma =
        std::sqrt(units::k_boltzmann * temperature / (sys.mass(a) * units::mvv2e));
    sys.velocities[a] = {sigma * normal(), sigma * normal(), sigma * normal()};
  }

  // remove center-of-mass drift
  double total_mass = 0.0;
  Vec3 p;
  for (std::size_t a = 0; a < n; ++a) {
    total_mass += sys.mass(a);
    p += sys.velocities[a] * sys.mass(a);
  }
  const Vec3 v_com = p * (1.0 / total_mass);
  for (std::size_t a = 0; a < n; ++a) sys.velocities[a] -= v_com;

  // rescale to the exact target temperature
  const double t_now = tmd::temperature(sys);
  if (t_now > 0.0) {
    const double scale = std::sqrt(temperature / t_now);
    for (std::size_t a = 0; a < n; ++a) sys.velocities[a] *= scale;
  }
}

Engine::Engine(AtomSystem sys, ParamTable params, RunConfig cfg)
    : sys_(std::move(sys)), params_(std::move(params)), cfg_(cfg) {
  cfg_.validate();
  sys_.validate();
  for (std::int32_t s : sys_.species)
    if (s >= params_.species_count())
      throw ConfigError("system uses species id " + std::to_string(s) +
                        " but the parameter table defines only " +
                        std::to_string(params_.species_count()) + " species");
  force_opt_.scheme = cfg_.scheme;
  force_opt_.precision = cfg_.precision;
  force_opt_.width = cfg_.width > 0 ? cfg_.width : default_width(cfg_.precision);
  force_opt_.k_max = cfg_.k_max;
  force_opt_.workers = cfg_.workers;
  list_ = build_neighbor_list(sys_, params_.r_cut_max(), cfg_.skin);
  compute_forces();
}

void Engine::compute_forces() {
  EnergyForces ef = evaluate_forces(sys_, list_, params_, force_opt_);
  pe_ = ef.energy;
  sys_.forces = std::move(ef.forces);
}

void Engine::step() {
  const double dt = cfg_.dt;
  const std::size_t n = sys_.size();

  // acceleration factor: F in eV/A over (m in g/mol) needs the energy
  // conversion to land in A/ps^2
  for (std::size_t a = 0; a < n; ++a) {
    const double f = 0.5 * dt / (sys_.mass(a) * units::mvv2e);
    sys_.velocities[a] += sys_.forces[a] * f;
  }
  for (std::size_t a = 0; a < n; ++a) {
    sys_.positions[a] += sys_.velocities[a] * dt;
    sys_.positions[a] = wrap_position(sys_.positions[a], sys_.box);
  }
  ++steps_done_;
  if (steps_done_ % cfg_.rebuild_check_every == 0 && needs_rebuild(list_, sys_)) {
    list_ = build_neighbor_list(sys_, params_.r_cut_max(), cfg_.skin);
    ++rebuilds_;
  }
  compute_forces();
  for (std::size_t a = 0; a < n; ++a) {
    const double f = 0.5 * dt / (sys_.mass(a) * units::mvv2e);
    sys_.velocities[a] += sys_.forces[a] * f;
  }
}

ThermoSample Engine::sample() const {
  const double ke = kinetic_energy(sys_);
  return {steps_done_, double(steps_done_) * cfg_.dt, temperature(sys_), pe_,
          ke, pe_ + ke};
}

RunReport Engine::run() {
  RunReport report;
  report.scheme = force_opt_.scheme == Scheme::Auto
                      ? (force_opt_.precision == PrecisionMode::Ref
                             ? Scheme::Ref
                             : select_scheme(force_opt_.width, force_opt_.precision))
                      : force_opt_.scheme;
  report.precision = force_opt_.precision;
  report.width = force_opt_.width;
  report.samples.push_back(sample());

  const auto t0 = std::chrono::steady_clock::now();
  for (long s = 1; s <= cfg_.steps; ++s) {
    step();
    if (s % cfg_.thermo_every == 0 || s == cfg_.steps)
      report.samples.push_back(sample());
  }
  const auto t1 = std::chrono::steady_clock::now();
  report.wall_seconds = std::chrono::duration<double>(t1 - t0).count();

  if (cfg_.steps > 0 && report.wall_seconds > 0.0) {
    const double ns = double(cfg_.steps) * cfg_.dt * 1e-3;
    report.ns_per_day = ns / report.wall_seconds * 86400.0;
  }
  return report;
}

std::string RunReport::to_csv() const {
  std::string out = "step,time_ps,temp_K,pe_eV,ke_eV,etot_eV\n";
  for (const ThermoSample& s : samples) {
    out += std::to_string(s.step);
    out += "," + format_shortest(s.time_ps);
    out += "," + format_shortest(s.temp_k);
    out += "," + format_shortest(s.pe_ev);
    out += "," + format_shortest(s.ke_ev);
    out += "," + format_shortest(s.etot_ev);
    out += "\n";
  }
  out += std::string("scheme,") + tmd::to_string(scheme) + "\n";
  out += std::string("width,") + std::to_string(width) + "\n";
  out += std::string("precision,") + tmd::to_string(precision) + "\n";
  out += "ns_per_day," + format_shortest(ns_per_day) + "\n";
  return out;
}

}  // namespace tmd
