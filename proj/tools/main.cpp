// tersoffmd: reference and vector-optimized Tersoff dynamics from the shell.
//
//   tersoffmd run    --cells 4 4 4 --steps 1000 --scheme v2 --width 8
//   tersoffmd verify --seed 715
//   tersoffmd bench  --cells 8 8 8 --steps 3 --out bench.csv
//
// Exit codes: 0 success, 1 verification failure, 2 bad input or settings,
// 3 non-finite values during a force pass.

#include <array>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tmd/engine.hpp"
#include "tmd/error.hpp"
#include "tmd/format.hpp"
#include "tmd/neighbor.hpp"
#include "tmd/params.hpp"
#include "tmd/potential_opt.hpp"
#include "tmd/potential_ref.hpp"
#include "tmd/system.hpp"
#include "tmd/units.hpp"
#include "tmd/verify.hpp"

namespace {

struct CommonArgs {
  std::string params_path;            // empty: built-in silicon table
  std::array<int, 3> cells{4, 4, 4};  // conventional diamond cells per axis
  double a0 = 5.431;                  // lattice constant, A
  long steps = 1000;
  double dt = 0.001;                  // ps
  double skin = 1.0;                  // A
  int kmax = 16;
  std::string scheme = "auto";
  int width = 0;                      // 0: default for the precision
  std::string precision = "double";
  int workers = 1;
  std::uint64_t seed = 12345;
  std::string out;                    // empty: stdout
  double temp = 300.0;                // K
  int thermo_every = 100;
  int rebuild_every = 1;
};

void add_common_flags(CLI::App* cmd, CommonArgs* a, bool dynamics) {
  cmd->add_option("--params", a->params_path,
                  "parameter file (default: built-in silicon)");
  cmd->add_option("--seed", a->seed, "RNG seed");
  cmd->add_option("--out", a->out, "output file (default: stdout)");
  if (!dynamics) return;
  cmd->add_option("--cells", a->cells, "conventional cells per axis (NX NY NZ)");
  cmd->add_option("--a0", a->a0, "lattice constant in A");
  cmd->add_option("--steps", a->steps, "number of MD steps");
  cmd->add_option("--dt", a->dt, "timestep in ps");
  cmd->add_option("--skin", a->skin, "neighbor skin in A");
  cmd->add_option("--kmax", a->kmax, "triplet cache depth per pair");
  cmd->add_option("--scheme", a->scheme,
                  "force scheme: auto, ref, scalar-opt, v1, v2, v3");
  cmd->add_option("--width", a->width, "vector width: 1, 4, 8, or 16");
  cmd->add_option("--precision", a->precision,
                  "ref, double (opt-d), single (opt-s), mixed (opt-m)");
  cmd->add_option("--workers", a->workers, "shared-memory worker threads");
  cmd->add_option("--temp", a->temp, "initial temperature in K");
  cmd->add_option("--thermo-every", a->thermo_every, "steps between samples");
  cmd->add_option("--rebuild-every", a->rebuild_every,
                  "steps between neighbor staleness checks");
}

tmd::ParamTable load_params(const CommonArgs& a) {
  return a.params_path.empty() ? tmd::builtin_silicon()
                               : tmd::load_param_file(a.params_path);
}

tmd::AtomSystem make_lattice(const CommonArgs& a, const tmd::ParamTable& params) {
  const std::string& name = params.species_names().front();
  const std::optional<double> mass = tmd::units::element_mass(name);
  if (!mass)
    std::cerr << "tersoffmd: note: no tabulated mass for species '" << name
              << "', using 28.0855 g/mol\n";
  return tmd::make_diamond_lattice(a.cells[0], a.cells[1], a.cells[2], a.a0, 0,
                                   mass ? *mass : 28.0855);
}

void write_output(const CommonArgs& a, const std::string& text) {
  if (a.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(a.out);
  if (!f) throw tmd::ConfigError("cannot open output file: " + a.out);
  f << text;
}

tmd::RunConfig run_config(const CommonArgs& a) {
  tmd::RunConfig cfg;
  cfg.steps = a.steps;
  cfg.dt = a.dt;
  cfg.skin = a.skin;
  cfg.rebuild_check_every = a.rebuild_every;
  cfg.k_max = a.kmax;
  cfg.scheme = tmd::scheme_from_string(a.scheme);
  cfg.precision = tmd::precision_from_string(a.precision);
  cfg.width = a.width;
  cfg.workers = a.workers;
  cfg.thermo_every = a.thermo_every;
  cfg.seed = a.seed;
  cfg.temperature = a.temp;
  return cfg;
}

int cmd_run(const CommonArgs& a) {
  const tmd::ParamTable params = load_params(a);
  tmd::AtomSystem sys = make_lattice(a, params);
  tmd::init_velocities(sys, a.temp, a.seed);
  const std::size_t n = sys.size();

  tmd::Engine engine(std::move(sys), params, run_config(a));
  const tmd::RunReport report = engine.run();
  write_output(a, report.to_csv());

  std::cerr << "tersoffmd run: " << n << " atoms, " << a.steps << " steps, "
            << tmd::to_string(report.scheme) << "/w" << report.width << "/"
            << tmd::to_string(report.precision) << ", "
            << tmd::format_shortest(report.ns_per_day) << " ns/day, "
            << engine.neighbor_rebuilds() << " rebuilds\n";
  return 0;
}

int cmd_verify(const CommonArgs& a) {
  const tmd::ParamTable params = load_params(a);
  const std::vector<tmd::CheckResult> results =
      tmd::run_verification(params, a.seed);

  std::string text;
  int failed = 0;
  for (const tmd::CheckResult& r : results) {
    text += (r.pass ? "PASS " : "FAIL ") + r.name + ": " + r.detail + "\n";
    if (!r.pass) ++failed;
  }
  text += failed == 0
              ? "OK (" + std::to_string(results.size()) + " checks)\n"
              : "FAILED (" + std::to_string(failed) + " of " +
                    std::to_string(results.size()) + " checks)\n";
  write_output(a, text);
  return failed == 0 ? 0 : 1;
}

int cmd_bench(const CommonArgs& a) {
  const tmd::ParamTable params = load_params(a);
  const tmd::AtomSystem sys = make_lattice(a, params);
  const tmd::NeighborList list =
      tmd::build_neighbor_list(sys, params.r_cut_max(), a.skin);
  const long evals = std::max(1L, a.steps);

  struct Row {
    tmd::Scheme scheme;
    tmd::PrecisionMode precision;
  };
  const Row rows[] = {
      {tmd::Scheme::Ref, tmd::PrecisionMode::Ref},
      {tmd::Scheme::ScalarOpt, tmd::PrecisionMode::OptD},
      {tmd::Scheme::V1, tmd::PrecisionMode::OptD},
      {tmd::Scheme::V2, tmd::PrecisionMode::OptD},
      {tmd::Scheme::V2, tmd::PrecisionMode::OptS},
      {tmd::Scheme::V2, tmd::PrecisionMode::OptM},
  };

  std::string csv = "scheme,width,precision,ns_per_day,speedup_vs_ref\n";
  double ref_rate = 0.0;
  for (const Row& row : rows) {
    tmd::ForceOptions o;
    o.scheme = row.scheme;
    o.precision = row.precision;
    o.width = a.width;
    o.k_max = a.kmax;
    o.workers = a.workers;
    const int width =
        (row.scheme == tmd::Scheme::Ref || row.scheme == tmd::Scheme::ScalarOpt)
            ? 1
        : row.scheme == tmd::Scheme::V3 ? 1
        : a.width > 0                   ? a.width
                                        : tmd::default_width(row.precision);

    tmd::evaluate_forces(sys, list, params, o);  // warm caches and pools
    const auto t0 = std::chrono::steady_clock::now();
    for (long e = 0; e < evals; ++e) tmd::evaluate_forces(sys, list, params, o);
    const auto t1 = std::chrono::steady_clock::now();
    const double wall = std::chrono::duration<double>(t1 - t0).count();
    const double ns_day =
        wall > 0.0 ? double(evals) * a.dt * 1e-3 / wall * 86400.0 : 0.0;
    if (row.scheme == tmd::Scheme::Ref) ref_rate = ns_day;

    csv += std::string(tmd::to_string(row.scheme)) + "," +
           std::to_string(width) + "," + tmd::to_string(row.precision) + "," +
           tmd::format_shortest(ns_day) + "," +
           tmd::format_shortest(ref_rate > 0.0 ? ns_day / ref_rate : 0.0) + "\n";
  }
  write_output(a, csv);
  std::cerr << "tersoffmd bench: " << sys.size() << " atoms, " << evals
            << " force passes per row\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tersoff molecular dynamics with lane-width-oblivious kernels"};
  app.require_subcommand(1);

  CommonArgs run_args, verify_args, bench_args;
  CLI::App* run = app.add_subcommand("run", "integrate an NVE trajectory");
  add_common_flags(run, &run_args, true);
  CLI::App* verify =
      app.add_subcommand("verify", "self-check the whole pipeline");
  add_common_flags(verify, &verify_args, false);
  CLI::App* bench =
      app.add_subcommand("bench", "time the force schemes against each other");
  add_common_flags(bench, &bench_args, true);

  const char* stage = "parse";
  try {
    app.parse(argc, argv);
    if (run->parsed()) {
      stage = "run";
      return cmd_run(run_args);
    }
    if (verify->parsed()) {
      stage = "verify";
      return cmd_verify(verify_args);
    }
    stage = "bench";
    return cmd_bench(bench_args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const tmd::ParseError& e) {
    std::cerr << "tersoffmd " << stage << ": parameter error: " << e.what()
              << "\n";
    return 2;
  } catch (const tmd::ConfigError& e) {
    std::cerr << "tersoffmd " << stage << ": config error: " << e.what()
              << "\n";
    return 2;
  } catch (const tmd::NumericError& e) {
    std::cerr << "tersoffmd " << stage << ": numeric error: " << e.what()
              << "\n";
    return 3;
  }
}
