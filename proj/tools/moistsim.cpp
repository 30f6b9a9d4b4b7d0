// moistsim: warm-cloud moisture simulator and its verification batteries.
//
// exit codes: 0 ok, 1 a check failed, 2 bad config or arguments,
// 3 solver or Picard failure, 4 I/O failure.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "moist/config.hpp"
#include "moist/experiments.hpp"
#include "moist/krylov.hpp"
#include "moist/selftest.hpp"

namespace fs = std::filesystem;
using namespace moist;

namespace {

struct Globals {
  std::string output_dir = ".";
  std::optional<std::uint64_t> seed;
  int threads = 0;
};

Config config_or_default(const std::string& path) { return path.empty() ? Config{} : load_config(path); }

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory '" + dir + "'");
}

void write_text(const std::string& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  body(os);
  os.flush();
  if (!os) throw IoError("write failed for '" + path + "'");
}

const char* verdict(bool ok) { return ok ? "PASS" : "FAIL"; }

int cmd_run(const Globals& g, const std::string& path) {
  Config c = load_config(path);
  if (g.seed) c.sim.initial.seed = *g.seed;
  c.sim.validate();
  ensure_dir(g.output_dir);
  const int every = c.sim.snapshot_every;
  const RunResult r = run(c.sim, [&](int step, double, const StateFields& s) {
    if (every > 0 && step % every == 0) write_snapshots(g.output_dir, step, s);
  });
  write_text(g.output_dir + "/series.csv",
             [&](std::ostream& os) { write_series_csv(os, r.records, c.sim.initial.seed); });
  std::cout << "steps: " << r.records.size() - 1 << '\n' << r.bounds.to_text();
  return 0;
}

int cmd_selftest(const Globals& g, const std::string& path, long samples, bool fault) {
  const Config c = config_or_default(path);
  SelftestOptions opts;
  if (g.seed) opts.seed = *g.seed;
  opts.samples = samples;
  opts.inject_fault = fault;
  bool ok = true;
  std::cout << "seed: " << opts.seed << '\n';
  for (const PropertyResult& p : run_kernel_selftest(c.sim.params, opts)) {
    std::cout << verdict(p.pass) << ' ' << p.name << " samples=" << p.samples << ' ' << p.detail << '\n';
    ok = ok && p.pass;
  }
  return ok ? 0 : 1;
}

int cmd_rothe(const Globals& g, const std::string& path) {
  Config c = config_or_default(path);
  if (g.seed) c.battery.seed = *g.seed;
  validate_battery(c.battery);
  const BatteryOutcome out = run_energy_battery(c.battery, g.threads);
  for (std::size_t k = 0; k < out.reports.size(); ++k) {
    std::cout << "problem: " << k << "\nseed: " << c.battery.seed + k << '\n' << out.reports[k].to_text() << '\n';
  }
  std::cout << "worst_l2_bound_relative_slack: " << format_double(out.worst_l2_bound) << '\n'
            << "worst_energy_bound_relative_slack: " << format_double(out.worst_energy_bound) << '\n'
            << "worst_energy_bound_stepwise_relative_slack: " << format_double(out.worst_energy_bound_stepwise) << '\n'
            << "result: " << verdict(out.pass()) << '\n';
  return out.pass() ? 0 : 1;
}

int cmd_mms(const std::string& path) {
  const Config c = config_or_default(path);
  validate_mms(c.mms);
  const MmsOutcome out = run_mms(c.mms);
  std::cout << out.elliptic.to_text("elliptic n") << out.spatial.to_text("parabolic n")
            << out.temporal.to_text("temporal N");
  std::cout << "min_spatial_order: " << format_double(std::min(out.elliptic.min_order(), out.spatial.min_order()))
            << '\n'
            << "min_temporal_order: " << format_double(out.temporal.min_order()) << '\n'
            << "result: " << verdict(out.pass(c.mms)) << '\n';
  return out.pass(c.mms) ? 0 : 1;
}

int cmd_two_run(const Globals& g, const std::string& path, const std::vector<double>& eps_arg) {
  Config c = config_or_default(path);
  if (g.seed) c.two_run.seed = *g.seed;
  const std::vector<double> eps = eps_arg.empty() ? c.two_run.eps : eps_arg;
  validate_eps(eps);
  c.sim.validate();
  ensure_dir(g.output_dir);
  const TwoRunOutcome out = run_two_run(c.sim, c.two_run, eps, g.threads);
  write_text(g.output_dir + "/two_run.csv", [&](std::ostream& os) { write_two_run_csv(os, out, c.two_run.seed); });
  for (const DependenceReport& d : out.reports)
    std::cout << "eps: " << format_double(d.eps) << " amplification: " << format_double(d.amplification)
              << " t_of_max: " << format_double(d.t_of_max) << '\n';
  const bool ok = out.pass(c.two_run.agreement_tol);
  std::cout << "spread: " << format_double(out.spread) << '\n' << "result: " << verdict(ok) << '\n';
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"warm-cloud moisture simulator"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  std::uint64_t seed = 0;
  app.add_option("--output-dir", g.output_dir, "directory for CSV and snapshot output");
  auto* seed_opt = app.add_option("--seed", seed, "override the seed of the chosen command");
  app.add_option("--threads", g.threads, "worker threads for batteries; 0 uses all cores")->check(CLI::NonNegativeNumber);

  std::string run_cfg, cfg_path;
  auto* run_cmd = app.add_subcommand("run", "integrate the full model");
  run_cmd->add_option("config", run_cfg, "config file")->required();

  long samples = 10000;
  bool fault = false;
  auto* st_cmd = app.add_subcommand("kernel-selftest", "randomized kernel property batteries");
  st_cmd->add_option("config", cfg_path, "config file for the physical constants");
  st_cmd->add_option("--samples", samples, "samples per property")->check(CLI::PositiveNumber);
  st_cmd->add_flag("--inject-fault", fault)->group("");

  auto* rv_cmd = app.add_subcommand("rothe-verify", "energy certificates on random linear problems");
  rv_cmd->add_option("config", cfg_path, "config file ([battery])");

  auto* mms_cmd = app.add_subcommand("mms", "manufactured-solution convergence ladder");
  mms_cmd->add_option("config", cfg_path, "config file ([mms])");

  std::vector<double> eps;
  auto* tr_cmd = app.add_subcommand("two-run", "continuous dependence on initial data");
  tr_cmd->add_option("config", cfg_path, "config file");
  tr_cmd->add_option("--eps", eps, "perturbation sizes, comma separated")->delimiter(',');

  auto* pc_cmd = app.add_subcommand("print-config", "print every key with unit, provenance and value");
  pc_cmd->add_option("config", cfg_path, "config file; defaults when omitted");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (seed_opt->count() > 0) g.seed = seed;

  try {
    if (*run_cmd) return cmd_run(g, run_cfg);
    if (*st_cmd) return cmd_selftest(g, cfg_path, samples, fault);
    if (*rv_cmd) return cmd_rothe(g, cfg_path);
    if (*mms_cmd) return cmd_mms(cfg_path);
    if (*tr_cmd) return cmd_two_run(g, cfg_path, eps);
    if (*pc_cmd) {
      std::cout << serialize_config(config_or_default(cfg_path));
      return 0;
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const PicardError& e) {
    std::cerr << "error: " << e.what() << " (residual " << format_double(e.residual()) << ")\n";
    return 3;
  } catch (const SolverError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 2;
}
