// Batch CLI for adiabaticity diagnostics of driven Hubbard chains.
//
//   adiatrack run      full single-scenario pipeline, writes a CSV bundle
//   adiatrack sweep    grid of scenarios, writes per-scenario bundles + summary
//   adiatrack spectrum instantaneous spectrum export
//   adiatrack fit      adiabatic-line gradient only
//
// Flags mirror the scenario config keys; ADIATRACK_OUTPUT_DIR overrides the
// output directory.

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "adiatrack/csv.hpp"
#include "adiatrack/scenario.hpp"

namespace {

struct CommonArgs {
  std::string config_file;
};

void add_scenario_flags(CLI::App* cmd, adiatrack::ScenarioConfig& c, CommonArgs& common) {
  cmd->add_option("--config", common.config_file, "scenario config file (key = value lines)");
  cmd->add_option("-N,--n-sites", c.n_sites, "number of chain sites (<= 8)");
  cmd->add_option("--n-up", c.n_up, "up-spin electrons (default: half filling)");
  cmd->add_option("--n-down", c.n_down, "down-spin electrons (default: half filling)");
  cmd->add_option("-U,--interaction-u-over-j", c.interaction, "on-site repulsion U in J");
  cmd->add_option("-T,--temperature-kbt-over-j", c.temperature, "k_B T in J");
  cmd->add_option("--tau-times-j", c.tau, "ramp duration tau in 1/J");
  cmd->add_option("--dt-times-j", c.dt, "time step in 1/J (0 = min(tau,1)/1000)");
  cmd->add_option("--output-points", c.output_points, "output grid size over [0, tau]");
  cmd->add_option("--mu0-over-j", c.mu0, "initial tilt amplitude mu^0 in J");
  cmd->add_option("--mu-tau-over-j", c.mu_tau, "ramp tilt amplitude mu^tau in J");
  cmd->add_option("--tqac-s", c.tqac_s, "occupied-window multiplier s (>= 1)");
  cmd->add_option("--tqac-s-prime", c.tqac_s_prime, "partner-window multiplier s' (inf = uncapped)");
  cmd->add_option("--degeneracy-tol-over-j", c.degeneracy_tol,
                  "degenerate-group tolerance in J (0 = auto)");
  cmd->add_option("--fit-times-over-tau", c.fit_times_over_tau,
                  "adiabatic-line sample times as fractions of tau")
      ->delimiter(',');
  cmd->add_option("--spectrum-levels", c.spectrum_levels, "levels in the spectrum export");
  cmd->add_option("--output-dir", c.output_dir, "output directory");
}

// Config file first, then explicit flags on top, then the environment
// override for the output directory.
adiatrack::ScenarioConfig resolve_config(const CLI::App* cmd,
                                         const adiatrack::ScenarioConfig& flags,
                                         const CommonArgs& common) {
  adiatrack::ScenarioConfig c = flags;
  if (!common.config_file.empty()) {
    adiatrack::ScenarioConfig from_file = adiatrack::load_scenario_config(common.config_file);
    adiatrack::ScenarioConfig merged = from_file;
    // Explicit flags win over file values.
    auto took = [&](const std::string& name) { return cmd->count(name) > 0; };
    if (took("--n-sites")) merged.n_sites = c.n_sites;
    if (took("--n-up")) merged.n_up = c.n_up;
    if (took("--n-down")) merged.n_down = c.n_down;
    if (took("--interaction-u-over-j")) merged.interaction = c.interaction;
    if (took("--temperature-kbt-over-j")) merged.temperature = c.temperature;
    if (took("--tau-times-j")) merged.tau = c.tau;
    if (took("--dt-times-j")) merged.dt = c.dt;
    if (took("--output-points")) merged.output_points = c.output_points;
    if (took("--mu0-over-j")) merged.mu0 = c.mu0;
    if (took("--mu-tau-over-j")) merged.mu_tau = c.mu_tau;
    if (took("--tqac-s")) merged.tqac_s = c.tqac_s;
    if (took("--tqac-s-prime")) merged.tqac_s_prime = c.tqac_s_prime;
    if (took("--degeneracy-tol-over-j")) merged.degeneracy_tol = c.degeneracy_tol;
    if (took("--fit-times-over-tau")) merged.fit_times_over_tau = c.fit_times_over_tau;
    if (took("--spectrum-levels")) merged.spectrum_levels = c.spectrum_levels;
    if (took("--output-dir")) merged.output_dir = c.output_dir;
    c = merged;
  }
  if (const char* env = std::getenv("ADIATRACK_OUTPUT_DIR"); env && *env) {
    c.output_dir = env;
  }
  return c;
}

void print_verdicts(const adiatrack::ScenarioResult& result) {
  auto line = [](const char* name, const adiatrack::MetricVerdict& v) {
    std::cout << "  " << name << ": " << (v.adiabatic ? "adiabatic" : "non-adiabatic")
              << " (max " << adiatrack::format_double(v.max_distance);
    if (!v.adiabatic) {
      std::cout << ", first violation at t/tau = "
                << adiatrack::format_double(v.first_violation_t_over_tau);
    }
    std::cout << ")\n";
  };
  std::cout << "scenario " << result.config.label() << "\n";
  std::cout << "  gradient m = " << adiatrack::format_double(result.fit.gradient)
            << ", delta_n = " << adiatrack::format_double(result.thresholds.delta_n) << "\n";
  line("bures  ", result.classification.bures);
  line("trace  ", result.classification.trace);
  line("density", result.classification.density);
  std::cout << "  bundle: " << result.bundle_dir.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adiabaticity diagnostics for driven inhomogeneous Hubbard chains"};
  app.require_subcommand(1);

  adiatrack::ScenarioConfig run_cfg;
  CommonArgs run_common;
  CLI::App* run = app.add_subcommand("run", "run one scenario and write its CSV bundle");
  add_scenario_flags(run, run_cfg, run_common);

  std::string grid_file;
  std::string sweep_output = "out";
  int jobs = 1;
  CLI::App* sweep = app.add_subcommand("sweep", "run a scenario grid and write summary.csv");
  sweep->add_option("--grid", grid_file, "grid file (list-valued scenario keys)");
  sweep->add_option("--output-dir", sweep_output, "output directory");
  sweep->add_option("--jobs", jobs, "concurrent scenarios")->check(CLI::PositiveNumber);

  adiatrack::ScenarioConfig spec_cfg;
  CommonArgs spec_common;
  int spectrum_levels = 0;
  CLI::App* spectrum = app.add_subcommand("spectrum", "export the instantaneous spectrum");
  add_scenario_flags(spectrum, spec_cfg, spec_common);
  spectrum->add_option("--levels", spectrum_levels,
                       "number of levels (default: spectrum-levels setting)");

  adiatrack::ScenarioConfig fit_cfg;
  CommonArgs fit_common;
  CLI::App* fit = app.add_subcommand("fit", "fit the adiabatic-line gradient only");
  add_scenario_flags(fit, fit_cfg, fit_common);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const auto config = resolve_config(run, run_cfg, run_common);
      print_verdicts(adiatrack::run_scenario(config));
    } else if (sweep->parsed()) {
      auto configs = grid_file.empty() ? adiatrack::default_sweep_grid()
                                       : adiatrack::load_sweep_grid(grid_file);
      if (const char* env = std::getenv("ADIATRACK_OUTPUT_DIR"); env && *env) {
        sweep_output = env;
      }
      const auto outcome = adiatrack::run_sweep(configs, sweep_output, jobs);
      int failed = 0;
      for (const std::string& e : outcome.errors) {
        if (!e.empty()) {
          ++failed;
          std::cerr << "failed: " << e << "\n";
        }
      }
      std::cout << outcome.configs.size() - failed << "/" << outcome.configs.size()
                << " scenarios succeeded; summary: " << outcome.summary_path.string() << "\n";
      if (failed > 0) return 1;
    } else if (spectrum->parsed()) {
      const auto config = resolve_config(spectrum, spec_cfg, spec_common);
      const int levels = spectrum_levels > 0 ? spectrum_levels : config.spectrum_levels;
      const auto path = adiatrack::export_spectrum_file(config, levels);
      std::cout << "spectrum: " << path.string() << "\n";
    } else if (fit->parsed()) {
      const auto config = resolve_config(fit, fit_cfg, fit_common);
      config.validate();
      const auto line = adiatrack::fit_adiabatic_line(
          config.hubbard_params(), config.drive_protocol(), config.temperature,
          config.fit_times_over_tau);
      const auto thresholds = adiatrack::thresholds_from_gradient(line.gradient);
      std::cout << "gradient m = " << adiatrack::format_double(line.gradient)
                << "\nfit_residual = " << adiatrack::format_double(line.fit_residual)
                << "\ndelta_rho = " << adiatrack::format_double(thresholds.delta_rho)
                << "\ndelta_n = " << adiatrack::format_double(thresholds.delta_n) << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
