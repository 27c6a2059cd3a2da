#pragma once

#include <filesystem>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "adiatrack/adiabaticity.hpp"
#include "adiatrack/dynamics.hpp"

namespace adiatrack {

// One batch scenario: the driven chain, its thermal preparation, the ramp
// rate, and the diagnostics settings. All keys carry their unit in the name
// (energies in J, times in 1/J, temperatures in J/k_B).
struct ScenarioConfig {
  int n_sites = 6;
  int n_up = -1;    // -1 selects half filling
  int n_down = -1;
  double interaction = 0.0;   // U/J
  double temperature = 0.0;   // k_B T / J
  double tau = 5.0;           // tau * J
  double dt = 0.0;            // dt * J; 0 selects min(tau, 1)/1000
  int output_points = 500;
  double mu0 = 0.5;           // mu^0 / J
  double mu_tau = 4.5;        // mu^tau / J
  double tqac_s = 1.0;
  double tqac_s_prime = std::numeric_limits<double>::infinity();
  double degeneracy_tol = 0.0;  // in J; 0 selects the spectrum-scaled default
  std::vector<double> fit_times_over_tau = {0.2, 0.4, 0.6};
  int spectrum_levels = 40;   // clamped to the sector dimension in bundles
  std::string output_dir = "out";

  int resolved_n_up() const;
  int resolved_n_down() const;
  double resolved_dt() const;
  HubbardParams hubbard_params() const;
  DriveProtocol drive_protocol() const;
  PropagationConfig propagation_config() const;
  TqacConfig tqac_config() const;

  // Directory-safe scenario tag, e.g. "N6_U10_kbt2.5_tau50".
  std::string label() const;
  void validate() const;
};

// Flat key=value scenario file ('#' comments, unknown keys rejected).
ScenarioConfig parse_scenario_config(std::istream& in);
ScenarioConfig load_scenario_config(const std::filesystem::path& path);

struct ScenarioResult {
  ScenarioConfig config;
  AdiabaticLineFit fit;
  Thresholds thresholds;
  DiagnosticSeries series;
  Classification classification;
  std::filesystem::path bundle_dir;
};

// Full pipeline: build, thermalize, fit the adiabatic line, propagate,
// evaluate per-time diagnostics, classify, and write the CSV bundle
// (diagnostics.csv, spectrum.csv, fit.csv, summary.csv) under
// <output_dir>/<label>/. Outputs are deterministic; nothing is left behind
// on failure.
ScenarioResult run_scenario(const ScenarioConfig& config);

struct SweepOutcome {
  std::vector<ScenarioConfig> configs;
  std::vector<std::optional<ScenarioResult>> results;  // nullopt on failure
  std::vector<std::string> errors;                     // empty on success
  std::filesystem::path summary_path;
};

// Runs every scenario (failures are recorded, not fatal) and writes one
// summary row per scenario to <output_dir>/summary.csv in input order.
SweepOutcome run_sweep(const std::vector<ScenarioConfig>& configs,
                       const std::string& output_dir, int jobs = 1);

// Grid file: scenario keys where n_sites, interaction_u_over_j,
// temperature_kbt_over_j and tau_times_j accept comma lists; the sweep is
// their cross product (tau fastest, then U, T, N). Missing list keys default
// to the standard grid N={2,4,6}, U={0,5,10}, kT={0,0.2,2.5}, tau={0.5,5,50}.
std::vector<ScenarioConfig> parse_sweep_grid(std::istream& in);
std::vector<ScenarioConfig> load_sweep_grid(const std::filesystem::path& path);
std::vector<ScenarioConfig> default_sweep_grid();

// Instantaneous spectrum export: columns t_over_tau, e_0..e_{k-1} on the
// scenario output grid.
void export_spectrum(const ScenarioConfig& config, int k_levels, std::ostream& out);
std::filesystem::path export_spectrum_file(const ScenarioConfig& config, int k_levels);

}  // namespace adiatrack
