#include "adiatrack/scenario.hpp"

#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "adiatrack/csv.hpp"
#include "adiatrack/eigensolve.hpp"

namespace adiatrack {

namespace fs = std::filesystem;

namespace {

constexpr const char* kDiagnosticsSchema = "# adiatrack-diagnostics-v1";
constexpr const char* kSpectrumSchema = "# adiatrack-spectrum-v1";
constexpr const char* kFitSchema = "# adiatrack-fit-v1";
constexpr const char* kSummarySchema = "# adiatrack-summary-v1";

// ---------------------------------------------------------------------------
// key=value parsing

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_double(const std::string& value, const std::string& key) {
  const std::string v = trim(value);
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size()) {
    throw std::domain_error("config: key '" + key + "' has non-numeric value '" + v + "'");
  }
  return x;
}

int parse_int(const std::string& value, const std::string& key) {
  const double x = parse_double(value, key);
  if (x != std::floor(x)) {
    throw std::domain_error("config: key '" + key + "' must be an integer");
  }
  return static_cast<int>(x);
}

std::vector<double> parse_double_list(const std::string& value, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(item, key));
  if (out.empty()) throw std::domain_error("config: key '" + key + "' has an empty list");
  return out;
}

// Applies one scenario key. Returns false for unknown keys so the grid
// parser can try its own.
bool apply_scenario_key(ScenarioConfig& c, const std::string& key, const std::string& value) {
  if (key == "n_sites") c.n_sites = parse_int(value, key);
  else if (key == "n_up") c.n_up = parse_int(value, key);
  else if (key == "n_down") c.n_down = parse_int(value, key);
  else if (key == "interaction_u_over_j") c.interaction = parse_double(value, key);
  else if (key == "temperature_kbt_over_j") c.temperature = parse_double(value, key);
  else if (key == "tau_times_j") c.tau = parse_double(value, key);
  else if (key == "dt_times_j") c.dt = parse_double(value, key);
  else if (key == "output_points") c.output_points = parse_int(value, key);
  else if (key == "mu0_over_j") c.mu0 = parse_double(value, key);
  else if (key == "mu_tau_over_j") c.mu_tau = parse_double(value, key);
  else if (key == "tqac_s") c.tqac_s = parse_double(value, key);
  else if (key == "tqac_s_prime") c.tqac_s_prime = parse_double(value, key);
  else if (key == "degeneracy_tol_over_j") c.degeneracy_tol = parse_double(value, key);
  else if (key == "fit_times_over_tau") c.fit_times_over_tau = parse_double_list(value, key);
  else if (key == "spectrum_levels") c.spectrum_levels = parse_int(value, key);
  else if (key == "output_dir") c.output_dir = trim(value);
  else return false;
  return true;
}

// Yields (key, value) pairs from a key=value stream, skipping comments.
void for_each_kv(std::istream& in,
                 const std::function<void(const std::string&, const std::string&)>& fn) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw std::domain_error("config line " + std::to_string(lineno) + ": expected key = value");
    }
    fn(trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
  }
}

// ---------------------------------------------------------------------------
// bundle writing

void write_files_or_rollback(const fs::path& dir,
                             const std::vector<std::pair<std::string, std::string>>& files) {
  fs::create_directories(dir);
  std::vector<fs::path> written;
  try {
    for (const auto& [name, content] : files) {
      const fs::path tmp = dir / (name + ".tmp");
      {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string());
        out << content;
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
      }
      written.push_back(tmp);
    }
    for (const auto& [name, content] : files) {
      fs::rename(dir / (name + ".tmp"), dir / name);
    }
  } catch (...) {
    for (const fs::path& p : written) {
      std::error_code ec;
      fs::remove(p, ec);
    }
    throw;
  }
}

std::string sanitize_csv_field(std::string s) {
  for (char& ch : s) {
    if (ch == ',') ch = ';';
    if (ch == '\n' || ch == '\r') ch = ' ';
  }
  return s;
}

std::string flag(bool b) { return b ? "1" : "0"; }

std::string summary_header() {
  std::string out;
  out += kSummarySchema;
  out += '\n';
  out += csv_row({"kbt_over_j", "u_over_j", "n_sites", "gradient", "tau_times_j",
                  "delta_rho", "delta_trace", "delta_n",
                  "adiabatic_bures", "adiabatic_bures_slack",
                  "adiabatic_trace", "adiabatic_trace_slack",
                  "adiabatic_density", "adiabatic_density_slack",
                  "first_violation_bures", "first_violation_trace", "first_violation_density",
                  "max_d_bures", "max_d_trace", "max_d_density", "error"});
  return out;
}

std::string summary_row(const ScenarioConfig& config, const ScenarioResult* result,
                        const std::string& error) {
  std::vector<std::string> fields{format_double(config.temperature),
                                  format_double(config.interaction),
                                  std::to_string(config.n_sites)};
  if (result) {
    const Classification& cl = result->classification;
    fields.insert(fields.end(),
                  {format_double(result->fit.gradient), format_double(config.tau),
                   format_double(result->thresholds.delta_rho),
                   format_double(result->thresholds.delta_trace),
                   format_double(result->thresholds.delta_n),
                   flag(cl.bures.adiabatic), flag(cl.bures.adiabatic_with_slack),
                   flag(cl.trace.adiabatic), flag(cl.trace.adiabatic_with_slack),
                   flag(cl.density.adiabatic), flag(cl.density.adiabatic_with_slack),
                   format_double(cl.bures.first_violation_t_over_tau),
                   format_double(cl.trace.first_violation_t_over_tau),
                   format_double(cl.density.first_violation_t_over_tau),
                   format_double(cl.bures.max_distance), format_double(cl.trace.max_distance),
                   format_double(cl.density.max_distance), ""});
  } else {
    fields.push_back("");                                  // gradient
    fields.push_back(format_double(config.tau));
    for (int i = 0; i < 15; ++i) fields.push_back("");
    fields.push_back(sanitize_csv_field(error));
  }
  return csv_row(fields);
}

std::string diagnostics_csv(const DiagnosticSeries& series) {
  std::string out;
  out += kDiagnosticsSchema;
  out += '\n';
  out += csv_row({"t_over_tau", "epsilon", "epsilon_defined", "d_bures", "d_trace", "d_density",
                  "below_delta_rho", "below_delta_trace", "below_delta_n"});
  for (const DiagnosticPoint& p : series.points) {
    out += csv_row({format_double(p.t_over_tau), format_double(p.epsilon),
                    flag(p.epsilon_defined), format_double(p.d_bures), format_double(p.d_trace),
                    format_double(p.d_density), flag(p.below_bures), flag(p.below_trace),
                    flag(p.below_density)});
  }
  return out;
}

std::string spectrum_csv(const std::vector<double>& t_over_tau,
                         const std::vector<Eigen::VectorXd>& levels, int k) {
  std::string out;
  out += kSpectrumSchema;
  out += '\n';
  std::vector<std::string> header{"t_over_tau"};
  for (int j = 0; j < k; ++j) header.push_back("e_" + std::to_string(j));
  out += csv_row(header);
  for (std::size_t i = 0; i < t_over_tau.size(); ++i) {
    std::vector<std::string> row{format_double(t_over_tau[i])};
    for (int j = 0; j < k; ++j) row.push_back(format_double(levels[i][j]));
    out += csv_row(row);
  }
  return out;
}

std::string fit_csv(const AdiabaticLineFit& fit, const Thresholds& thresholds) {
  std::string out;
  out += kFitSchema;
  out += '\n';
  out += "# gradient = " + format_double(fit.gradient) + "\n";
  out += "# fit_residual = " + format_double(fit.fit_residual) + "\n";
  out += "# delta_rho = " + format_double(thresholds.delta_rho) + "\n";
  out += "# delta_n = " + format_double(thresholds.delta_n) + "\n";
  out += csv_row({"t_over_tau", "d_bures", "d_density"});
  for (const FitSample& s : fit.samples) {
    out += csv_row({format_double(s.t_over_tau), format_double(s.d_bures),
                    format_double(s.d_density)});
  }
  return out;
}

ScenarioResult run_scenario_impl(const ScenarioConfig& config) {
  config.validate();
  const HubbardParams params = config.hubbard_params();
  const DriveProtocol drive = config.drive_protocol();
  const PropagationConfig pc = config.propagation_config();
  const SectorBasis basis(params.n_sites, params.n_up, params.n_down);
  const auto n_ops = site_occupation_operators(basis);
  const HermitianOperator hdot = hamiltonian_time_derivative(basis, drive);
  const TqacConfig tqac = config.tqac_config();

  const SpectrumSnapshot snap0 = diagonalize(build_hamiltonian(params, basis, drive, 0.0), 0.0);
  const ThermalWeights weights = thermal_weights(snap0, config.temperature,
                                                 config.degeneracy_tol);

  ScenarioResult result;
  result.config = config;
  result.fit = fit_adiabatic_line(params, drive, config.temperature, config.fit_times_over_tau);
  result.thresholds = thresholds_from_gradient(result.fit.gradient);

  const int k_levels = static_cast<int>(std::min<long>(config.spectrum_levels, basis.dim()));
  std::vector<double> ts_over_tau(pc.output_times.size());
  std::vector<Eigen::VectorXd> spectrum_rows(pc.output_times.size());

  const StateObserver observer = [&](std::size_t k, const DensityMatrix& state) {
    const double t = pc.output_times[k];
    ts_over_tau[k] = t / drive.tau;
    const SpectrumSnapshot snap = diagonalize(build_hamiltonian(params, basis, drive, t), t);
    spectrum_rows[k] = snap.eigenvalues.head(k_levels);

    const DensityMatrix rho_ref = adiabatic_reference(snap, weights);
    const DensityProfile dens_ref = site_density(rho_ref, n_ops);
    const DensityProfile dens = site_density(state, n_ops);
    const TqacResult eps = tqac_epsilon(snap, hdot, tqac);

    DiagnosticPoint p;
    p.t_over_tau = ts_over_tau[k];
    p.epsilon = eps.value;
    p.epsilon_defined = eps.has_pairs;
    p.d_bures = bures_distance(rho_ref, state).value;
    p.d_trace = trace_distance(rho_ref, state).value;
    p.d_density = density_distance(dens_ref, dens).value;
    p.below_bures = p.d_bures <= result.thresholds.delta_rho;
    p.below_trace = p.d_trace <= result.thresholds.delta_trace;
    p.below_density = p.d_density <= result.thresholds.delta_n;
    result.series.points.push_back(p);
  };

  // Few populated levels evolve much faster through the factored route; the
  // two propagators agree to well below every reported digit.
  const long populated = (weights.weights.array() > 0.0).count();
  if (populated <= 8) {
    evolve_eigenbasis_observe(weights, params, drive, pc, observer);
  } else {
    const DensityMatrix rho0 = adiabatic_reference(snap0, weights);
    propagate_observe(rho0, params, drive, pc, observer);
  }

  result.classification = classify(result.series, result.thresholds);

  result.bundle_dir = fs::path(config.output_dir) / config.label();
  write_files_or_rollback(
      result.bundle_dir,
      {{"diagnostics.csv", diagnostics_csv(result.series)},
       {"spectrum.csv", spectrum_csv(ts_over_tau, spectrum_rows, k_levels)},
       {"fit.csv", fit_csv(result.fit, result.thresholds)},
       {"summary.csv", summary_header() + summary_row(config, &result, "")}});
  return result;
}

}  // namespace

// ---------------------------------------------------------------------------
// ScenarioConfig

int ScenarioConfig::resolved_n_up() const { return n_up >= 0 ? n_up : n_sites / 2; }
int ScenarioConfig::resolved_n_down() const { return n_down >= 0 ? n_down : n_sites / 2; }

double ScenarioConfig::resolved_dt() const {
  return dt > 0.0 ? dt : std::min(tau, 1.0) / 1000.0;
}

HubbardParams ScenarioConfig::hubbard_params() const {
  HubbardParams p;
  p.n_sites = n_sites;
  p.hopping = 1.0;
  p.interaction = interaction;
  p.n_up = resolved_n_up();
  p.n_down = resolved_n_down();
  return p;
}

DriveProtocol ScenarioConfig::drive_protocol() const { return DriveProtocol{mu0, mu_tau, tau}; }

PropagationConfig ScenarioConfig::propagation_config() const {
  PropagationConfig pc;
  pc.dt = resolved_dt();
  pc.output_times = PropagationConfig::uniform_grid(tau, output_points);
  return pc;
}

TqacConfig ScenarioConfig::tqac_config() const {
  return TqacConfig{tqac_s, tqac_s_prime, temperature, degeneracy_tol};
}

std::string ScenarioConfig::label() const {
  return "N" + std::to_string(n_sites) + "_U" + format_double(interaction) + "_kbt" +
         format_double(temperature) + "_tau" + format_double(tau);
}

void ScenarioConfig::validate() const {
  if (n_sites < 1 || n_sites > 8) {
    throw std::domain_error("ScenarioConfig: n_sites must be in [1, 8] for full "
                            "diagonalization");
  }
  if (n_up < 0 && n_sites % 2 != 0) {
    throw std::domain_error("ScenarioConfig: half filling needs an even n_sites; "
                            "set n_up/n_down explicitly");
  }
  if (resolved_n_up() > n_sites || resolved_n_down() > n_sites) {
    throw std::domain_error("ScenarioConfig: occupations exceed the number of sites");
  }
  if (interaction < 0.0) throw std::domain_error("ScenarioConfig: interaction must be >= 0");
  if (temperature < 0.0) throw std::domain_error("ScenarioConfig: temperature must be >= 0");
  if (!(tau > 0.0)) throw std::domain_error("ScenarioConfig: tau must be positive");
  if (dt < 0.0 || dt > tau) throw std::domain_error("ScenarioConfig: dt must be in [0, tau]");
  if (output_points < 2) throw std::domain_error("ScenarioConfig: need at least 2 output points");
  if (tqac_s < 1.0) throw std::domain_error("ScenarioConfig: tqac_s must be >= 1");
  if (std::isfinite(tqac_s_prime) && tqac_s_prime <= tqac_s) {
    throw std::domain_error("ScenarioConfig: tqac_s_prime must exceed tqac_s");
  }
  if (degeneracy_tol < 0.0) throw std::domain_error("ScenarioConfig: negative degeneracy_tol");
  if (fit_times_over_tau.empty()) {
    throw std::domain_error("ScenarioConfig: fit_times_over_tau must not be empty");
  }
  for (double s : fit_times_over_tau) {
    if (!(s > 0.0) || s > 1.0) {
      throw std::domain_error("ScenarioConfig: fit times must lie in (0, 1] tau");
    }
  }
  if (spectrum_levels < 1) throw std::domain_error("ScenarioConfig: spectrum_levels must be >= 1");
  if (output_dir.empty()) throw std::domain_error("ScenarioConfig: output_dir must not be empty");
}

ScenarioConfig parse_scenario_config(std::istream& in) {
  ScenarioConfig c;
  for_each_kv(in, [&](const std::string& key, const std::string& value) {
    if (!apply_scenario_key(c, key, value)) {
      throw std::domain_error("config: unknown key '" + key + "'");
    }
  });
  return c;
}

ScenarioConfig load_scenario_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path.string());
  return parse_scenario_config(in);
}

// ---------------------------------------------------------------------------
// run / sweep / spectrum

ScenarioResult run_scenario(const ScenarioConfig& config) {
  try {
    return run_scenario_impl(config);
  } catch (const std::domain_error& e) {
    throw std::domain_error("scenario " + config.label() + ": " + e.what());
  } catch (const std::exception& e) {
    throw std::runtime_error("scenario " + config.label() + ": " + e.what());
  }
}

std::vector<ScenarioConfig> parse_sweep_grid(std::istream& in) {
  ScenarioConfig base;
  std::vector<int> n_list{2, 4, 6};
  std::vector<double> u_list{0.0, 5.0, 10.0};
  std::vector<double> t_list{0.0, 0.2, 2.5};
  std::vector<double> tau_list{0.5, 5.0, 50.0};

  for_each_kv(in, [&](const std::string& key, const std::string& value) {
    if (key == "n_sites") {
      n_list.clear();
      for (double x : parse_double_list(value, key)) n_list.push_back(static_cast<int>(x));
    } else if (key == "interaction_u_over_j") {
      u_list = parse_double_list(value, key);
    } else if (key == "temperature_kbt_over_j") {
      t_list = parse_double_list(value, key);
    } else if (key == "tau_times_j") {
      tau_list = parse_double_list(value, key);
    } else if (!apply_scenario_key(base, key, value)) {
      throw std::domain_error("grid: unknown key '" + key + "'");
    }
  });

  // SI-table ordering: temperature blocks, then U, then N, then tau.
  std::vector<ScenarioConfig> configs;
  for (double kbt : t_list) {
    for (double u : u_list) {
      for (int n : n_list) {
        for (double tau : tau_list) {
          ScenarioConfig c = base;
          c.temperature = kbt;
          c.interaction = u;
          c.n_sites = n;
          c.tau = tau;
          configs.push_back(c);
        }
      }
    }
  }
  return configs;
}

std::vector<ScenarioConfig> load_sweep_grid(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open grid file " + path.string());
  return parse_sweep_grid(in);
}

std::vector<ScenarioConfig> default_sweep_grid() {
  std::istringstream empty;
  return parse_sweep_grid(empty);
}

SweepOutcome run_sweep(const std::vector<ScenarioConfig>& configs,
                       const std::string& output_dir, int jobs) {
  if (configs.empty()) throw std::domain_error("run_sweep: empty scenario list");
  if (jobs < 1) throw std::domain_error("run_sweep: jobs must be >= 1");

  SweepOutcome out;
  out.configs = configs;
  for (ScenarioConfig& c : out.configs) c.output_dir = output_dir;
  out.results.resize(configs.size());
  out.errors.resize(configs.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= out.configs.size()) break;
      try {
        out.results[i] = run_scenario(out.configs[i]);
      } catch (const std::exception& e) {
        out.errors[i] = e.what();
      }
    }
  };

  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }

  std::string summary = summary_header();
  for (std::size_t i = 0; i < out.configs.size(); ++i) {
    summary += summary_row(out.configs[i],
                           out.results[i] ? &*out.results[i] : nullptr, out.errors[i]);
  }
  write_files_or_rollback(fs::path(output_dir), {{"summary.csv", summary}});
  out.summary_path = fs::path(output_dir) / "summary.csv";
  return out;
}

void export_spectrum(const ScenarioConfig& config, int k_levels, std::ostream& os) {
  config.validate();
  const HubbardParams params = config.hubbard_params();
  const DriveProtocol drive = config.drive_protocol();
  const SectorBasis basis(params.n_sites, params.n_up, params.n_down);
  if (k_levels < 1 || k_levels > basis.dim()) {
    throw std::domain_error("export_spectrum: k_levels " + std::to_string(k_levels) +
                            " outside 1.." + std::to_string(basis.dim()));
  }

  const auto grid = PropagationConfig::uniform_grid(config.tau, config.output_points);
  std::vector<double> ts_over_tau(grid.size());
  std::vector<Eigen::VectorXd> rows(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    ts_over_tau[i] = grid[i] / config.tau;
    rows[i] = hermitian_eigenvalues(build_hamiltonian(params, basis, drive, grid[i]).entries)
                  .head(k_levels);
  }
  os << spectrum_csv(ts_over_tau, rows, k_levels);
}

fs::path export_spectrum_file(const ScenarioConfig& config, int k_levels) {
  std::ostringstream buffer;
  export_spectrum(config, k_levels, buffer);
  const fs::path dir = fs::path(config.output_dir) / config.label();
  write_files_or_rollback(dir, {{"spectrum.csv", buffer.str()}});
  return dir / "spectrum.csv";
}

}  // namespace adiatrack
