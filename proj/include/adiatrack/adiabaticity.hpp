#pragma once

#include <limits>
#include <vector>

#include "adiatrack/metrics.hpp"
#include "adiatrack/spectral.hpp"

namespace adiatrack {

// Settings for the temperature-extended adiabatic criterion. Candidate
// "occupied" levels n lie within s*k_B*T of the ground energy (the ground
// group always qualifies); partner levels m are capped by s_prime*k_B*T, or
// uncapped when s_prime is infinite (the default).
struct TqacConfig {
  double s = 1.0;
  double s_prime = std::numeric_limits<double>::infinity();
  double temperature = 0.0;    // k_B T in J
  double degeneracy_tol = 0.0; // 0 selects the spectrum-scaled default

  void validate() const;
};

struct TqacResult {
  double value = 0.0;
  // False when no (n, m) pair satisfied the energy windows; the value is then 0.
  bool has_pairs = true;
};

// epsilon(t) = max over level-group pairs of
//   ||P_m Hdot P_n||_2 / (E_m - E_n)^2,
// with degenerate groups treated as blocks (largest singular value of the
// inter-group block, group-mean energies in the gap). At T=0 only the ground
// group serves as n, recovering the ordinary adiabatic criterion.
TqacResult tqac_epsilon(const SpectrumSnapshot& snapshot, const HermitianOperator& hdot,
                        const TqacConfig& config);

struct FitSample {
  double t_over_tau = 0.0;
  double d_bures = 0.0;
  double d_density = 0.0;
};

// Proportionality D_n ~ m * D_B between reference-state density and state
// distances, fitted through the origin.
struct AdiabaticLineFit {
  double gradient = 0.0;
  std::vector<FitSample> samples;
  double fit_residual = 0.0;
};

inline constexpr double kBuresCapFraction = 2.0 / 3.0;

// Fits the adiabatic line from reference states at the given times. Samples
// whose Bures distance exceeds (2/3) of the Bures maximum are discarded; if
// none survive, a domain error asks for smaller sample times. The reference
// is the instantaneous ground state at T=0 and the frozen-population thermal
// reference otherwise.
AdiabaticLineFit fit_adiabatic_line(const HubbardParams& params, const DriveProtocol& drive,
                                    double temperature,
                                    const std::vector<double>& sample_times_over_tau);

// Same fit on precomputed (D_B, D_n) samples; enforces the cap strictly.
AdiabaticLineFit fit_adiabatic_line_from_samples(const std::vector<FitSample>& samples);

struct Thresholds {
  double delta_rho = 0.0;    // sqrt(2)/10
  double delta_trace = 0.0;  // 1/10
  double delta_n = 0.0;      // m * sqrt(2)/10
};

Thresholds thresholds_from_gradient(double gradient);

struct DiagnosticPoint {
  double t_over_tau = 0.0;
  double epsilon = 0.0;
  bool epsilon_defined = true;
  double d_bures = 0.0;
  double d_trace = 0.0;
  double d_density = 0.0;
  bool below_bures = true;
  bool below_trace = true;
  bool below_density = true;
};

struct DiagnosticSeries {
  std::vector<DiagnosticPoint> points;
};

struct MetricVerdict {
  bool adiabatic = false;             // distance <= threshold at every time
  bool adiabatic_with_slack = false;  // same with a 1.1x slack multiplier
  double first_violation_t_over_tau = std::numeric_limits<double>::quiet_NaN();
  double max_distance = 0.0;
};

struct Classification {
  MetricVerdict bures;
  MetricVerdict trace;
  MetricVerdict density;
};

Classification classify(const DiagnosticSeries& series, const Thresholds& thresholds);

struct StepDetection {
  int count = 0;
  double total_rise = 0.0;
};

// Counts plateau-and-rise steps of D_B inside the t/tau window
// [window_lo, window_hi]: 5-sample moving average, then maximal intervals
// where the smoothed derivative exceeds 3x its window median. Requires at
// least 200 series points inside the window.
StepDetection detect_steps(const DiagnosticSeries& series, double window_lo, double window_hi);

}  // namespace adiatrack
