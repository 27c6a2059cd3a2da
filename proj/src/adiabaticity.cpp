#include "adiatrack/adiabaticity.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace adiatrack {

namespace {

double group_mean_energy(const Eigen::VectorXd& eigenvalues, const std::vector<int>& group) {
  double sum = 0.0;
  for (int j : group) sum += eigenvalues[j];
  return sum / static_cast<double>(group.size());
}

double block_operator_norm(const Eigen::MatrixXcd& w, const std::vector<int>& rows,
                           const std::vector<int>& cols) {
  Eigen::MatrixXcd block(rows.size(), cols.size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c) block(r, c) = w(rows[r], cols[c]);
  if (block.size() == 1) return std::abs(block(0, 0));
  return Eigen::JacobiSVD<Eigen::MatrixXcd>(block).singularValues()(0);
}

double median(std::vector<double> v) {
  const std::size_t n = v.size();
  std::nth_element(v.begin(), v.begin() + n / 2, v.end());
  double hi = v[n / 2];
  if (n % 2 == 0) {
    std::nth_element(v.begin(), v.begin() + n / 2 - 1, v.end());
    return (hi + v[n / 2 - 1]) / 2.0;
  }
  return hi;
}

MetricVerdict verdict_for(const DiagnosticSeries& series, double threshold,
                          double DiagnosticPoint::*distance) {
  MetricVerdict v;
  v.adiabatic = true;
  v.adiabatic_with_slack = true;
  for (const DiagnosticPoint& p : series.points) {
    const double d = p.*distance;
    v.max_distance = std::max(v.max_distance, d);
    if (d > threshold && v.adiabatic) {
      v.adiabatic = false;
      v.first_violation_t_over_tau = p.t_over_tau;
    }
    if (d > 1.1 * threshold) v.adiabatic_with_slack = false;
  }
  return v;
}

}  // namespace

void TqacConfig::validate() const {
  if (s < 1.0) throw std::domain_error("TqacConfig: s must be >= 1");
  if (std::isfinite(s_prime) && s_prime <= s) {
    throw std::domain_error("TqacConfig: s_prime must exceed s when bounded");
  }
  if (temperature < 0.0) throw std::domain_error("TqacConfig: negative temperature");
  if (degeneracy_tol < 0.0) throw std::domain_error("TqacConfig: negative degeneracy tolerance");
}

TqacResult tqac_epsilon(const SpectrumSnapshot& snapshot, const HermitianOperator& hdot,
                        const TqacConfig& config) {
  config.validate();
  if (hdot.dim() != snapshot.dim()) {
    throw std::domain_error("tqac_epsilon: hdot/snapshot dimension mismatch");
  }

  const Eigen::VectorXd& e = snapshot.eigenvalues;
  const double tol = config.degeneracy_tol > 0.0 ? config.degeneracy_tol
                                                 : default_degeneracy_tol(e);
  const auto groups = degenerate_groups(e, tol);
  if (groups.size() < 2) {
    throw std::domain_error("tqac_epsilon: entire spectrum is one degenerate group");
  }

  // Hdot in the instantaneous eigenbasis; every inter-group block is a
  // submatrix of this. For the diagonal Hdot of the linear ramp the first
  // product collapses to a row scaling.
  const bool hdot_diagonal = hdot.entries.isDiagonal(0.0);
  const Eigen::MatrixXcd w =
      hdot_diagonal
          ? Eigen::MatrixXcd(snapshot.eigenvectors.adjoint() *
                             (hdot.entries.diagonal().asDiagonal() * snapshot.eigenvectors))
          : Eigen::MatrixXcd(snapshot.eigenvectors.adjoint() *
                             (hdot.entries * snapshot.eigenvectors));

  const double e0 = e[0];
  const double kt = config.temperature;

  std::vector<int> occupied;  // group indices eligible as n
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const double excitation = e[groups[g].front()] - e0;
    if (g == 0 || excitation < config.s * kt) occupied.push_back(static_cast<int>(g));
  }

  TqacResult result{0.0, false};
  for (int gn : occupied) {
    const double en = group_mean_energy(e, groups[gn]);
    for (std::size_t gm = 0; gm < groups.size(); ++gm) {
      if (static_cast<int>(gm) == gn) continue;
      if (std::isfinite(config.s_prime) &&
          e[groups[gm].front()] - e0 >= config.s_prime * kt) {
        continue;
      }
      const double em = group_mean_energy(e, groups[gm]);
      const double numer = block_operator_norm(w, groups[gm], groups[gn]);
      const double gap = em - en;
      result.has_pairs = true;
      result.value = std::max(result.value, numer / (gap * gap));
    }
  }
  return result;
}

AdiabaticLineFit fit_adiabatic_line_from_samples(const std::vector<FitSample>& samples) {
  if (samples.empty()) {
    throw std::domain_error("fit_adiabatic_line: no samples");
  }
  const double cap = kBuresCapFraction * metric_max(MetricKind::bures);
  double sxy = 0.0;
  double sxx = 0.0;
  for (const FitSample& s : samples) {
    if (s.d_bures >= cap) {
      throw std::domain_error(
          "fit_adiabatic_line: sample Bures distance " + std::to_string(s.d_bures) +
          " reaches (2/3) of the maximum; use smaller sample times");
    }
    sxy += s.d_bures * s.d_density;
    sxx += s.d_bures * s.d_bures;
  }
  if (sxx <= 0.0) {
    throw std::domain_error("fit_adiabatic_line: reference state did not move; "
                            "use larger sample times");
  }

  AdiabaticLineFit fit;
  fit.gradient = sxy / sxx;
  fit.samples = samples;
  double ss = 0.0;
  for (const FitSample& s : samples) {
    const double r = s.d_density - fit.gradient * s.d_bures;
    ss += r * r;
  }
  fit.fit_residual = std::sqrt(ss / static_cast<double>(samples.size()));
  if (fit.gradient <= 0.0) {
    throw std::domain_error("fit_adiabatic_line: non-positive gradient");
  }
  return fit;
}

AdiabaticLineFit fit_adiabatic_line(const HubbardParams& params, const DriveProtocol& drive,
                                    double temperature,
                                    const std::vector<double>& sample_times_over_tau) {
  params.validate();
  drive.validate();
  if (sample_times_over_tau.empty()) {
    throw std::domain_error("fit_adiabatic_line: need at least one sample time");
  }
  for (double s : sample_times_over_tau) {
    if (!(s > 0.0) || s > 1.0) {
      throw std::domain_error("fit_adiabatic_line: sample times must lie in (0, 1] tau");
    }
  }

  const SectorBasis basis(params.n_sites, params.n_up, params.n_down);
  const auto n_ops = site_occupation_operators(basis);
  const SpectrumSnapshot snap0 = diagonalize(build_hamiltonian(params, basis, drive, 0.0), 0.0);
  const ThermalWeights weights = thermal_weights(snap0, temperature);
  const DensityMatrix ref0 = adiabatic_reference(snap0, weights);
  const DensityProfile dens0 = site_density(ref0, n_ops);

  const double cap = kBuresCapFraction * metric_max(MetricKind::bures);
  std::vector<FitSample> kept;
  for (double s : sample_times_over_tau) {
    const double t = s * drive.tau;
    const SpectrumSnapshot snap = diagonalize(build_hamiltonian(params, basis, drive, t), t);
    const DensityMatrix ref = adiabatic_reference(snap, weights);
    FitSample sample;
    sample.t_over_tau = s;
    sample.d_bures = bures_distance(ref0, ref).value;
    sample.d_density = density_distance(dens0, site_density(ref, n_ops)).value;
    // Samples beyond the linear-regime cap are dropped rather than fatal;
    // only an empty survivor set is an error.
    if (sample.d_bures < cap) kept.push_back(sample);
  }
  if (kept.empty()) {
    throw std::domain_error("fit_adiabatic_line: every sample exceeded (2/3) of the Bures "
                            "maximum; use smaller sample times");
  }
  return fit_adiabatic_line_from_samples(kept);
}

Thresholds thresholds_from_gradient(double gradient) {
  if (!(gradient > 0.0)) {
    throw std::domain_error("thresholds_from_gradient: gradient must be positive");
  }
  Thresholds t;
  t.delta_rho = metric_max(MetricKind::bures) / 10.0;
  t.delta_trace = metric_max(MetricKind::trace) / 10.0;
  t.delta_n = gradient * t.delta_rho;
  return t;
}

Classification classify(const DiagnosticSeries& series, const Thresholds& thresholds) {
  Classification c;
  c.bures = verdict_for(series, thresholds.delta_rho, &DiagnosticPoint::d_bures);
  c.trace = verdict_for(series, thresholds.delta_trace, &DiagnosticPoint::d_trace);
  c.density = verdict_for(series, thresholds.delta_n, &DiagnosticPoint::d_density);
  return c;
}

StepDetection detect_steps(const DiagnosticSeries& series, double window_lo, double window_hi) {
  if (!(window_lo < window_hi)) {
    throw std::domain_error("detect_steps: empty window");
  }
  std::vector<double> x;
  std::vector<double> y;
  for (const DiagnosticPoint& p : series.points) {
    if (p.t_over_tau >= window_lo - 1e-12 && p.t_over_tau <= window_hi + 1e-12) {
      x.push_back(p.t_over_tau);
      y.push_back(p.d_bures);
    }
  }
  const long n = static_cast<long>(x.size());
  if (n < 200) {
    throw std::domain_error("detect_steps: only " + std::to_string(n) +
                            " samples in window, need at least 200");
  }

  // Centered 5-sample moving average (shrunk at the edges).
  std::vector<double> smooth(n);
  for (long i = 0; i < n; ++i) {
    const long lo = std::max<long>(0, i - 2);
    const long hi = std::min<long>(n - 1, i + 2);
    double acc = 0.0;
    for (long j = lo; j <= hi; ++j) acc += y[j];
    smooth[i] = acc / static_cast<double>(hi - lo + 1);
  }

  std::vector<double> deriv(n);
  for (long i = 0; i < n; ++i) {
    const long lo = std::max<long>(0, i - 1);
    const long hi = std::min<long>(n - 1, i + 1);
    deriv[i] = (smooth[hi] - smooth[lo]) / (x[hi] - x[lo]);
  }

  // Rise threshold: 3x the window median slope, floored so that flat or
  // noise-level windows yield zero steps.
  const double range = *std::max_element(y.begin(), y.end()) -
                       *std::min_element(y.begin(), y.end());
  const double floor = std::max(1e-12, 1e-6 * range / (window_hi - window_lo));
  const double threshold = std::max(3.0 * median(deriv), floor);

  StepDetection out;
  bool in_step = false;
  for (long i = 0; i < n; ++i) {
    if (deriv[i] > threshold) {
      if (!in_step) ++out.count;
      in_step = true;
    } else {
      in_step = false;
    }
  }
  out.total_rise = y.back() - y.front();
  return out;
}

}  // namespace adiatrack
