#include "adiatrack/metrics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "adiatrack/eigensolve.hpp"

namespace adiatrack {

namespace {

// PSD inputs may carry tiny negative numerical eigenvalues: clamp above
// -1e-10, reject anything more negative as a genuine numerical failure.
double clamp_psd_eigenvalue(double lambda, const char* where) {
  if (lambda < -1e-10) {
    throw std::runtime_error(std::string(where) + ": eigenvalue " + std::to_string(lambda) +
                             " below PSD tolerance");
  }
  return std::max(lambda, 0.0);
}

// sqrt of a unit-trace PSD matrix from its eigensystem. Populations at the
// rounding floor are flushed to exactly zero: their square roots would
// otherwise inject sqrt(eps)-sized noise into every downstream trace.
Eigen::MatrixXcd cleaned_sqrt(const EigenSystem& es, const char* where) {
  Eigen::VectorXd roots(es.values.size());
  for (long i = 0; i < es.values.size(); ++i) {
    const double lambda = clamp_psd_eigenvalue(es.values[i], where);
    roots[i] = lambda < 1e-14 ? 0.0 : std::sqrt(lambda);
  }
  if (es.real_path) {
    return (es.real_vectors * roots.asDiagonal() * es.real_vectors.transpose())
        .cast<std::complex<double>>();
  }
  return es.vectors * roots.asDiagonal() * es.vectors.adjoint();
}

void check_same_dim(const DensityMatrix& a, const DensityMatrix& b, const char* where) {
  if (a.dim() != b.dim()) {
    throw std::domain_error(std::string(where) + ": dimension mismatch");
  }
}

}  // namespace

double metric_max(MetricKind kind) {
  switch (kind) {
    case MetricKind::bures:
      return std::sqrt(2.0);
    case MetricKind::trace:
      return 1.0;
    case MetricKind::density:
      return 2.0;
  }
  throw std::domain_error("metric_max: unknown kind");
}

MetricValue MetricValue::checked(double value, MetricKind kind) {
  const double max = metric_max(kind);
  if (value < 0.0 || value > max * (1.0 + 1e-10)) {
    throw std::runtime_error("MetricValue: " + std::to_string(value) +
                             " outside [0, " + std::to_string(max) + "]");
  }
  return MetricValue{std::min(value, max), kind, max};
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  check_same_dim(rho, sigma, "fidelity");
  // Identical states: the sqrt chain would amplify solver noise to ~1e-8 in
  // the Bures distance, while the axiom fixes the value exactly.
  if ((rho.entries - sigma.entries).squaredNorm() == 0.0) return 1.0;

  const EigenSystem es_rho = hermitian_eigensystem(rho.entries, true);
  double f = 0.0;
  long top = 0;
  if (es_rho.values.maxCoeff(&top) >= 1.0 - 1e-12) {
    clamp_psd_eigenvalue(es_rho.values.minCoeff(), "fidelity(rho)");
    // rho is pure to working precision: F = <psi| sigma |psi>.
    const Eigen::VectorXcd psi = es_rho.vectors.col(top);
    f = clamp_psd_eigenvalue(std::real(psi.dot(sigma.entries * psi)), "fidelity(pure)");
  } else {
    // Tr sqrt(sqrt(rho) sigma sqrt(rho)) equals the nuclear norm of
    // sqrt(rho) sqrt(sigma): the singular-value route keeps rounding noise
    // linear (an inner eigensolve would square it under the square root) and
    // is symmetric under swapping the arguments at working precision.
    const Eigen::MatrixXcd root_rho = cleaned_sqrt(es_rho, "fidelity(rho)");
    const Eigen::MatrixXcd root_sigma =
        cleaned_sqrt(hermitian_eigensystem(sigma.entries, true), "fidelity(sigma)");
    const double tr = singular_values(root_rho * root_sigma).sum();
    f = tr * tr;
  }
  if (f > 1.0 + 1e-8) {
    throw std::runtime_error("fidelity: value " + std::to_string(f) + " exceeds 1 beyond tolerance");
  }
  return std::clamp(f, 0.0, 1.0);
}

MetricValue bures_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  const double f = fidelity(rho, sigma);
  return MetricValue::checked(std::sqrt(2.0 * (1.0 - std::sqrt(f))), MetricKind::bures);
}

MetricValue trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  check_same_dim(rho, sigma, "trace_distance");
  const Eigen::VectorXd lambda = hermitian_eigenvalues(rho.entries - sigma.entries);
  return MetricValue::checked(0.5 * lambda.cwiseAbs().sum(), MetricKind::trace);
}

MetricValue density_distance(const DensityProfile& n1, const DensityProfile& n2) {
  if (n1.occupations.size() != n2.occupations.size()) {
    throw std::domain_error("density_distance: profile length mismatch");
  }
  if (n1.n_particles != n2.n_particles) {
    throw std::domain_error("density_distance: particle number mismatch (" +
                            std::to_string(n1.n_particles) + " vs " +
                            std::to_string(n2.n_particles) + ")");
  }
  if (n1.n_particles <= 0) {
    throw std::domain_error("density_distance: particle number must be positive");
  }
  const double d = (n1.occupations - n2.occupations).cwiseAbs().sum() / n1.n_particles;
  return MetricValue::checked(d, MetricKind::density);
}

}  // namespace adiatrack
