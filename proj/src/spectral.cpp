#include "adiatrack/spectral.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "adiatrack/eigensolve.hpp"

namespace adiatrack {

SpectrumSnapshot diagonalize(const HermitianOperator& h, double t) {
  EigenSystem es = hermitian_eigensystem(h.entries, true);
  return SpectrumSnapshot{t, std::move(es.values), std::move(es.vectors)};
}

double default_degeneracy_tol(const Eigen::VectorXd& eigenvalues) {
  const double emax = eigenvalues.size() ? eigenvalues.cwiseAbs().maxCoeff() : 0.0;
  return 1e-8 * std::max(1.0, emax);
}

std::vector<std::vector<int>> degenerate_groups(const Eigen::VectorXd& eigenvalues, double tol) {
  std::vector<std::vector<int>> groups;
  const long n = eigenvalues.size();
  if (n == 0) return groups;
  groups.push_back({0});
  for (long i = 1; i < n; ++i) {
    if (eigenvalues[i] < eigenvalues[i - 1]) {
      throw std::domain_error("degenerate_groups: eigenvalues not ascending");
    }
    if (eigenvalues[i] - eigenvalues[i - 1] <= tol) {
      groups.back().push_back(static_cast<int>(i));
    } else {
      groups.push_back({static_cast<int>(i)});
    }
  }
  return groups;
}

DensityMatrix DensityMatrix::from_matrix(Eigen::MatrixXcd m, double trace_tol) {
  if (m.rows() != m.cols()) throw std::domain_error("DensityMatrix: matrix not square");
  const double scale = std::max(1.0, m.norm());
  if ((m - m.adjoint()).norm() > 1e-12 * scale) {
    throw std::domain_error("DensityMatrix: matrix is not Hermitian");
  }
  const std::complex<double> tr = m.trace();
  if (std::abs(tr - 1.0) > trace_tol) {
    throw std::domain_error("DensityMatrix: trace deviates from 1 by " +
                            std::to_string(std::abs(tr - 1.0)));
  }
  return DensityMatrix{std::move(m)};
}

double DensityMatrix::min_eigenvalue() const {
  return hermitian_eigenvalues(entries).minCoeff();
}

ThermalWeights thermal_weights(const SpectrumSnapshot& snapshot, double temperature,
                               double degeneracy_tol) {
  if (temperature < 0.0) throw std::domain_error("thermal_weights: negative temperature");
  const long n = snapshot.dim();
  Eigen::VectorXd p = Eigen::VectorXd::Zero(n);

  if (temperature == 0.0) {
    const double tol =
        degeneracy_tol > 0.0 ? degeneracy_tol : default_degeneracy_tol(snapshot.eigenvalues);
    const auto ground = degenerate_groups(snapshot.eigenvalues, tol).front();
    for (int j : ground) p[j] = 1.0 / static_cast<double>(ground.size());
  } else {
    // Ground energy subtracted before exponentiation to keep exponents sane.
    const double e0 = snapshot.eigenvalues.minCoeff();
    for (long j = 0; j < n; ++j) {
      p[j] = std::exp(-(snapshot.eigenvalues[j] - e0) / temperature);
    }
    p /= p.sum();
  }
  return ThermalWeights{temperature, std::move(p)};
}

DensityMatrix thermal_state(const SpectrumSnapshot& snapshot, double temperature) {
  return adiabatic_reference(snapshot, thermal_weights(snapshot, temperature));
}

DensityMatrix adiabatic_reference(const SpectrumSnapshot& snapshot_t,
                                  const ThermalWeights& weights) {
  if (weights.weights.size() != snapshot_t.dim()) {
    throw std::domain_error("adiabatic_reference: weight/snapshot dimension mismatch");
  }
  const Eigen::MatrixXcd& v = snapshot_t.eigenvectors;
  Eigen::MatrixXcd rho = v * weights.weights.asDiagonal() * v.adjoint();
  rho = (rho + rho.adjoint()) / 2.0;
  return DensityMatrix::from_matrix(std::move(rho));
}

DensityProfile site_density(const DensityMatrix& rho,
                            const std::vector<HermitianOperator>& occupation_ops) {
  const int n = static_cast<int>(occupation_ops.size());
  Eigen::VectorXd occ(n);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    if (occupation_ops[i].dim() != rho.dim()) {
      throw std::domain_error("site_density: operator/state dimension mismatch");
    }
    // The occupation operators are diagonal; Tr(rho n_i) needs only the
    // diagonals of both.
    occ[i] = (rho.entries.diagonal().real().array() *
              occupation_ops[i].entries.diagonal().real().array())
                 .sum();
    total += occ[i];
  }
  return DensityProfile{std::move(occ), static_cast<int>(std::lround(total))};
}

}  // namespace adiatrack
