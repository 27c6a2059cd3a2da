#pragma once

#include <Eigen/Dense>
#include <vector>

#include "adiatrack/model.hpp"

namespace adiatrack {

// Instantaneous eigensystem of H(t): eigenvalues ascending, orthonormal
// eigenvector columns paired with them.
struct SpectrumSnapshot {
  double t = 0.0;
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXcd eigenvectors;

  long dim() const { return eigenvalues.size(); }
};

SpectrumSnapshot diagonalize(const HermitianOperator& h, double t);

// Boltzmann populations of the t=0 eigenlevels, ordered like the spectrum.
struct ThermalWeights {
  double temperature = 0.0;  // k_B T in J
  Eigen::VectorXd weights;
};

// Default degeneracy tolerance: 1e-8 * max(1, |E_max|).
double default_degeneracy_tol(const Eigen::VectorXd& eigenvalues);

// Contiguous groups of quasi-degenerate levels: gaps up to `tol` chain
// transitively. Input must be ascending; groups cover all indices in order.
std::vector<std::vector<int>> degenerate_groups(const Eigen::VectorXd& eigenvalues, double tol);

// Hermitian, positive-semidefinite, unit-trace state.
struct DensityMatrix {
  Eigen::MatrixXcd entries;

  long dim() const { return entries.rows(); }

  // Checks Hermiticity and unit trace. `trace_tol` is loosened by the
  // propagator, whose long products accumulate rounding at the 1e-12 level.
  static DensityMatrix from_matrix(Eigen::MatrixXcd m, double trace_tol = 1e-12);

  // Smallest eigenvalue; full positivity check for tests and API boundaries.
  double min_eigenvalue() const;
};

// p_j proportional to exp(-(E_j - E_0)/k_B T); at T = 0, an equal-weight
// mixture over the (possibly degenerate) ground group.
ThermalWeights thermal_weights(const SpectrumSnapshot& snapshot, double temperature,
                               double degeneracy_tol = 0.0);

// Gibbs state of the snapshot Hamiltonian.
DensityMatrix thermal_state(const SpectrumSnapshot& snapshot, double temperature);

// Adiabatic reference at the snapshot's instant: frozen t=0 populations
// carried on the instantaneous eigenvectors. Reduces to the instantaneous
// ground projector for T -> 0 and to the Gibbs state at t = 0.
DensityMatrix adiabatic_reference(const SpectrumSnapshot& snapshot_t,
                                  const ThermalWeights& weights);

// Site occupations n_i = Tr(rho n_i), in [0, 2]; sums to the particle number.
struct DensityProfile {
  Eigen::VectorXd occupations;
  int n_particles = 0;
};

DensityProfile site_density(const DensityMatrix& rho,
                            const std::vector<HermitianOperator>& occupation_ops);

}  // namespace adiatrack
