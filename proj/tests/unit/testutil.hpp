#pragma once

#include <Eigen/Dense>
#include <complex>
#include <random>

#include "adiatrack/spectral.hpp"

namespace testutil {

inline Eigen::MatrixXcd random_gaussian(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = std::complex<double>(g(rng), g(rng));
  return m;
}

inline Eigen::MatrixXcd random_hermitian(int dim, std::mt19937_64& rng) {
  Eigen::MatrixXcd a = random_gaussian(dim, dim, rng);
  return (a + a.adjoint()) / 2.0;
}

// Ginibre construction: rank-r PSD state with unit trace.
inline adiatrack::DensityMatrix random_density(int dim, int rank, std::mt19937_64& rng) {
  Eigen::MatrixXcd a = random_gaussian(dim, rank, rng);
  Eigen::MatrixXcd rho = a * a.adjoint();
  rho /= rho.trace().real();
  rho = (rho + rho.adjoint()) / 2.0;
  return adiatrack::DensityMatrix::from_matrix(std::move(rho));
}

inline Eigen::MatrixXcd random_unitary(int dim, std::mt19937_64& rng) {
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(random_gaussian(dim, dim, rng));
  return Eigen::MatrixXcd(qr.householderQ());
}

inline adiatrack::DensityMatrix pure_state(Eigen::VectorXcd psi) {
  psi /= psi.norm();
  Eigen::MatrixXcd rho = psi * psi.adjoint();
  rho = (rho + rho.adjoint()) / 2.0;
  return adiatrack::DensityMatrix::from_matrix(std::move(rho));
}

inline adiatrack::DensityMatrix basis_state(int dim, int k) {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
  psi[k] = 1.0;
  return pure_state(std::move(psi));
}

inline adiatrack::DensityMatrix diagonal_state(const Eigen::VectorXd& populations) {
  Eigen::MatrixXcd rho = populations.cast<std::complex<double>>().asDiagonal();
  return adiatrack::DensityMatrix::from_matrix(std::move(rho));
}

}  // namespace testutil
