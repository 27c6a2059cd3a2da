#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "adiatrack/basis.hpp"

namespace adiatrack {

using Matrix = Eigen::MatrixXcd;

// Driven inhomogeneous Fermi-Hubbard chain, open boundary conditions.
// Units: hbar = k_B = 1, energies in J, times in 1/J.
struct HubbardParams {
  int n_sites = 2;
  double hopping = 1.0;      // J > 0, sets the energy unit
  double interaction = 0.0;  // U >= 0, in units of J
  int n_up = 1;
  int n_down = 1;

  static HubbardParams half_filled(int n_sites, double interaction, double hopping = 1.0);
  void validate() const;
};

// Linear ramp of a tilted on-site potential:
//   v_i(t) = mu_i^0 + mu_i^tau * t / tau,
//   mu_i^0 = 2*mu0*i/N - mu0,  mu_i^tau = 2*mu_tau*i/N - mu_tau,  i = 1..N.
// tau is the ramp duration and also the inverse drive speed.
struct DriveProtocol {
  double mu0 = 0.5;     // in J
  double mu_tau = 4.5;  // in J
  double tau = 1.0;     // in 1/J

  void validate() const;
};

double onsite_potential(int site, double t, const DriveProtocol& drive, int n_sites);

// Dense Hermitian operator in a sector basis.
struct HermitianOperator {
  Matrix entries;

  long dim() const { return entries.rows(); }

  // Validates Hermiticity (relative Frobenius deviation < 1e-12).
  static HermitianOperator from_matrix(Matrix m);
};

// H(t) = -J sum_{i,sigma} (c^dag_{i,sigma} c_{i+1,sigma} + h.c.)
//        + U sum_i n_up_i n_dn_i + sum_i v_i(t) n_i
// in the given sector basis, with Jordan-Wigner signs fixed by the basis
// mode order (all matrix elements come out real for this chain).
HermitianOperator build_hamiltonian(const HubbardParams& params, const SectorBasis& basis,
                                    const DriveProtocol& drive, double t);

// dH/dt = sum_i (mu_i^tau / tau) n_i. Exact and time independent for the
// linear ramp; diagonal in the occupation basis.
HermitianOperator hamiltonian_time_derivative(const SectorBasis& basis,
                                              const DriveProtocol& drive);

// n_i = n_up_i + n_dn_i for i = 1..N, diagonal in the occupation basis.
std::vector<HermitianOperator> site_occupation_operators(const SectorBasis& basis);

}  // namespace adiatrack
