#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "adiatrack/spectral.hpp"

namespace adiatrack {

// Time stepping for the closed-system evolution over [0, tau].
// Scheme (fixed): piecewise-constant midpoint Hamiltonian per step, with the
// exact step unitary exp(-i H(t + h/2) h) taken through the spectral
// decomposition, so every step is exactly unitary.
struct PropagationConfig {
  static constexpr const char* scheme = "midpoint-exponential";

  double dt = 0.0;
  std::vector<double> output_times;

  // Default dt = min(tau, 1)/1000 and a uniform output grid over [0, tau].
  static PropagationConfig defaults(double tau, int output_points = 500);
  static std::vector<double> uniform_grid(double tau, int points);

  void validate(double tau) const;
};

struct TrajectoryMetadata {
  int n_sites = 0;
  double interaction = 0.0;
  double temperature = std::numeric_limits<double>::quiet_NaN();
  double tau = 0.0;
  double dt = 0.0;
};

// States reported exactly at the configured output times.
struct StateTrajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
  TrajectoryMetadata metadata;
};

// Called once per output time with the state at output_times[index]. The
// reference is only valid during the call; copy it to keep it.
using StateObserver = std::function<void(std::size_t index, const DensityMatrix& state)>;

// Evolves rho0 through rho(t_{k+1}) = U_k rho(t_k) U_k^dag with
// U_k = exp(-i H(t_k + h/2) h); the last step before an output time is
// shortened exactly. The observer form streams states without storing the
// whole trajectory (at dim 400 a stored trajectory would not fit in memory).
void propagate_observe(const DensityMatrix& rho0, const HubbardParams& params,
                       const DriveProtocol& drive, const PropagationConfig& config,
                       const StateObserver& observe);

StateTrajectory propagate(const DensityMatrix& rho0, const HubbardParams& params,
                          const DriveProtocol& drive, const PropagationConfig& config);

// Factored route: evolves every initially populated t=0 eigenvector and
// reassembles rho(t) = sum_j p_j |phi_j(t)><phi_j(t)|. Agrees with
// propagate() by linearity of the unitary evolution; kept as an independent
// cross-check and as the cheap path for few populated levels.
void evolve_eigenbasis_observe(const ThermalWeights& weights, const HubbardParams& params,
                               const DriveProtocol& drive, const PropagationConfig& config,
                               const StateObserver& observe);

StateTrajectory evolve_eigenbasis(const ThermalWeights& weights, const HubbardParams& params,
                                  const DriveProtocol& drive, const PropagationConfig& config);

}  // namespace adiatrack
