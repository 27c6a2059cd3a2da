#pragma once

#include "adiatrack/spectral.hpp"

namespace adiatrack {

enum class MetricKind { bures, trace, density };

// A distance value together with the metric's attainable maximum
// (sqrt(2) for Bures, 1 for trace, 2 for the density metric).
struct MetricValue {
  double value = 0.0;
  MetricKind kind = MetricKind::bures;
  double max = 0.0;

  static MetricValue checked(double value, MetricKind kind);
};

double metric_max(MetricKind kind);

// Uhlmann fidelity F = (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2 in [0, 1].
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

// D_B = sqrt(2 (1 - sqrt(F))).
MetricValue bures_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

// D_T = 1/2 sum |eigenvalues(rho - sigma)|.
MetricValue trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

// D_n = (1/N) sum_i |n1_i - n2_i| over site occupations, N the shared
// particle number.
MetricValue density_distance(const DensityProfile& n1, const DensityProfile& n2);

}  // namespace adiatrack
