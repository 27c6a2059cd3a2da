#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "adiatrack/eigensolve.hpp"
#include "adiatrack/spectral.hpp"
#include "testutil.hpp"

using namespace adiatrack;

namespace {

// Analytic half-filled dimer spectrum at v = 0: {0, U, (U +- sqrt(U^2+16J^2))/2}.
Eigen::Vector4d dimer_spectrum(double u) {
  const double root = std::sqrt(u * u + 16.0);
  Eigen::Vector4d e{0.0, u, (u - root) / 2.0, (u + root) / 2.0};
  std::sort(e.begin(), e.end());
  return e;
}

SpectrumSnapshot dimer_snapshot(double u) {
  const HubbardParams params = HubbardParams::half_filled(2, u);
  const SectorBasis basis(2, 1, 1);
  const DriveProtocol off{0.0, 0.0, 1.0};
  return diagonalize(build_hamiltonian(params, basis, off, 0.0), 0.0);
}

SpectrumSnapshot synthetic_snapshot(Eigen::VectorXd eigenvalues) {
  const long n = eigenvalues.size();
  return SpectrumSnapshot{0.0, std::move(eigenvalues), Eigen::MatrixXcd::Identity(n, n)};
}

}  // namespace

TEST_CASE("identity operator diagonalizes trivially") {
  const auto h = HermitianOperator::from_matrix(Matrix::Identity(5, 5));
  const SpectrumSnapshot snap = diagonalize(h, 0.0);
  for (long i = 0; i < 5; ++i) CHECK(snap.eigenvalues[i] == doctest::Approx(1.0));
  CHECK((snap.eigenvectors.adjoint() * snap.eigenvectors - Matrix::Identity(5, 5)).norm() <=
        1e-10);
}

TEST_CASE("dimer spectrum matches the analytic solution") {
  for (double u : {0.0, 5.0, 10.0}) {
    const SpectrumSnapshot snap = dimer_snapshot(u);
    const Eigen::Vector4d expected = dimer_spectrum(u);
    for (int i = 0; i < 4; ++i) {
      CHECK(std::abs(snap.eigenvalues[i] - expected[i]) <= 1e-10);
    }
  }
  CHECK(dimer_snapshot(0.0).eigenvalues[0] == doctest::Approx(-2.0));
  CHECK(dimer_snapshot(5.0).eigenvalues[0] ==
        doctest::Approx((5.0 - std::sqrt(41.0)) / 2.0).epsilon(1e-10));
}

TEST_CASE("eigenpairs satisfy residual and orthonormality bounds") {
  std::mt19937_64 rng(11);
  const Eigen::MatrixXcd h = testutil::random_hermitian(50, rng);
  const SpectrumSnapshot snap = diagonalize(HermitianOperator::from_matrix(h), 0.0);
  for (long k = 0; k < 50; ++k) {
    const double residual =
        (h * snap.eigenvectors.col(k) - snap.eigenvalues[k] * snap.eigenvectors.col(k)).norm();
    CHECK(residual <= 1e-9);
    if (k > 0) CHECK(snap.eigenvalues[k] >= snap.eigenvalues[k - 1]);
  }
  CHECK((snap.eigenvectors.adjoint() * snap.eigenvectors - Matrix::Identity(50, 50)).norm() <=
        1e-10);
}

TEST_CASE("thermal weights follow Boltzmann ratios") {
  Eigen::VectorXd levels(2);
  levels << 0.0, 1.0;
  const ThermalWeights w = thermal_weights(synthetic_snapshot(levels), 1.0);
  CHECK(w.weights[1] / w.weights[0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(w.weights.sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("zero temperature selects the ground group") {
  SUBCASE("non-degenerate") {
    const ThermalWeights w = thermal_weights(dimer_snapshot(5.0), 0.0);
    CHECK(w.weights[0] == doctest::Approx(1.0));
    CHECK(w.weights.tail(3).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("degenerate ground subspace gets an equal mixture") {
    Eigen::VectorXd levels(3);
    levels << 0.0, 0.0, 1.0;
    const ThermalWeights w = thermal_weights(synthetic_snapshot(levels), 0.0);
    CHECK(w.weights[0] == doctest::Approx(0.5));
    CHECK(w.weights[1] == doctest::Approx(0.5));
    CHECK(w.weights[2] == 0.0);
  }
}

TEST_CASE("negative temperature is a domain error") {
  CHECK_THROWS_AS(thermal_weights(dimer_snapshot(0.0), -0.1), std::domain_error);
}

TEST_CASE("thermal state limits") {
  const SpectrumSnapshot snap = dimer_snapshot(5.0);
  SUBCASE("T -> 0 gives the ground projector") {
    const DensityMatrix rho = thermal_state(snap, 0.0);
    const Eigen::MatrixXcd proj =
        snap.eigenvectors.col(0) * snap.eigenvectors.col(0).adjoint();
    CHECK((rho.entries - proj).norm() <= 1e-12);
  }
  SUBCASE("T -> infinity approaches the maximally mixed state") {
    const DensityMatrix rho = thermal_state(snap, 1e9);
    CHECK((rho.entries - Matrix::Identity(4, 4) / 4.0).norm() <= 1e-8);
  }
  SUBCASE("states are valid at the studied temperatures") {
    for (double kbt : {0.0, 0.2, 2.5}) {
      const DensityMatrix rho = thermal_state(snap, kbt);
      CHECK(std::abs(rho.entries.trace().real() - 1.0) <= 1e-12);
      CHECK((rho.entries - rho.entries.adjoint()).norm() <= 1e-12);
      CHECK(rho.min_eigenvalue() >= -1e-10);
    }
  }
}

TEST_CASE("adiabatic reference carries frozen populations") {
  const HubbardParams params = HubbardParams::half_filled(2, 5.0);
  const SectorBasis basis(2, 1, 1);
  const DriveProtocol drive{0.5, 4.5, 1.0};
  const SpectrumSnapshot snap0 = diagonalize(build_hamiltonian(params, basis, drive, 0.0), 0.0);
  const ThermalWeights weights = thermal_weights(snap0, 2.5);

  SUBCASE("equals the thermal state at t = 0") {
    CHECK((adiabatic_reference(snap0, weights).entries - thermal_state(snap0, 2.5).entries)
              .norm() <= 1e-14);
  }
  SUBCASE("its spectrum is exactly the weight list at any t") {
    const SpectrumSnapshot snap =
        diagonalize(build_hamiltonian(params, basis, drive, 0.7), 0.7);
    const DensityMatrix rho = adiabatic_reference(snap, weights);
    Eigen::VectorXd expected = weights.weights;
    std::sort(expected.begin(), expected.end());
    const Eigen::VectorXd actual = hermitian_eigenvalues(rho.entries);
    CHECK((actual - expected).cwiseAbs().maxCoeff() <= 1e-10);
  }
  SUBCASE("reduces to the instantaneous ground projector at T = 0") {
    const ThermalWeights cold = thermal_weights(snap0, 0.0);
    const SpectrumSnapshot snap =
        diagonalize(build_hamiltonian(params, basis, drive, 0.7), 0.7);
    const DensityMatrix rho = adiabatic_reference(snap, cold);
    const Eigen::MatrixXcd proj = snap.eigenvectors.col(0) * snap.eigenvectors.col(0).adjoint();
    CHECK((rho.entries - proj).norm() <= 1e-12);
  }
  SUBCASE("dimension mismatch is a domain error") {
    const SpectrumSnapshot wrong = dimer_snapshot(0.0);
    ThermalWeights tiny{0.0, Eigen::VectorXd::Ones(2)};
    CHECK_THROWS_AS(adiabatic_reference(wrong, tiny), std::domain_error);
  }
}

TEST_CASE("degenerate level grouping") {
  auto vec = [](std::initializer_list<double> xs) {
    Eigen::VectorXd v(static_cast<long>(xs.size()));
    long i = 0;
    for (double x : xs) v[i++] = x;
    return v;
  };

  SUBCASE("exact degeneracy") {
    const auto groups = degenerate_groups(vec({0.0, 0.0, 1.0}), 1e-8);
    REQUIRE(groups.size() == 2);
    CHECK(groups[0] == std::vector<int>{0, 1});
    CHECK(groups[1] == std::vector<int>{2});
  }
  SUBCASE("well separated levels stay singletons") {
    const auto groups = degenerate_groups(vec({0.0, 0.5, 1.5}), 1e-8);
    CHECK(groups.size() == 3);
  }
  SUBCASE("gaps chain transitively") {
    const auto groups = degenerate_groups(vec({0.0, 5e-9, 1.5e-8, 1.0}), 1e-8);
    REQUIRE(groups.size() == 2);
    CHECK(groups[0] == std::vector<int>{0, 1, 2});
    CHECK(groups[1] == std::vector<int>{3});
  }
  SUBCASE("non-ascending input is rejected") {
    CHECK_THROWS_AS(degenerate_groups(vec({1.0, 0.0}), 1e-8), std::domain_error);
  }
  SUBCASE("default tolerance scales with the spectrum") {
    CHECK(default_degeneracy_tol(vec({-0.5, 0.5})) == doctest::Approx(1e-8));
    CHECK(default_degeneracy_tol(vec({-300.0, 5.0})) == doctest::Approx(3e-6));
  }
}

TEST_CASE("site densities") {
  const SectorBasis basis(2, 1, 1);
  const auto n_ops = site_occupation_operators(basis);

  SUBCASE("maximally mixed half filling is homogeneous") {
    const DensityMatrix rho = DensityMatrix::from_matrix(Matrix::Identity(4, 4) / 4.0);
    const DensityProfile profile = site_density(rho, n_ops);
    CHECK(profile.occupations[0] == doctest::Approx(1.0));
    CHECK(profile.occupations[1] == doctest::Approx(1.0));
    CHECK(profile.n_particles == 2);
  }
  SUBCASE("both electrons on site 1") {
    const long k = basis.index_of(0b01, 0b01);
    const DensityMatrix rho = testutil::basis_state(4, static_cast<int>(k));
    const DensityProfile profile = site_density(rho, n_ops);
    CHECK(profile.occupations[0] == doctest::Approx(2.0));
    CHECK(profile.occupations[1] == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("occupations sum to the particle number") {
    std::mt19937_64 rng(3);
    const SectorBasis big(4, 2, 2);
    const auto ops = site_occupation_operators(big);
    for (int trial = 0; trial < 5; ++trial) {
      const DensityMatrix rho = testutil::random_density(36, 6, rng);
      const DensityProfile profile = site_density(rho, ops);
      CHECK(std::abs(profile.occupations.sum() - 4.0) <= 1e-10);
      CHECK(profile.n_particles == 4);
    }
  }
  SUBCASE("density is linear in the state") {
    std::mt19937_64 rng(4);
    const DensityMatrix rho1 = testutil::random_density(4, 2, rng);
    const DensityMatrix rho2 = testutil::random_density(4, 4, rng);
    const double alpha = 0.3;
    const DensityMatrix mix =
        DensityMatrix::from_matrix(alpha * rho1.entries + (1.0 - alpha) * rho2.entries);
    const Eigen::VectorXd lhs = site_density(mix, n_ops).occupations;
    const Eigen::VectorXd rhs = alpha * site_density(rho1, n_ops).occupations +
                                (1.0 - alpha) * site_density(rho2, n_ops).occupations;
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12);
  }
  SUBCASE("dimension mismatch is a domain error") {
    const DensityMatrix rho = DensityMatrix::from_matrix(Matrix::Identity(2, 2) / 2.0);
    CHECK_THROWS_AS(site_density(rho, n_ops), std::domain_error);
  }
}

TEST_CASE("DensityMatrix validation") {
  Matrix bad(2, 2);
  bad << 1.0, 0.5, -0.5, 0.0;
  CHECK_THROWS_AS(DensityMatrix::from_matrix(bad), std::domain_error);
  CHECK_THROWS_AS(DensityMatrix::from_matrix(Matrix::Identity(2, 2)), std::domain_error);
  CHECK_NOTHROW(DensityMatrix::from_matrix(Matrix::Identity(2, 2) / 2.0));
}
