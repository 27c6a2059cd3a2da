#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "adiatrack/metrics.hpp"
#include "adiatrack/model.hpp"
#include "testutil.hpp"

using namespace adiatrack;
using testutil::basis_state;
using testutil::diagonal_state;
using testutil::random_density;
using testutil::random_unitary;

namespace {

Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}

DensityProfile profile(std::initializer_list<double> occ, int particles) {
  Eigen::VectorXd v(static_cast<long>(occ.size()));
  long i = 0;
  for (double x : occ) v[i++] = x;
  return DensityProfile{std::move(v), particles};
}

}  // namespace

TEST_CASE("fidelity identities") {
  std::mt19937_64 rng(21);
  const DensityMatrix rho = random_density(6, 3, rng);
  CHECK(fidelity(rho, rho) == doctest::Approx(1.0).epsilon(1e-12));

  const DensityMatrix e0 = basis_state(2, 0);
  const DensityMatrix e1 = basis_state(2, 1);
  CHECK(fidelity(e0, e1) == doctest::Approx(0.0).epsilon(1e-12));

  const DensityMatrix mixed = diagonal_state(vec2(0.5, 0.5));
  CHECK(fidelity(e0, mixed) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("fidelity matches the commuting-state formula") {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    Eigen::VectorXd p(6), q(6);
    for (int i = 0; i < 6; ++i) {
      p[i] = u(rng);
      q[i] = u(rng);
    }
    p /= p.sum();
    q /= q.sum();
    double root_sum = 0.0;
    for (int i = 0; i < 6; ++i) root_sum += std::sqrt(p[i] * q[i]);
    const double expected = root_sum * root_sum;
    CHECK(fidelity(diagonal_state(p), diagonal_state(q)) ==
          doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("fidelity is symmetric under swapping arguments") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const DensityMatrix a = random_density(5, trial % 4 + 1, rng);
    const DensityMatrix b = random_density(5, 5 - trial % 3, rng);
    CHECK(std::abs(fidelity(a, b) - fidelity(b, a)) <= 1e-10);
  }
}

TEST_CASE("bures distance values") {
  const DensityMatrix e0 = basis_state(2, 0);
  const DensityMatrix e1 = basis_state(2, 1);
  const DensityMatrix mixed = diagonal_state(vec2(0.5, 0.5));

  CHECK(bures_distance(e0, e0).value == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::abs(bures_distance(e0, e1).value - std::sqrt(2.0)) <= 1e-10);
  CHECK(std::abs(bures_distance(e0, mixed).value - std::sqrt(2.0 - std::sqrt(2.0))) <= 1e-10);
  CHECK(bures_distance(e0, mixed).max == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("trace distance values") {
  const DensityMatrix e0 = basis_state(2, 0);
  const DensityMatrix e1 = basis_state(2, 1);
  const DensityMatrix mixed = diagonal_state(vec2(0.5, 0.5));

  CHECK(trace_distance(e0, e0).value == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::abs(trace_distance(e0, e1).value - 1.0) <= 1e-10);
  CHECK(trace_distance(e0, mixed).value == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("density distance values") {
  CHECK(density_distance(profile({1.0, 1.0}, 2), profile({1.0, 1.0}, 2)).value == 0.0);
  CHECK(density_distance(profile({2.0, 0.0}, 2), profile({0.0, 2.0}, 2)).value ==
        doctest::Approx(2.0));
  CHECK(density_distance(profile({1.0, 1.0}, 2), profile({1.5, 0.5}, 2)).value ==
        doctest::Approx(0.5));
  CHECK_THROWS_AS(density_distance(profile({1.0, 1.0}, 2), profile({1.5, 0.5, 1.0}, 3)),
                  std::domain_error);
  CHECK_THROWS_AS(density_distance(profile({1.0, 1.0}, 2), profile({1.5, 1.5}, 3)),
                  std::domain_error);
}

TEST_CASE("metric axioms hold on random states") {
  std::mt19937_64 rng(24);
  const SectorBasis basis(4, 2, 2);
  const auto n_ops = site_occupation_operators(basis);

  for (int trial = 0; trial < 60; ++trial) {
    const DensityMatrix x = random_density(36, trial % 5 + 1, rng);
    const DensityMatrix y = random_density(36, 36, rng);
    const DensityMatrix z = random_density(36, 8, rng);

    const double bxy = bures_distance(x, y).value;
    const double byx = bures_distance(y, x).value;
    const double txy = trace_distance(x, y).value;

    // positivity and identity of indiscernibles
    CHECK(bxy >= 0.0);
    CHECK(txy >= 0.0);
    CHECK(bures_distance(x, x).value <= 1e-9);
    CHECK(trace_distance(x, x).value <= 1e-12);
    CHECK(bxy > 1e-9);  // distinct random states never coincide
    CHECK(txy > 1e-9);

    // symmetry
    CHECK(std::abs(bxy - byx) <= 1e-10);
    CHECK(std::abs(txy - trace_distance(y, x).value) <= 1e-10);

    // triangle inequality
    CHECK(bures_distance(x, z).value <=
          bxy + bures_distance(y, z).value + 1e-9);
    CHECK(trace_distance(x, z).value <= txy + trace_distance(y, z).value + 1e-9);

    const DensityProfile nx = site_density(x, n_ops);
    const DensityProfile ny = site_density(y, n_ops);
    const DensityProfile nz = site_density(z, n_ops);
    CHECK(density_distance(nx, nx).value <= 1e-12);
    CHECK(std::abs(density_distance(nx, ny).value - density_distance(ny, nx).value) <= 1e-10);
    CHECK(density_distance(nx, nz).value <=
          density_distance(nx, ny).value + density_distance(ny, nz).value + 1e-9);
  }
}

TEST_CASE("bures and trace distances obey the fidelity bounds") {
  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 60; ++trial) {
    const DensityMatrix x = random_density(8, trial % 7 + 1, rng);
    const DensityMatrix y = random_density(8, 8 - trial % 5, rng);
    const double db = bures_distance(x, y).value;
    const double dt = trace_distance(x, y).value;
    const double root_f = 1.0 - db * db / 2.0;
    const double f = root_f * root_f;
    CHECK(1.0 - root_f <= dt + 1e-12);
    CHECK(dt <= std::sqrt(1.0 - f) + 1e-9);
  }
}

TEST_CASE("state metrics are unitarily invariant") {
  std::mt19937_64 rng(26);
  for (int trial = 0; trial < 10; ++trial) {
    const DensityMatrix x = random_density(6, 3, rng);
    const DensityMatrix y = random_density(6, 6, rng);
    const Eigen::MatrixXcd u = random_unitary(6, rng);
    const DensityMatrix xu = DensityMatrix::from_matrix(u * x.entries * u.adjoint(), 1e-10);
    const DensityMatrix yu = DensityMatrix::from_matrix(u * y.entries * u.adjoint(), 1e-10);
    CHECK(std::abs(bures_distance(xu, yu).value - bures_distance(x, y).value) <= 1e-10);
    CHECK(std::abs(trace_distance(xu, yu).value - trace_distance(x, y).value) <= 1e-10);
  }
}

TEST_CASE("metric errors") {
  std::mt19937_64 rng(27);
  const DensityMatrix small = random_density(2, 2, rng);
  const DensityMatrix big = random_density(4, 2, rng);
  CHECK_THROWS_AS(fidelity(small, big), std::domain_error);
  CHECK_THROWS_AS(bures_distance(small, big), std::domain_error);
  CHECK_THROWS_AS(trace_distance(small, big), std::domain_error);

  // Hermitian and unit trace but indefinite: fidelity must flag it.
  Matrix indefinite(2, 2);
  indefinite << 1.1, 0.0, 0.0, -0.1;
  const DensityMatrix invalid = DensityMatrix::from_matrix(indefinite);
  CHECK_THROWS_AS(fidelity(invalid, small), std::runtime_error);
}
