#pragma once

#include <Eigen/Dense>

namespace adiatrack {

// Full eigensystem of a dense Hermitian matrix: ascending eigenvalues,
// orthonormal eigenvector columns. Matrices with negligible imaginary part
// are routed to the real-symmetric solver; `real_vectors` is then populated
// as well (the complex `vectors` are always valid when requested).
struct EigenSystem {
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;
  Eigen::MatrixXd real_vectors;
  bool real_path = false;
};

EigenSystem hermitian_eigensystem(const Eigen::MatrixXcd& m, bool with_vectors = true);

// Eigenvalues only (ascending); noticeably cheaper than the full system.
Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& m);

// Singular values only, descending.
Eigen::VectorXd singular_values(const Eigen::MatrixXcd& m);

}  // namespace adiatrack
