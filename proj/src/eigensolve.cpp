#include "adiatrack/eigensolve.hpp"

#include <stdexcept>
#include <string>

#ifdef ADIATRACK_HAVE_LAPACKE
#include <lapacke.h>
#endif

namespace adiatrack {

namespace {

bool is_effectively_real(const Eigen::MatrixXcd& m) {
  const double scale = std::max(1.0, m.real().cwiseAbs().maxCoeff());
  return m.imag().cwiseAbs().maxCoeff() <= 1e-14 * scale;
}

[[noreturn]] void fail(const char* routine, int info) {
  throw std::runtime_error(std::string("eigensolver ") + routine +
                           " failed to converge (info=" + std::to_string(info) + ")");
}

#ifdef ADIATRACK_HAVE_LAPACKE

EigenSystem solve_real(const Eigen::MatrixXcd& m, bool with_vectors) {
  EigenSystem out;
  out.real_path = true;
  const int n = static_cast<int>(m.rows());
  out.real_vectors = m.real();
  out.values.resize(n);
  const int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, with_vectors ? 'V' : 'N', 'L', n,
                                  out.real_vectors.data(), n, out.values.data());
  if (info != 0) fail("dsyevd", info);
  if (with_vectors) {
    out.vectors = out.real_vectors.cast<std::complex<double>>();
  } else {
    out.real_vectors.resize(0, 0);
  }
  return out;
}

EigenSystem solve_complex(const Eigen::MatrixXcd& m, bool with_vectors) {
  EigenSystem out;
  const int n = static_cast<int>(m.rows());
  out.vectors = m;
  out.values.resize(n);
  const int info =
      LAPACKE_zheevd(LAPACK_COL_MAJOR, with_vectors ? 'V' : 'N', 'L', n,
                     reinterpret_cast<lapack_complex_double*>(out.vectors.data()), n,
                     out.values.data());
  if (info != 0) fail("zheevd", info);
  if (!with_vectors) out.vectors.resize(0, 0);
  return out;
}

#else

EigenSystem solve_real(const Eigen::MatrixXcd& m, bool with_vectors) {
  EigenSystem out;
  out.real_path = true;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.compute(m.real(), with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) fail("SelfAdjointEigenSolver<real>", es.info());
  out.values = es.eigenvalues();
  if (with_vectors) {
    out.real_vectors = es.eigenvectors();
    out.vectors = out.real_vectors.cast<std::complex<double>>();
  }
  return out;
}

EigenSystem solve_complex(const Eigen::MatrixXcd& m, bool with_vectors) {
  EigenSystem out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es;
  es.compute(m, with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) fail("SelfAdjointEigenSolver<complex>", es.info());
  out.values = es.eigenvalues();
  if (with_vectors) out.vectors = es.eigenvectors();
  return out;
}

#endif

}  // namespace

EigenSystem hermitian_eigensystem(const Eigen::MatrixXcd& m, bool with_vectors) {
  if (m.rows() != m.cols()) throw std::domain_error("hermitian_eigensystem: matrix not square");
  if (m.rows() == 0) throw std::domain_error("hermitian_eigensystem: empty matrix");
  return is_effectively_real(m) ? solve_real(m, with_vectors) : solve_complex(m, with_vectors);
}

Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& m) {
  return hermitian_eigensystem(m, false).values;
}

Eigen::VectorXd singular_values(const Eigen::MatrixXcd& m) {
  if (m.rows() == 0 || m.cols() == 0) throw std::domain_error("singular_values: empty matrix");
#ifdef ADIATRACK_HAVE_LAPACKE
  Eigen::MatrixXcd work = m;
  const int rows = static_cast<int>(m.rows());
  const int cols = static_cast<int>(m.cols());
  Eigen::VectorXd s(std::min(rows, cols));
  lapack_complex_double dummy;  // 'N' never reads u/vt, but LAPACKE checks the pointers
  const int info =
      LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', rows, cols,
                     reinterpret_cast<lapack_complex_double*>(work.data()), rows, s.data(),
                     &dummy, 1, &dummy, 1);
  if (info != 0) fail("zgesdd", info);
  return s;
#else
  return Eigen::BDCSVD<Eigen::MatrixXcd>(m).singularValues();
#endif
}

}  // namespace adiatrack
