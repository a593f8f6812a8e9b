#include "ncspectral/linalg.hpp"

#include <complex>
#include <string>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "ncspectral/error.hpp"

namespace ncspectral::linalg {

namespace {

Eigen::VectorXd run_zheevd(Eigen::MatrixXcd& a, char jobz) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "eigensolver needs a square matrix");
  }
  const auto n = static_cast<lapack_int>(a.rows());
  Eigen::VectorXd w(a.rows());
  if (n == 0) return w;
  const lapack_int info =
      LAPACKE_zheevd(LAPACK_COL_MAJOR, jobz, 'L', n, a.data(), n, w.data());
  if (info != 0) {
    throw Error(ErrorKind::Precondition, "zheevd failed with info = " + std::to_string(info));
  }
  return w;
}

}  // namespace

Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& h) {
  Eigen::MatrixXcd a = h;
  return run_zheevd(a, 'N');
}

EigenSystem hermitian_eigensystem(const Eigen::MatrixXcd& h) {
  EigenSystem es;
  es.vectors = h;
  es.values = run_zheevd(es.vectors, 'V');
  return es;
}

double hermiticity_defect(const Eigen::MatrixXcd& h) {
  if (h.size() == 0) return 0.0;
  return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace ncspectral::linalg
