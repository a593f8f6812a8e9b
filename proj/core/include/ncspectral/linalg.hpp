#pragma once

#include <Eigen/Dense>

namespace ncspectral::linalg {

/// Eigenvalues (ascending) of a hermitian matrix; only the lower triangle is read.
Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& h);

struct EigenSystem {
  Eigen::VectorXd values;    // ascending
  Eigen::MatrixXcd vectors;  // columns are orthonormal eigenvectors
};

EigenSystem hermitian_eigensystem(const Eigen::MatrixXcd& h);

/// max |h - h^*| entrywise.
double hermiticity_defect(const Eigen::MatrixXcd& h);

}  // namespace ncspectral::linalg
