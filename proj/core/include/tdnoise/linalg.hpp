#pragma once

#include <complex>
#include <utility>

#include <Eigen/Dense>

namespace tdnoise {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using Matrix2 = Eigen::Matrix2cd;

/// Eigendecomposition of a Hermitian matrix. Eigenvalues are real and
/// sorted ascending; eigenvectors form the matching orthonormal columns.
struct Spectrum {
  Eigen::VectorXd eigenvalues;
  ComplexMatrix eigenvectors;
};

/// Kronecker product with the row-major index convention
/// (M (x) N)[i*dimN + k][j*dimN + l] = M[i][j] * N[k][l].
ComplexMatrix kron(const ComplexMatrix& m, const ComplexMatrix& n);

/// M^(x)t for t >= 1. Rejects t = 0 and results with dim > 4096.
ComplexMatrix tensor_power(const ComplexMatrix& m, int t);

/// U^(x)t * M * (U^(x)t)^dagger for a 2x2 unitary U and M of dim 2^t.
ComplexMatrix conjugate_tensor_power(const ComplexMatrix& m, const ComplexMatrix& u, int t);

/// Spectral decomposition; input must be Hermitian within 1e-10 (max entry).
Spectrum hermitian_eig(const ComplexMatrix& m);

/// Projector onto the span of eigenvectors with eigenvalue > rel_cutoff * lambda_max,
/// together with its rank. A non-positive spectrum yields rank 0.
std::pair<ComplexMatrix, int> support_projector(const ComplexMatrix& m, double rel_cutoff);

/// max_ij |M[i][j] - conj(M[j][i])|
double hermiticity_defect(const ComplexMatrix& m);

}  // namespace tdnoise
