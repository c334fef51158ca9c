#include "tdnoise/linalg.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tdnoise {

namespace {
constexpr int kMaxTensorDim = 4096;
}

ComplexMatrix kron(const ComplexMatrix& m, const ComplexMatrix& n) {
  ComplexMatrix out(m.rows() * n.rows(), m.cols() * n.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      out.block(i * n.rows(), j * n.cols(), n.rows(), n.cols()) = m(i, j) * n;
  return out;
}

ComplexMatrix tensor_power(const ComplexMatrix& m, int t) {
  if (t < 1) throw std::invalid_argument("tensor_power: t must be >= 1");
  if (m.rows() != m.cols()) throw std::invalid_argument("tensor_power: matrix must be square");
  long dim = m.rows();
  for (int i = 1; i < t; ++i) {
    dim *= m.rows();
    if (dim > kMaxTensorDim)
      throw std::invalid_argument("tensor_power: result dim exceeds " +
                                  std::to_string(kMaxTensorDim));
  }
  ComplexMatrix out = m;
  for (int i = 1; i < t; ++i) out = kron(out, m);
  return out;
}

ComplexMatrix conjugate_tensor_power(const ComplexMatrix& m, const ComplexMatrix& u, int t) {
  if (u.rows() != 2 || u.cols() != 2)
    throw std::invalid_argument("conjugate_tensor_power: U must be 2x2");
  const long dim = 1L << t;
  if (m.rows() != dim || m.cols() != dim)
    throw std::invalid_argument("conjugate_tensor_power: M must have dim 2^t");
  const ComplexMatrix ut = tensor_power(u, t);
  return ut * m * ut.adjoint();
}

double hermiticity_defect(const ComplexMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

Spectrum hermitian_eig(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("hermitian_eig: matrix must be square");
  if (hermiticity_defect(m) > 1e-10)
    throw std::invalid_argument("hermitian_eig: input not Hermitian within 1e-10");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("hermitian_eig: eigensolver failed to converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

std::pair<ComplexMatrix, int> support_projector(const ComplexMatrix& m, double rel_cutoff) {
  if (rel_cutoff <= 0.0 || rel_cutoff >= 1.0)
    throw std::invalid_argument("support_projector: rel_cutoff must be in (0, 1)");
  const Spectrum spec = hermitian_eig(m);
  const Eigen::Index dim = m.rows();
  const double lambda_max = spec.eigenvalues(dim - 1);
  if (lambda_max <= 0.0) return {ComplexMatrix::Zero(dim, dim), 0};
  const double threshold = rel_cutoff * lambda_max;
  Eigen::Index first = dim;
  while (first > 0 && spec.eigenvalues(first - 1) > threshold) --first;
  const Eigen::Index rank = dim - first;
  const auto basis = spec.eigenvectors.rightCols(rank);
  return {basis * basis.adjoint(), static_cast<int>(rank)};
}

}  // namespace tdnoise
