#include <cmath>

#include "doctest.h"
#include "tdnoise/linalg.hpp"

using namespace tdnoise;

namespace {

ComplexMatrix pauli_x() { return (Matrix2() << 0, 1, 1, 0).finished(); }
ComplexMatrix pauli_z() { return (Matrix2() << 1, 0, 0, -1).finished(); }

ComplexMatrix sample_hermitian(long dim, unsigned seed) {
  ComplexMatrix r(dim, dim);
  for (long i = 0; i < dim; ++i)
    for (long j = 0; j < dim; ++j) {
      seed = seed * 1664525u + 1013904223u;
      const double re = static_cast<double>(seed >> 8) / double(1u << 24) - 0.5;
      seed = seed * 1664525u + 1013904223u;
      const double im = static_cast<double>(seed >> 8) / double(1u << 24) - 0.5;
      r(i, j) = Complex(re, im);
    }
  return r + ComplexMatrix(r.adjoint());
}

}  // namespace

TEST_SUITE("linalg") {

TEST_CASE("kron follows the row-major index convention") {
  ComplexMatrix m(2, 3), n(2, 2);
  m << 1, 2, 3, 4, 5, 6;
  n << Complex(0, 1), 2, 3, Complex(4, -1);
  const ComplexMatrix k = kron(m, n);
  REQUIRE(k.rows() == 4);
  REQUIRE(k.cols() == 6);
  for (long i = 0; i < 2; ++i)
    for (long j = 0; j < 3; ++j)
      for (long a = 0; a < 2; ++a)
        for (long b = 0; b < 2; ++b)
          CHECK(k(i * 2 + a, j * 2 + b) == m(i, j) * n(a, b));
}

TEST_CASE("kron of X and Z places sign blocks off the diagonal") {
  const ComplexMatrix k = kron(pauli_x(), pauli_z());
  ComplexMatrix expect(4, 4);
  expect << 0, 0, 1, 0, 0, 0, 0, -1, 1, 0, 0, 0, 0, -1, 0, 0;
  CHECK((k - expect).norm() == doctest::Approx(0.0));
}

TEST_CASE("tensor_power") {
  const ComplexMatrix x = pauli_x();
  CHECK((tensor_power(x, 1) - x).norm() == 0.0);
  const ComplexMatrix x3 = tensor_power(x, 3);
  CHECK(x3.rows() == 8);
  CHECK((x3 - kron(x, kron(x, x))).norm() == 0.0);
  CHECK_THROWS_AS(tensor_power(x, 0), std::invalid_argument);
  // 2^13 = 8192 exceeds the dimension guard.
  CHECK_THROWS_AS(tensor_power(x, 13), std::invalid_argument);
  CHECK(tensor_power(x, 12).rows() == 4096);
}

TEST_CASE("conjugate_tensor_power matches the expanded product") {
  const ComplexMatrix u =
      (Matrix2() << Complex(0.6, 0.0), Complex(0.0, 0.8), Complex(0.0, 0.8), Complex(0.6, 0.0))
          .finished();
  REQUIRE((u.adjoint() * u - Matrix2::Identity()).norm() < 1e-14);
  const ComplexMatrix m = sample_hermitian(8, 7u);
  const ComplexMatrix u3 = tensor_power(u, 3);
  CHECK((conjugate_tensor_power(m, u, 3) - u3 * m * u3.adjoint()).norm() < 1e-12);
}

TEST_CASE("hermitian_eig sorts ascending and reconstructs") {
  const ComplexMatrix m = sample_hermitian(6, 21u);
  const Spectrum s = hermitian_eig(m);
  for (long i = 1; i < 6; ++i) CHECK(s.eigenvalues(i) >= s.eigenvalues(i - 1));
  const ComplexMatrix rebuilt =
      s.eigenvectors * s.eigenvalues.asDiagonal().toDenseMatrix().cast<Complex>() *
      s.eigenvectors.adjoint();
  CHECK((rebuilt - m).norm() < 1e-12);
  CHECK((s.eigenvectors.adjoint() * s.eigenvectors - ComplexMatrix::Identity(6, 6)).norm() <
        1e-12);

  ComplexMatrix bad(2, 2);
  bad << 0, 1, 0, 0;
  CHECK_THROWS_AS(hermitian_eig(bad), std::invalid_argument);
}

TEST_CASE("support_projector ranks") {
  ComplexMatrix d = ComplexMatrix::Zero(3, 3);
  d(0, 0) = 1.0;
  auto [p1, r1] = support_projector(d, 1e-10);
  CHECK(r1 == 1);
  CHECK((p1 - d).norm() < 1e-14);

  auto [pid, rid] = support_projector(ComplexMatrix::Identity(4, 4), 1e-10);
  CHECK(rid == 4);
  CHECK((pid - ComplexMatrix::Identity(4, 4)).norm() < 1e-12);

  auto [pz, rz] = support_projector(ComplexMatrix::Zero(3, 3), 1e-10);
  CHECK(rz == 0);
  CHECK(pz.norm() == 0.0);

  auto [pn, rn] = support_projector(-ComplexMatrix::Identity(2, 2), 1e-10);
  CHECK(rn == 0);
  CHECK(pn.norm() == 0.0);

  // Relative cutoff: eigenvalue 1e-8 survives next to 1 only if the cutoff
  // is below 1e-8.
  ComplexMatrix near = ComplexMatrix::Zero(2, 2);
  near(0, 0) = 1.0;
  near(1, 1) = 1e-8;
  CHECK(support_projector(near, 1e-10).second == 2);
  CHECK(support_projector(near, 1e-6).second == 1);
}

TEST_CASE("hermiticity_defect") {
  CHECK(hermiticity_defect(sample_hermitian(4, 3u)) == 0.0);
  ComplexMatrix m(2, 2);
  m << 1, Complex(0, 1), Complex(0, 1), 1;
  CHECK(hermiticity_defect(m) == doctest::Approx(2.0));
}

}  // TEST_SUITE
