#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tdnoise/linalg.hpp"

namespace tdnoise {

/// Weighted finite set of 2x2 unitaries {p_i, U_i}.
struct UnitaryEnsemble {
  struct Element {
    double weight;
    Matrix2 unitary;
  };
  std::vector<Element> elements;
  std::string label;
};

/// Throws if weights are not strictly positive summing to 1 within 1e-12,
/// or if any element fails ||U^dag U - I||_F <= 1e-12.
void validate_ensemble(const UnitaryEnsemble& ens);

/// Uniform {I, X, Y, Z} with weights 1/4. Exact unitary 1-design.
UnitaryEnsemble pauli_design();

/// The 24 projective single-qubit Clifford unitaries, generated by closing
/// {H, S} under multiplication with phase canonicalization. Exact 3-design.
UnitaryEnsemble clifford_design();

/// The 120-element binary icosahedral subgroup of SU(2), closed from two
/// golden-ratio quaternion generators. Exact 5-design.
UnitaryEnsemble icosahedral_design();

/// Sum_i p_i U_i^(x)t M (U_i^(x)t)^dagger for M of dim 2^t.
ComplexMatrix design_moment(const UnitaryEnsemble& ens, const ComplexMatrix& m, int t);

/// Moment of the product state sigma^(x)t, evaluated factor-wise:
/// Sum_i p_i (U_i sigma U_i^dagger)^(x)t. Same value as
/// design_moment(ens, tensor_power(sigma, t), t) at a fraction of the cost.
ComplexMatrix design_moment_product(const UnitaryEnsemble& ens, const Matrix2& sigma, int t);

/// Exact Haar average of U^(x)t M (U^(x)t)^dagger over SU(2), computed by
/// Euler-angle quadrature whose node counts make every trigonometric
/// polynomial arising at order t integrate exactly. Supports t <= 6.
/// Independent of any design ensemble.
ComplexMatrix haar_moment_oracle(const ComplexMatrix& m, int t);

/// Largest t <= t_max such that design_moment agrees with haar_moment_oracle
/// within 1e-10 * ||M||_F on 50 fixed-seed random Hermitian matrices of dim
/// 2^t, for every probed t up to the first failure. Returns 0 if t = 1 fails.
int verify_design_order(const UnitaryEnsemble& ens, int t_max);

/// Largest relative deviation ||design - oracle||_F / ||M||_F over the same
/// 50 fixed-seed test matrices at a single order t.
double design_order_deviation(const UnitaryEnsemble& ens, int t);

/// Text format: one element per line, weight followed by the 8 entry
/// components (real/imaginary interleaved, row-major), comma separated.
void save_ensemble(const UnitaryEnsemble& ens, const std::filesystem::path& path);
UnitaryEnsemble load_ensemble(const std::filesystem::path& path);

}  // namespace tdnoise
