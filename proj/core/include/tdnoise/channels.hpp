#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tdnoise/linalg.hpp"

namespace tdnoise {

enum class ChannelKind {
  BitFlip,
  PhaseFlip,
  BitPhaseFlip,
  PhaseDamping,
  AmplitudeDamping,
  Depolarising,
};

/// Single-qubit noise channel in Kraus form, rho -> Sum_k E_k rho E_k^dagger.
struct KrausChannel {
  ChannelKind kind;
  double param;  // flip probability p or damping strength lambda, in [0, 1]
  std::vector<Matrix2> kraus;
};

/// Builds the Kraus set for the requested kind. Operators whose coefficient
/// vanishes at the parameter endpoints are dropped, so param = 0 yields the
/// identity channel as a single Kraus operator.
KrausChannel make_channel(ChannelKind kind, double param);

/// Sum_k E_k rho E_k^dagger. Validates that rho is a density matrix
/// (Hermitian, unit trace, PSD within 1e-10).
ComplexMatrix apply_channel(const KrausChannel& ch, const ComplexMatrix& rho);

/// As apply_channel on a 2x2 state, without the density-matrix validation.
Matrix2 apply_channel_2x2(const KrausChannel& ch, const Matrix2& rho);

/// Flip probability p = (1 + sqrt(1 - lambda)) / 2 equivalent to a phase
/// damping of strength lambda.
double damping_to_flip_prob(double lambda);

/// lambda = 1 - exp(-elapsed_time / time_constant), the damping strength
/// accumulated by exponential decay.
double decay_to_lambda(double elapsed_time, double time_constant);

/// CLI names: bitflip, phaseflip, bitphaseflip, phasedamp, ampdamp, depolarising.
std::optional<ChannelKind> channel_kind_from_string(std::string_view name);
std::string to_string(ChannelKind kind);

}  // namespace tdnoise
