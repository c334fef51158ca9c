#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "tdnoise/bloch.hpp"
#include "tdnoise/channels.hpp"
#include "tdnoise/designs.hpp"
#include "tdnoise/linalg.hpp"

namespace tdnoise {

/// Noise placement relative to the design unitary: applied to the state
/// before the unitary, or to the rotated state after it.
enum class NoiseModel { Before, After };

enum class EpsilonModeKind { Strict, SupportProjected };

/// How a singular exact moment is handled. Strict refuses to compare outside
/// the support; SupportProjected restricts the inequality to the support and
/// reports the leakage as kernel_residual.
struct EpsilonMode {
  EpsilonModeKind kind = EpsilonModeKind::Strict;
  double rank_cutoff = 1e-10;
  double kernel_residual_tol = 1e-8;

  static EpsilonMode strict() { return {EpsilonModeKind::Strict, 1e-10, 1e-8}; }
  static EpsilonMode support_projected() { return {EpsilonModeKind::SupportProjected, 1e-10, 1e-8}; }
};

struct EpsilonResult {
  double epsilon = 0.0;  // infinite when infeasible
  bool feasible = true;
  double kernel_residual = 0.0;
  std::optional<BlochPoint> argmax_state;
};

/// Design average of rho^(x)t. Requires an ensemble certified to order >= t.
ComplexMatrix exact_moment(const ComplexMatrix& rho, int t, const UnitaryEnsemble& ens);

/// Noisy design average: Before conjugates the channel output,
/// Sum_i p_i (U_i eps(rho) U_i^dag)^(x)t; After applies the channel to each
/// rotated state, Sum_i p_i (eps(U_i rho U_i^dag))^(x)t.
ComplexMatrix noisy_moment(const ComplexMatrix& rho, int t, const UnitaryEnsemble& ens,
                           const KrausChannel& ch, NoiseModel model);

/// Smallest epsilon with -eps A <= B - A <= eps A in the Loewner order,
/// restricted to the support of A. The part of B - A outside the support is
/// reported as kernel_residual; Strict mode declares the problem infeasible
/// when it exceeds the tolerance. A and B must be Hermitian with equal
/// traces within 1e-10.
EpsilonResult min_epsilon(const ComplexMatrix& a, const ComplexMatrix& b, const EpsilonMode& mode);

/// min_epsilon of the exact and noisy moments of one state. At t = 1 an
/// epsilon below 1e-12 is snapped to exact zero.
EpsilonResult epsilon_for_state(const ComplexMatrix& rho, int t, const UnitaryEnsemble& ens,
                                const KrausChannel& ch, NoiseModel model, const EpsilonMode& mode);

/// Maximum per-state epsilon over a sample, with the attaining Bloch point.
/// kernel_residual is the one of the attaining state. Infeasible as soon as
/// any state is infeasible in Strict mode.
EpsilonResult epsilon_over_sample(const std::vector<BlochPoint>& sample, int t,
                                  const UnitaryEnsemble& ens, const KrausChannel& ch,
                                  NoiseModel model, const EpsilonMode& mode);
EpsilonResult epsilon_over_sample(const std::vector<ComplexMatrix>& states, int t,
                                  const UnitaryEnsemble& ens, const KrausChannel& ch,
                                  NoiseModel model, const EpsilonMode& mode);

/// Evaluates many channels and models against one fixed sample. The exact
/// moments and their spectra depend only on (sample, t, ensemble) and are
/// computed once at construction, then reused by every evaluate call.
class SampleEvaluator {
 public:
  SampleEvaluator(std::vector<BlochPoint> sample, int t, const UnitaryEnsemble& ens,
                  EpsilonMode mode);

  EpsilonResult evaluate(const KrausChannel& ch, NoiseModel model) const;
  std::vector<EpsilonResult> evaluate_per_state(const KrausChannel& ch, NoiseModel model) const;

  const std::vector<BlochPoint>& sample() const { return points_; }
  int order() const { return t_; }

 private:
  struct StateSlot {
    Matrix2 rho;
    ComplexMatrix moment;
    Eigen::VectorXd moment_values;   // ascending
    ComplexMatrix moment_vectors;
  };

  template <typename Visitor>
  void visit_states(const KrausChannel& ch, NoiseModel model, Visitor&& visit) const;

  int t_;
  EpsilonMode mode_;
  std::vector<BlochPoint> points_;
  std::vector<std::pair<double, Matrix2>> classes_;  // +-U collapsed, weights merged
  std::vector<StateSlot> states_;
};

}  // namespace tdnoise
