#include "tdnoise/quality.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace tdnoise {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_density(const ComplexMatrix& rho) {
  if (rho.rows() != 2 || rho.cols() != 2) throw std::invalid_argument("state must be 2x2");
  if (hermiticity_defect(rho) > 1e-10) throw std::invalid_argument("state not Hermitian");
  if (std::abs(rho.trace() - Complex(1.0)) > 1e-10)
    throw std::invalid_argument("state trace differs from 1");
  const double half_trace = 0.5 * rho.trace().real();
  const double det = (rho(0, 0) * rho(1, 1) - rho(0, 1) * rho(1, 0)).real();
  if (half_trace - std::sqrt(std::max(0.0, half_trace * half_trace - det)) < -1e-10)
    throw std::invalid_argument("state not positive semidefinite");
}

Matrix2 phase_canonical(const Matrix2& m) {
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (std::abs(m(i, j)) > 1e-9) return m * (std::conj(m(i, j)) / std::abs(m(i, j)));
  return m;
}

// Conjugation by U^(x)t is blind to global phases, so elements equal up to
// phase contribute one term with merged weight. Halves the icosahedral sum.
std::vector<std::pair<double, Matrix2>> projective_classes(const UnitaryEnsemble& ens) {
  std::vector<std::pair<double, Matrix2>> classes;
  std::vector<Matrix2> keys;
  for (const auto& [weight, u] : ens.elements) {
    const Matrix2 key = phase_canonical(u);
    bool merged = false;
    for (std::size_t k = 0; k < keys.size(); ++k)
      if ((keys[k] - key).cwiseAbs().maxCoeff() < 1e-12) {
        classes[k].first += weight;
        merged = true;
        break;
      }
    if (!merged) {
      keys.push_back(key);
      classes.emplace_back(weight, u);
    }
  }
  return classes;
}

// Accumulates Sum_i w_i factor(U_i)^(x)t into acc using the two scratch
// matrices, no allocation per element.
template <typename FactorFn>
void product_moment_into(const std::vector<std::pair<double, Matrix2>>& classes, int t,
                         FactorFn&& factor, ComplexMatrix& acc, ComplexMatrix& cur,
                         ComplexMatrix& next) {
  acc.setZero();
  for (const auto& [weight, u] : classes) {
    const Matrix2 f = factor(u);
    cur.topLeftCorner(2, 2) = f;
    long cur_dim = 2;
    for (int k = 1; k < t; ++k) {
      for (long i = 0; i < cur_dim; ++i)
        for (long j = 0; j < cur_dim; ++j)
          next.block(2 * i, 2 * j, 2, 2) = cur(i, j) * f;
      cur_dim *= 2;
      std::swap(cur, next);
    }
    acc += weight * cur;
  }
}

struct SupportSpectrum {
  const Eigen::VectorXd& values;
  const ComplexMatrix& vectors;
};

// Core of min_epsilon once A's spectral data is known; diff = B - A.
EpsilonResult epsilon_from_spectrum(const SupportSpectrum& a, const ComplexMatrix& diff,
                                    const EpsilonMode& mode) {
  EpsilonResult result;
  const Eigen::Index dim = a.values.size();
  const double lambda_max = a.values(dim - 1);
  if (lambda_max <= 0.0) {
    result.kernel_residual = diff.norm();
    result.epsilon = 0.0;
    if (mode.kind == EpsilonModeKind::Strict &&
        result.kernel_residual > mode.kernel_residual_tol) {
      result.feasible = false;
      result.epsilon = kInf;
    }
    return result;
  }

  const double threshold = mode.rank_cutoff * lambda_max;
  Eigen::Index first = dim;
  while (first > 0 && a.values(first - 1) > threshold) --first;
  const Eigen::Index rank = dim - first;

  const ComplexMatrix rotated = a.vectors.adjoint() * diff * a.vectors;
  result.kernel_residual = rotated.topLeftCorner(first, first).norm() +
                           rotated.topRightCorner(first, rank).norm();

  if (mode.kind == EpsilonModeKind::Strict &&
      result.kernel_residual > mode.kernel_residual_tol) {
    result.feasible = false;
    result.epsilon = kInf;
    return result;
  }

  ComplexMatrix weighted(rank, rank);
  for (Eigen::Index i = 0; i < rank; ++i)
    for (Eigen::Index j = 0; j < rank; ++j)
      weighted(i, j) = rotated(first + i, first + j) /
                       std::sqrt(a.values(first + i) * a.values(first + j));
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(weighted);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("min_epsilon: eigensolver failed to converge");
  result.epsilon =
      std::max(std::abs(solver.eigenvalues()(0)), std::abs(solver.eigenvalues()(rank - 1)));
  return result;
}

void snap_order_one(EpsilonResult& r, int t) {
  if (t == 1 && r.feasible && std::abs(r.epsilon) < 1e-12) r.epsilon = 0.0;
}

// Compares the ensemble average with the quadrature oracle on one fixed
// random Hermitian canary. An ensemble of insufficient order deviates at the
// 1e-1 scale while a sufficient one agrees to machine precision.
void require_order(const UnitaryEnsemble& ens, int t) {
  if (t < 1 || t > 5) throw std::invalid_argument("order t must be in 1..5");
  const long dim = 1L << t;
  std::mt19937_64 rng(0x0C4A117Eull + t);
  const auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  ComplexMatrix canary(dim, dim);
  for (long i = 0; i < dim; ++i)
    for (long j = 0; j < dim; ++j)
      canary(i, j) = Complex(2.0 * unit() - 1.0, 2.0 * unit() - 1.0);
  canary += ComplexMatrix(canary.adjoint());
  const double gap = (design_moment(ens, canary, t) - haar_moment_oracle(canary, t)).norm();
  if (gap > 1e-10 * canary.norm())
    throw std::invalid_argument("ensemble order insufficient for t = " + std::to_string(t) +
                                " (oracle deviation " + std::to_string(gap) + ")");
}

}  // namespace

ComplexMatrix exact_moment(const ComplexMatrix& rho, int t, const UnitaryEnsemble& ens) {
  require_density(rho);
  require_order(ens, t);
  return design_moment_product(ens, Matrix2(rho), t);
}

ComplexMatrix noisy_moment(const ComplexMatrix& rho, int t, const UnitaryEnsemble& ens,
                           const KrausChannel& ch, NoiseModel model) {
  require_density(rho);
  require_order(ens, t);
  const Matrix2 state(rho);
  if (model == NoiseModel::Before)
    return design_moment_product(ens, apply_channel_2x2(ch, state), t);
  const long dim = 1L << t;
  ComplexMatrix acc(dim, dim), cur(dim, dim), next(dim, dim);
  std::vector<std::pair<double, Matrix2>> elems;
  elems.reserve(ens.elements.size());
  for (const auto& [weight, u] : ens.elements) elems.emplace_back(weight, u);
  product_moment_into(
      elems, t, [&](const Matrix2& u) { return apply_channel_2x2(ch, Matrix2(u * state * u.adjoint())); },
      acc, cur, next);
  return acc;
}

EpsilonResult min_epsilon(const ComplexMatrix& a, const ComplexMatrix& b, const EpsilonMode& mode) {
  if (a.rows() != a.cols() || a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("min_epsilon: dimension mismatch");
  if (hermiticity_defect(b) > 1e-10)
    throw std::invalid_argument("min_epsilon: B not Hermitian within 1e-10");
  if (std::abs(a.trace() - b.trace()) > 1e-10)
    throw std::invalid_argument("min_epsilon: trace mismatch between moments");
  const Spectrum spec = hermitian_eig(a);
  return epsilon_from_spectrum({spec.eigenvalues, spec.eigenvectors}, b - a, mode);
}

EpsilonResult epsilon_for_state(const ComplexMatrix& rho, int t, const UnitaryEnsemble& ens,
                                const KrausChannel& ch, NoiseModel model, const EpsilonMode& mode) {
  EpsilonResult result =
      min_epsilon(exact_moment(rho, t, ens), noisy_moment(rho, t, ens, ch, model), mode);
  snap_order_one(result, t);
  return result;
}

SampleEvaluator::SampleEvaluator(std::vector<BlochPoint> sample, int t, const UnitaryEnsemble& ens,
                                 EpsilonMode mode)
    : t_(t), mode_(mode), points_(std::move(sample)), classes_(projective_classes(ens)) {
  if (points_.empty()) throw std::invalid_argument("epsilon_over_sample: empty sample");
  require_order(ens, t);
  const long dim = 1L << t_;
  ComplexMatrix cur(dim, dim), next(dim, dim);
  states_.reserve(points_.size());
  for (const BlochPoint& p : points_) {
    StateSlot slot;
    slot.rho = density_from_point(p);
    slot.moment.resize(dim, dim);
    product_moment_into(
        classes_, t_, [&](const Matrix2& u) { return Matrix2(u * slot.rho * u.adjoint()); },
        slot.moment, cur, next);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(slot.moment);
    if (solver.info() != Eigen::Success)
      throw std::runtime_error("SampleEvaluator: eigensolver failed to converge");
    slot.moment_values = solver.eigenvalues();
    slot.moment_vectors = solver.eigenvectors();
    states_.push_back(std::move(slot));
  }
}

template <typename Visitor>
void SampleEvaluator::visit_states(const KrausChannel& ch, NoiseModel model,
                                   Visitor&& visit) const {
  const long dim = 1L << t_;
  ComplexMatrix noisy(dim, dim), cur(dim, dim), next(dim, dim);
  for (std::size_t s = 0; s < states_.size(); ++s) {
    const StateSlot& slot = states_[s];
    if (model == NoiseModel::Before) {
      const Matrix2 sigma = apply_channel_2x2(ch, slot.rho);
      product_moment_into(
          classes_, t_, [&](const Matrix2& u) { return Matrix2(u * sigma * u.adjoint()); }, noisy,
          cur, next);
    } else {
      product_moment_into(
          classes_, t_,
          [&](const Matrix2& u) {
            return apply_channel_2x2(ch, Matrix2(u * slot.rho * u.adjoint()));
          },
          noisy, cur, next);
    }
    EpsilonResult r = epsilon_from_spectrum({slot.moment_values, slot.moment_vectors},
                                            noisy - slot.moment, mode_);
    snap_order_one(r, t_);
    if (!visit(s, std::move(r))) return;
  }
}

EpsilonResult SampleEvaluator::evaluate(const KrausChannel& ch, NoiseModel model) const {
  EpsilonResult best;
  best.epsilon = -1.0;
  visit_states(ch, model, [&](std::size_t s, EpsilonResult r) {
    if (!r.feasible) {
      r.argmax_state = points_[s];
      best = std::move(r);
      return false;
    }
    if (r.epsilon > best.epsilon) {
      r.argmax_state = points_[s];
      best = std::move(r);
    }
    return true;
  });
  return best;
}

std::vector<EpsilonResult> SampleEvaluator::evaluate_per_state(const KrausChannel& ch,
                                                               NoiseModel model) const {
  std::vector<EpsilonResult> results(states_.size());
  visit_states(ch, model, [&](std::size_t s, EpsilonResult r) {
    results[s] = std::move(r);
    return true;
  });
  return results;
}

EpsilonResult epsilon_over_sample(const std::vector<BlochPoint>& sample, int t,
                                  const UnitaryEnsemble& ens, const KrausChannel& ch,
                                  NoiseModel model, const EpsilonMode& mode) {
  return SampleEvaluator(sample, t, ens, mode).evaluate(ch, model);
}

EpsilonResult epsilon_over_sample(const std::vector<ComplexMatrix>& states, int t,
                                  const UnitaryEnsemble& ens, const KrausChannel& ch,
                                  NoiseModel model, const EpsilonMode& mode) {
  std::vector<BlochPoint> sample;
  sample.reserve(states.size());
  for (const ComplexMatrix& rho : states) {
    require_density(rho);
    sample.push_back(point_from_density(Matrix2(rho)));
  }
  return epsilon_over_sample(sample, t, ens, ch, model, mode);
}

}  // namespace tdnoise
