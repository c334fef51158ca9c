#include "tdnoise/channels.hpp"

#include <cmath>
#include <stdexcept>

namespace tdnoise {

namespace {

const Complex kI(0.0, 1.0);

void require_unit_interval(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0))
    throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
}

// Appends c * M unless c is exactly zero.
void push_scaled(std::vector<Matrix2>& kraus, double c, const Matrix2& m) {
  if (c != 0.0) kraus.push_back(c * m);
}

void validate_density(const ComplexMatrix& rho) {
  if (rho.rows() != 2 || rho.cols() != 2)
    throw std::invalid_argument("apply_channel: state must be 2x2");
  if (hermiticity_defect(rho) > 1e-10)
    throw std::invalid_argument("apply_channel: state not Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > 1e-10 || std::abs(rho.trace().imag()) > 1e-10)
    throw std::invalid_argument("apply_channel: state trace differs from 1");
  // 2x2 closed form: lambda_min = tr/2 - sqrt((tr/2)^2 - det)
  const double half_trace = 0.5 * rho.trace().real();
  const double det = rho.determinant().real();
  const double lambda_min = half_trace - std::sqrt(std::max(0.0, half_trace * half_trace - det));
  if (lambda_min < -1e-10)
    throw std::invalid_argument("apply_channel: state not positive semidefinite");
}

}  // namespace

KrausChannel make_channel(ChannelKind kind, double param) {
  require_unit_interval(param, "channel parameter");
  Matrix2 x, y, z;
  x << 0, 1, 1, 0;
  y << 0, -kI, kI, 0;
  z << 1, 0, 0, -1;

  KrausChannel ch{kind, param, {}};
  switch (kind) {
    case ChannelKind::BitFlip:
      push_scaled(ch.kraus, std::sqrt(1.0 - param), Matrix2::Identity());
      push_scaled(ch.kraus, std::sqrt(param), x);
      break;
    case ChannelKind::PhaseFlip:
      push_scaled(ch.kraus, std::sqrt(1.0 - param), Matrix2::Identity());
      push_scaled(ch.kraus, std::sqrt(param), z);
      break;
    case ChannelKind::BitPhaseFlip:
      push_scaled(ch.kraus, std::sqrt(1.0 - param), Matrix2::Identity());
      push_scaled(ch.kraus, std::sqrt(param), y);
      break;
    case ChannelKind::PhaseDamping: {
      Matrix2 keep = Matrix2::Zero(), damp = Matrix2::Zero();
      keep(0, 0) = 1.0;
      keep(1, 1) = std::sqrt(1.0 - param);
      damp(1, 1) = std::sqrt(param);
      ch.kraus.push_back(keep);
      if (param != 0.0) ch.kraus.push_back(damp);
      break;
    }
    case ChannelKind::AmplitudeDamping: {
      Matrix2 keep = Matrix2::Zero(), decay = Matrix2::Zero();
      keep(0, 0) = 1.0;
      keep(1, 1) = std::sqrt(1.0 - param);
      decay(0, 1) = std::sqrt(param);
      ch.kraus.push_back(keep);
      if (param != 0.0) ch.kraus.push_back(decay);
      break;
    }
    case ChannelKind::Depolarising:
      push_scaled(ch.kraus, std::sqrt(1.0 - param), Matrix2::Identity());
      push_scaled(ch.kraus, std::sqrt(param / 3.0), x);
      push_scaled(ch.kraus, std::sqrt(param / 3.0), y);
      push_scaled(ch.kraus, std::sqrt(param / 3.0), z);
      break;
  }
  return ch;
}

Matrix2 apply_channel_2x2(const KrausChannel& ch, const Matrix2& rho) {
  Matrix2 out = Matrix2::Zero();
  for (const Matrix2& e : ch.kraus) out += e * rho * e.adjoint();
  return out;
}

ComplexMatrix apply_channel(const KrausChannel& ch, const ComplexMatrix& rho) {
  validate_density(rho);
  return apply_channel_2x2(ch, Matrix2(rho));
}

double damping_to_flip_prob(double lambda) {
  require_unit_interval(lambda, "lambda");
  return 0.5 * (1.0 + std::sqrt(1.0 - lambda));
}

double decay_to_lambda(double elapsed_time, double time_constant) {
  if (elapsed_time < 0.0) throw std::invalid_argument("elapsed_time must be >= 0");
  if (time_constant <= 0.0) throw std::invalid_argument("time_constant must be > 0");
  return 1.0 - std::exp(-elapsed_time / time_constant);
}

std::optional<ChannelKind> channel_kind_from_string(std::string_view name) {
  if (name == "bitflip") return ChannelKind::BitFlip;
  if (name == "phaseflip") return ChannelKind::PhaseFlip;
  if (name == "bitphaseflip") return ChannelKind::BitPhaseFlip;
  if (name == "phasedamp") return ChannelKind::PhaseDamping;
  if (name == "ampdamp") return ChannelKind::AmplitudeDamping;
  if (name == "depolarising") return ChannelKind::Depolarising;
  return std::nullopt;
}

std::string to_string(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::BitFlip: return "bitflip";
    case ChannelKind::PhaseFlip: return "phaseflip";
    case ChannelKind::BitPhaseFlip: return "bitphaseflip";
    case ChannelKind::PhaseDamping: return "phasedamp";
    case ChannelKind::AmplitudeDamping: return "ampdamp";
    case ChannelKind::Depolarising: return "depolarising";
  }
  return "unknown";
}

}  // namespace tdnoise
