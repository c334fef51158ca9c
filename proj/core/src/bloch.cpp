#include "tdnoise/bloch.hpp"

#include <cmath>
#include <stdexcept>

namespace tdnoise {

void validate_grid_spec(const BlochGridSpec& spec) {
  if (!(spec.r_t >= 0.0 && spec.r_t <= 1.0))
    throw std::invalid_argument("grid spec: r_t must lie in [0, 1]");
  if (!(spec.theta_t >= 0.0 && spec.theta_t <= std::numbers::pi + 1e-12))
    throw std::invalid_argument("grid spec: theta_t must lie in [0, pi]");
  if (!(spec.phi_t >= 0.0 && spec.phi_t <= 2.0 * std::numbers::pi + 1e-12))
    throw std::invalid_argument("grid spec: phi_t must lie in [0, 2 pi]");
  if (spec.n_r < 2 || spec.n_theta < 2 || spec.n_phi < 2)
    throw std::invalid_argument("grid spec: point counts must be >= 2");
}

Matrix2 density_from_point(const BlochPoint& p) {
  const double r = std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z);
  if (r > 1.0 + 1e-12)
    throw std::invalid_argument("density_from_point: point outside the Bloch ball");
  Matrix2 rho;
  rho << Complex(0.5 * (1.0 + p.z), 0.0), Complex(0.5 * p.x, -0.5 * p.y),
      Complex(0.5 * p.x, 0.5 * p.y), Complex(0.5 * (1.0 - p.z), 0.0);
  return rho;
}

BlochPoint point_from_density(const Matrix2& rho) {
  return {2.0 * rho(1, 0).real(), 2.0 * rho(1, 0).imag(), (rho(0, 0) - rho(1, 1)).real()};
}

std::vector<BlochPoint> spherical_grid(const BlochGridSpec& spec) {
  validate_grid_spec(spec);
  std::vector<BlochPoint> points;
  points.reserve(static_cast<std::size_t>(spec.n_r) * spec.n_theta * spec.n_phi);
  for (int ir = 0; ir < spec.n_r; ++ir) {
    const double r = spec.r_t * ir / (spec.n_r - 1);
    for (int it = 0; it < spec.n_theta; ++it) {
      const double theta = spec.theta_t * it / (spec.n_theta - 1);
      for (int ip = 0; ip < spec.n_phi; ++ip) {
        const double phi = spec.phi_t * ip / (spec.n_phi - 1);
        points.push_back({r * std::sin(theta) * std::cos(phi),
                          r * std::sin(theta) * std::sin(phi), r * std::cos(theta)});
      }
    }
  }
  return points;
}

std::vector<BlochPoint> cube_grid(int n) {
  if (n < 2) throw std::invalid_argument("cube_grid: n must be >= 2");
  std::vector<double> axis(n);
  for (int i = 0; i < n; ++i) axis[i] = -1.0 + 2.0 * i / (n - 1);
  std::vector<BlochPoint> points;
  for (double x : axis)
    for (double y : axis)
      for (double z : axis)
        if (std::sqrt(x * x + y * y + z * z) <= 1.0) points.push_back({x, y, z});
  return points;
}

}  // namespace tdnoise
