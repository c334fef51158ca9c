#pragma once

#include <numbers>
#include <vector>

#include "tdnoise/linalg.hpp"

namespace tdnoise {

struct BlochPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// Spherical sampling region: radii in [0, r_t], polar angles in [0, theta_t],
/// azimuths in [0, phi_t], each axis endpoint-inclusive evenly spaced.
struct BlochGridSpec {
  double r_t = 1.0;
  double theta_t = std::numbers::pi;
  double phi_t = 2.0 * std::numbers::pi;
  int n_r = 11;
  int n_theta = 11;
  int n_phi = 11;
};

void validate_grid_spec(const BlochGridSpec& spec);

/// rho = (I + x X + y Y + z Z) / 2. Rejects points outside the closed ball.
Matrix2 density_from_point(const BlochPoint& p);

/// Bloch coordinates of a 2x2 density matrix, x = tr(rho X) etc.
BlochPoint point_from_density(const Matrix2& rho);

/// All n_r * n_theta * n_phi combinations, r outermost and phi innermost.
/// Coordinate duplicates (r = 0, phi wraparound) are kept as generated.
std::vector<BlochPoint> spherical_grid(const BlochGridSpec& spec);

/// n^3 lattice over [-1, 1]^3 filtered to the closed unit ball.
std::vector<BlochPoint> cube_grid(int n = 20);

}  // namespace tdnoise
