// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <numbers>
#include <vector>

#include "emskin/vec3.hpp"

namespace emskin {

inline constexpr double kPi = std::numbers::pi;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// Free-space constants at a working frequency. eps0 is derived from mu0 and
/// c0 so that k0 = omega*sqrt(eps0*mu0) = 2*pi/lambda0 to rounding.
struct PhysicalConstants {
  static constexpr double c0 = 299'792'458.0;
  static constexpr double mu0 = 1.25663706212e-6;
  static constexpr double eps0 = 1.0 / (mu0 * c0 * c0);

  double frequency = 0.0;

  static PhysicalConstants at_frequency(double frequency_hz);

  double omega() const { return 2.0 * kPi * frequency; }
  double lambda0() const { return c0 / frequency; }
  double k0() const { return 2.0 * kPi * frequency / c0; }
  static double eta0() { return mu0 * c0; }
};

struct SphericalPoint {
  double r = 1.0;
  double theta = 0.0;
  double phi = 0.0;

  /// Validates r > 0 and theta in [0, pi]; wraps phi into [0, 2*pi).
  static SphericalPoint make(double r, double theta, double phi);
  /// Signed-theta cut convention: theta < 0 maps to (|theta|, phi + pi).
  static SphericalPoint from_signed(double r, double signed_theta, double phi);
  static SphericalPoint from_cartesian(const Vec3& p);

  Vec3 cartesian() const;
  Vec3 r_hat() const;
  Vec3 theta_hat() const;
  Vec3 phi_hat() const;
};

struct DirectionCosines {
  double u = 0.0;
  double v = 0.0;
  double w = 1.0;
};

DirectionCosines direction_cosines(double theta, double phi);

/// Uniform planar M x N grid centred on the origin. Cell (m, n) has linear
/// index m * n_count + n; x varies with m, y with n.
struct ApertureLattice {
  std::size_t m_count = 0;
  std::size_t n_count = 0;
  double dx = 0.0;
  double dy = 0.0;
  std::vector<double> x;  ///< cell centres along x, size m_count
  std::vector<double> y;  ///< cell centres along y, size n_count
  double diameter = 0.0;

  std::size_t cell_count() const { return m_count * n_count; }
  std::size_t index(std::size_t m, std::size_t n) const { return m * n_count + n; }
  double cell_area() const { return dx * dy; }
  double side_x() const { return static_cast<double>(m_count) * dx; }
  double side_y() const { return static_cast<double>(n_count) * dy; }
  double side_length() const { return side_x() > side_y() ? side_x() : side_y(); }
};

ApertureLattice build_lattice(std::size_t m_count, std::size_t n_count, double dx, double dy);

struct RegionBoundaries {
  double r_nf = 0.0;
  double r_ff = 0.0;
};

/// Start of the radiative near field and of the far field:
/// r_nf = max{10 D, 10 lambda0, 0.62 sqrt(D^3/lambda0)},
/// r_ff = max{10 D, 10 lambda0, 2 D^2/lambda0}.
RegionBoundaries region_boundaries(const ApertureLattice& lattice, double lambda0);

}  // namespace emskin
