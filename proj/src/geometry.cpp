// SPDX-License-Identifier: Apache-2.0
#include "emskin/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "emskin/errors.hpp"

namespace emskin {

PhysicalConstants PhysicalConstants::at_frequency(double frequency_hz) {
  require(std::isfinite(frequency_hz) && frequency_hz > 0.0, "frequency must be positive");
  PhysicalConstants c;
  c.frequency = frequency_hz;
  return c;
}

SphericalPoint SphericalPoint::make(double r, double theta, double phi) {
  require(std::isfinite(r) && r > 0.0, "spherical point radius must be positive");
  require(theta >= 0.0 && theta <= kPi, "theta must lie in [0, pi]");
  double wrapped = std::fmod(phi, 2.0 * kPi);
  if (wrapped < 0.0) wrapped += 2.0 * kPi;
  if (wrapped >= 2.0 * kPi) wrapped = 0.0;
  return SphericalPoint{r, theta, wrapped};
}

SphericalPoint SphericalPoint::from_signed(double r, double signed_theta, double phi) {
  if (signed_theta < 0.0) return make(r, -signed_theta, phi + kPi);
  return make(r, signed_theta, phi);
}

SphericalPoint SphericalPoint::from_cartesian(const Vec3& p) {
  const double r = norm(p);
  require(r > 0.0, "cannot convert the origin to spherical coordinates");
  const double theta = std::acos(std::clamp(p[2] / r, -1.0, 1.0));
  const double phi = std::atan2(p[1], p[0]);
  return make(r, theta, phi);
}

Vec3 SphericalPoint::cartesian() const { return r * r_hat(); }

Vec3 SphericalPoint::r_hat() const {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

Vec3 SphericalPoint::theta_hat() const {
  return {std::cos(theta) * std::cos(phi), std::cos(theta) * std::sin(phi), -std::sin(theta)};
}

Vec3 SphericalPoint::phi_hat() const { return {-std::sin(phi), std::cos(phi), 0.0}; }

DirectionCosines direction_cosines(double theta, double phi) {
  const double s = std::sin(theta);
  return {s * std::cos(phi), s * std::sin(phi), std::cos(theta)};
}

ApertureLattice build_lattice(std::size_t m_count, std::size_t n_count, double dx, double dy) {
  require(m_count >= 1 && n_count >= 1, "lattice cell counts must be at least 1");
  require(std::isfinite(dx) && dx > 0.0 && std::isfinite(dy) && dy > 0.0,
          "lattice pitch must be positive");
  ApertureLattice lat;
  lat.m_count = m_count;
  lat.n_count = n_count;
  lat.dx = dx;
  lat.dy = dy;
  lat.x.resize(m_count);
  lat.y.resize(n_count);
  // centred offsets (m - (M+1)/2) with 1-based m, written as (2m - M + 1)/2 for 0-based m
  for (std::size_t m = 0; m < m_count; ++m)
    lat.x[m] = 0.5 * (2.0 * static_cast<double>(m) - static_cast<double>(m_count) + 1.0) * dx;
  for (std::size_t n = 0; n < n_count; ++n)
    lat.y[n] = 0.5 * (2.0 * static_cast<double>(n) - static_cast<double>(n_count) + 1.0) * dy;
  lat.diameter = std::hypot(lat.side_x(), lat.side_y());
  return lat;
}

RegionBoundaries region_boundaries(const ApertureLattice& lattice, double lambda0) {
  require(std::isfinite(lambda0) && lambda0 > 0.0, "wavelength must be positive");
  const double d = lattice.diameter;
  const double common = std::max(10.0 * d, 10.0 * lambda0);
  RegionBoundaries out;
  out.r_nf = std::max(common, 0.62 * std::sqrt(d * d * d / lambda0));
  out.r_ff = std::max(common, 2.0 * d * d / lambda0);
  return out;
}

}  // namespace emskin
