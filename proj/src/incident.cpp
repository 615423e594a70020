// SPDX-License-Identifier: Apache-2.0
#include "emskin/incident.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>

#include "emskin/errors.hpp"
#include "emskin/parallel.hpp"
#include "emskin/quadrature.hpp"

namespace emskin {

GaussLegendre gauss_legendre(int order) {
  require(order >= 1 && order <= 256, "Gauss-Legendre order must lie in [1, 256]");
  static std::mutex cache_mutex;
  static std::map<int, GaussLegendre> cache;
  std::lock_guard lock(cache_mutex);
  if (auto it = cache.find(order); it != cache.end()) return it->second;

  const int n = order;
  GaussLegendre rule{std::vector<double>(n), std::vector<double>(n)};
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double step = p1 / dp;
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  cache.emplace(order, rule);
  return rule;
}

double dbm_to_watts(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }

double watts_to_dbm(double watts) { return 10.0 * std::log10(watts / 1e-3); }

void HornDescriptor::validate() const {
  for (double v : {c1, c2, beta, rho_e, rho_h, b1, b2})
    require(std::isfinite(v) && v > 0.0, "horn lengths must be positive");
  require(std::isfinite(g_max_dbi) && g_max_dbi > 0.0, "horn g_max must be positive dBi");
  require(std::isfinite(frequency) && frequency > 0.0, "horn frequency must be positive");
}

HornDescriptor HornDescriptor::low_gain() {
  return {1.295e-2, 6.477e-3, 1.072e-3, 1.925e-2, 2.449e-2, 3.549e-2, 2.569e-2, 13.7, 17.5e9};
}

HornDescriptor HornDescriptor::high_gain() {
  return {1.295e-2, 6.477e-3, 8.897e-2, 1.041e-1, 1.137e-1, 7.648e-2, 5.976e-2, 20.4, 17.5e9};
}

namespace {
constexpr int kHornQuadOrder = 96;
}

HornPattern::HornPattern(const HornDescriptor& horn)
    : horn_(horn), rule_(gauss_legendre(kHornQuadOrder)) {
  horn_.validate();
  k0_ = PhysicalConstants::at_frequency(horn.frequency).k0();
  boresight_gain_ = std::pow(10.0, horn.g_max_dbi / 10.0);
  const double raw = std::norm(h_plane_integral(0.0) * e_plane_integral(0.0));
  normalisation_ = boresight_gain_ / raw;
}

cd HornPattern::h_plane_integral(double s) const {
  const auto& rule = rule_;
  const double half = 0.5 * horn_.b1;
  cd sum{};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double x = half * rule.nodes[i];
    const double phase = k0_ * (x * s - x * x / (2.0 * horn_.rho_h));
    sum += rule.weights[i] * std::cos(kPi * x / horn_.b1) * std::polar(1.0, phase);
  }
  return sum * half;
}

cd HornPattern::e_plane_integral(double s) const {
  const auto& rule = rule_;
  const double half = 0.5 * horn_.b2;
  cd sum{};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double y = half * rule.nodes[i];
    const double phase = k0_ * (y * s - y * y / (2.0 * horn_.rho_e));
    sum += rule.weights[i] * std::polar(1.0, phase);
  }
  return sum * half;
}

double HornPattern::gain(double theta, double phi) const {
  const double st = std::sin(theta);
  const double obliquity = 0.5 * (1.0 + std::cos(theta));
  const cd f = obliquity * h_plane_integral(st * std::cos(phi)) * e_plane_integral(st * std::sin(phi));
  return normalisation_ * std::norm(f);
}

double horn_gain(const HornDescriptor& horn, double theta, double phi) {
  return HornPattern(horn).gain(theta, phi);
}

namespace {

Vec3 axis_of(Polarization p) { return p == Polarization::x ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0}; }

Vec3 transverse_polarization(const Vec3& axis, const Vec3& k_hat) {
  const Vec3 e = axis - dot(axis, k_hat) * k_hat;
  const double len = norm(e);
  if (len < 1e-12) throw InvalidArgument("polarization axis is parallel to the propagation direction");
  return (1.0 / len) * e;
}

struct PointField {
  CVec3 e;
  CVec3 h;
  Vec3 k_hat;
};

// Reflected-field responses (per reflection-tensor entry) at one point.
void accumulate_responses(const PointField& f, double weight, CellIncidence& cell) {
  const Vec3& ki = f.k_hat;
  if (!(ki[2] < 0.0)) throw InvalidArgument("source must illuminate the aperture from z > 0");
  const Vec3 z{0.0, 0.0, 1.0};
  Vec3 e_perp = cross(z, ki);
  const double len = norm(e_perp);
  e_perp = len < 1e-12 ? Vec3{0.0, 1.0, 0.0} : (1.0 / len) * e_perp;
  const Vec3 e_par = cross(z, e_perp);
  const Vec3 kr{ki[0], ki[1], -ki[2]};
  auto lift = [&](const Vec3& t) {
    return Vec3{t[0], t[1], -(kr[0] * t[0] + kr[1] * t[1]) / kr[2]};
  };
  const Vec3 l_perp = lift(e_perp);
  const Vec3 l_par = lift(e_par);
  const cd a_perp = dot(e_perp, f.e);
  const cd a_par = dot(e_par, f.e);
  const std::array<CVec3, 4> resp{a_perp * l_perp, a_par * l_perp, a_perp * l_par, a_par * l_par};
  const double inv_eta = 1.0 / PhysicalConstants::eta0();
  for (std::size_t k = 0; k < 4; ++k) {
    cell.e_response[k] += cd(weight) * resp[k];
    cell.h_response[k] += cd(weight * inv_eta) * cross(kr, resp[k]);
  }
  cell.e_mean += cd(weight) * f.e;
  cell.h_mean += cd(weight) * f.h;
}

template <class FieldAt>
IncidentFieldGrid sample_grid(const ApertureLattice& lattice, int quad_order, FieldAt&& field_at) {
  require(quad_order >= 1, "quadrature order must be at least 1");
  const GaussLegendre rule = gauss_legendre(quad_order);
  IncidentFieldGrid grid;
  grid.m_count = lattice.m_count;
  grid.n_count = lattice.n_count;
  grid.quad_order = quad_order;
  grid.cells.resize(lattice.cell_count());
  parallel_for(
      lattice.cell_count(),
      [&](std::size_t idx) {
        const std::size_t m = idx / lattice.n_count;
        const std::size_t n = idx % lattice.n_count;
        CellIncidence cell;
        const PointField centre = field_at(Vec3{lattice.x[m], lattice.y[n], 0.0}, &cell.distance_center);
        cell.e_center = centre.e;
        cell.h_center = centre.h;
        for (int i = 0; i < quad_order; ++i) {
          for (int j = 0; j < quad_order; ++j) {
            const Vec3 p{lattice.x[m] + 0.5 * lattice.dx * rule.nodes[i],
                         lattice.y[n] + 0.5 * lattice.dy * rule.nodes[j], 0.0};
            const double w = 0.25 * rule.weights[i] * rule.weights[j];
            accumulate_responses(field_at(p, nullptr), w, cell);
          }
        }
        grid.cells[idx] = cell;
      },
      64);
  return grid;
}

}  // namespace

std::array<CVec3, 2> horn_field_at(const SourcePlacement& placement, const HornPattern& pattern,
                                   const PhysicalConstants& constants, const Vec3& point) {
  const Vec3 tx = placement.position.cartesian();
  const Vec3 boresight = (-1.0 / norm(tx)) * tx;
  const Vec3 y_h = transverse_polarization(axis_of(placement.polarization), boresight);
  const Vec3 x_h = cross(y_h, boresight);
  const Vec3 delta = point - tx;
  const double d = norm(delta);
  const Vec3 k_hat = (1.0 / d) * delta;
  const double theta_h = std::acos(std::clamp(dot(k_hat, boresight), -1.0, 1.0));
  const double phi_h = std::atan2(dot(k_hat, y_h), dot(k_hat, x_h));
  const double gain = pattern.gain(theta_h, phi_h);
  const double amplitude =
      std::sqrt(PhysicalConstants::eta0() * dbm_to_watts(placement.tx_power_dbm) * gain / (2.0 * kPi)) / d;
  const Vec3 e_hat = transverse_polarization(axis_of(placement.polarization), k_hat);
  const CVec3 e = std::polar(amplitude, -constants.k0() * d) * e_hat;
  const CVec3 h = cd(1.0 / PhysicalConstants::eta0()) * cross(k_hat, e);
  return {e, h};
}

IncidentFieldGrid incident_field_on_aperture(const SourcePlacement& placement,
                                             const HornDescriptor& horn,
                                             const ApertureLattice& lattice, int quad_order) {
  require(placement.position.r > 0.0, "source placement must not be at the origin");
  const HornPattern pattern(horn);
  const PhysicalConstants constants = PhysicalConstants::at_frequency(horn.frequency);
  const Vec3 tx = placement.position.cartesian();
  return sample_grid(lattice, quad_order, [&](const Vec3& p, double* distance) {
    const auto eh = horn_field_at(placement, pattern, constants, p);
    const Vec3 delta = p - tx;
    const double d = norm(delta);
    if (distance) *distance = d;
    return PointField{eh[0], eh[1], (1.0 / d) * delta};
  });
}

IncidentFieldGrid incident_field_on_aperture(const PlaneWaveSource& source,
                                             const ApertureLattice& lattice, int quad_order,
                                             double frequency) {
  const PhysicalConstants constants = PhysicalConstants::at_frequency(frequency);
  const SphericalPoint from = SphericalPoint::make(1.0, source.theta, source.phi);
  const Vec3 k_hat = -1.0 * from.r_hat();
  const Vec3 e_hat = transverse_polarization(axis_of(source.polarization), k_hat);
  const double k0 = constants.k0();
  return sample_grid(lattice, quad_order, [&](const Vec3& p, double* distance) {
    if (distance) *distance = 0.0;
    const CVec3 e = std::polar(source.amplitude, -k0 * dot(k_hat, p)) * e_hat;
    const CVec3 h = cd(1.0 / PhysicalConstants::eta0()) * cross(k_hat, e);
    return PointField{e, h, k_hat};
  });
}

AveragedField averaged_field(const CellIncidence& cell, const ReflectionTensor& gamma) {
  const std::array<cd, 4> g{gamma.pp, gamma.ps, gamma.sp, gamma.ss};
  AveragedField out{cell.e_mean, cell.h_mean};
  for (std::size_t k = 0; k < 4; ++k) {
    out.e += g[k] * cell.e_response[k];
    out.h += g[k] * cell.h_response[k];
  }
  out.e = cd(0.5) * out.e;
  out.h = cd(0.5) * out.h;
  return out;
}

std::vector<AveragedField> surface_averaged_field(const IncidentFieldGrid& grid,
                                                  std::span<const ReflectionTensor> reflection) {
  require(reflection.size() == grid.cells.size(),
          "reflection tensor count must match the number of cells");
  std::vector<AveragedField> out(grid.cells.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = averaged_field(grid.cells[i], reflection[i]);
  return out;
}

}  // namespace emskin
