// SPDX-License-Identifier: Apache-2.0
#include "emskin/field_engine.hpp"

#include <algorithm>
#include <cmath>

#include "emskin/errors.hpp"
#include "emskin/parallel.hpp"
#include "emskin/quadrature.hpp"

namespace emskin {

namespace {

double sinc(double t) { return std::abs(t) < 1e-8 ? 1.0 - t * t / 6.0 : std::sin(t) / t; }

void check_grid(const SurfaceCurrentGrid& currents, const ApertureLattice& lattice) {
  require(currents.m_count == lattice.m_count && currents.n_count == lattice.n_count &&
              currents.j.size() == lattice.cell_count(),
          "current grid does not match the lattice");
}

FieldSample closed_form(const SurfaceCurrentGrid& currents, const ApertureLattice& lattice,
                        const SphericalPoint& obs, const PhysicalConstants& constants,
                        bool fresnel) {
  const double lambda = constants.lambda0();
  const double r = obs.r;
  const DirectionCosines d = direction_cosines(obs.theta, obs.phi);
  const double element = lattice.dx * lattice.dy * sinc(kPi * lattice.dx * d.u / lambda) *
                         sinc(kPi * lattice.dy * d.v / lambda);
  const double quad_scale = fresnel ? kPi / (lambda * r) : 0.0;
  const double lin_scale = 2.0 * kPi / lambda;

  std::array<cd, 4> s{};
  for (std::size_t m = 0; m < lattice.m_count; ++m) {
    const double x = lattice.x[m];
    for (std::size_t n = 0; n < lattice.n_count; ++n) {
      const double y = lattice.y[n];
      const double xw = x * d.w, yw = y * d.w, cr = x * d.v - y * d.u;
      const double phase = lin_scale * (x * d.u + y * d.v) - quad_scale * (xw * xw + yw * yw + cr * cr);
      const cd g(std::cos(phase), std::sin(phase));
      const auto& j = currents.j[lattice.index(m, n)];
      for (std::size_t k = 0; k < 4; ++k) s[k] += j[k] * g;
    }
  }
  for (auto& v : s) v *= element;

  const double eta = PhysicalConstants::eta0();
  const double ct = std::cos(obs.theta), cp = std::cos(obs.phi), sp = std::sin(obs.phi);
  const cd pre = -kJ * std::polar(1.0, -constants.k0() * r) / (2.0 * lambda * r);
  FieldSample out;
  out.at = obs;
  out.f_theta = pre * (eta * ct * cp * s[kJex] + eta * ct * sp * s[kJey] - sp * s[kJhx] + cp * s[kJhy]);
  out.f_phi = pre * (-eta * sp * s[kJex] + eta * cp * s[kJey] - ct * cp * s[kJhx] - ct * sp * s[kJhy]);
  out.valid = r >= region_boundaries(lattice, lambda).r_nf;
  return out;
}

template <class Eval>
std::vector<FieldSample> over_points(std::span<const SphericalPoint> points, Eval&& eval) {
  std::vector<FieldSample> out(points.size());
  parallel_for(points.size(), [&](std::size_t i) { out[i] = eval(points[i]); });
  return out;
}

}  // namespace

cd gamma_coefficient(double x, double y, double r, const DirectionCosines& d, double dx, double dy,
                     double lambda0) {
  require(r > 0.0, "observation distance must be positive");
  const double xw = x * d.w, yw = y * d.w, cr = x * d.v - y * d.u;
  const double phase = 2.0 * kPi / lambda0 * (x * d.u + y * d.v) -
                       kPi / (lambda0 * r) * (xw * xw + yw * yw + cr * cr);
  return dx * dy * sinc(kPi * dx * d.u / lambda0) * sinc(kPi * dy * d.v / lambda0) *
         cd(std::cos(phase), std::sin(phase));
}

cd gamma_coefficient_ff(double x, double y, const DirectionCosines& d, double dx, double dy,
                        double lambda0) {
  const double phase = 2.0 * kPi / lambda0 * (x * d.u + y * d.v);
  return dx * dy * sinc(kPi * dx * d.u / lambda0) * sinc(kPi * dy * d.v / lambda0) *
         cd(std::cos(phase), std::sin(phase));
}

FieldSample reflected_field(const SurfaceCurrentGrid& currents, const ApertureLattice& lattice,
                            const SphericalPoint& obs, const PhysicalConstants& constants) {
  check_grid(currents, lattice);
  return closed_form(currents, lattice, obs, constants, true);
}

FieldSample reflected_field_ff(const SurfaceCurrentGrid& currents, const ApertureLattice& lattice,
                               const SphericalPoint& obs, const PhysicalConstants& constants) {
  check_grid(currents, lattice);
  return closed_form(currents, lattice, obs, constants, false);
}

std::vector<FieldSample> reflected_field(const SurfaceCurrentGrid& currents,
                                         const ApertureLattice& lattice,
                                         std::span<const SphericalPoint> points,
                                         const PhysicalConstants& constants) {
  check_grid(currents, lattice);
  return over_points(points, [&](const SphericalPoint& p) {
    return closed_form(currents, lattice, p, constants, true);
  });
}

std::vector<FieldSample> reflected_field_ff(const SurfaceCurrentGrid& currents,
                                            const ApertureLattice& lattice,
                                            std::span<const SphericalPoint> points,
                                            const PhysicalConstants& constants) {
  check_grid(currents, lattice);
  return over_points(points, [&](const SphericalPoint& p) {
    return closed_form(currents, lattice, p, constants, false);
  });
}

FieldSample oracle_field(const SurfaceCurrentGrid& currents, const ApertureLattice& lattice,
                         const SphericalPoint& obs, int subsamples, const PhysicalConstants& constants) {
  check_grid(currents, lattice);
  require(subsamples >= 1, "oracle subsamples per cell must be at least 1");
  const GaussLegendre rule = gauss_legendre(subsamples);
  const Vec3 p_obs = obs.cartesian();
  const double k = constants.k0();
  const cd jwmu = kJ * constants.omega() * PhysicalConstants::mu0;
  const double cell_span = std::max(lattice.dx, lattice.dy);
  const bool in_plane = std::abs(p_obs[2]) < 1e-9 * cell_span;

  CVec3 e{};
  for (std::size_t m = 0; m < lattice.m_count; ++m) {
    for (std::size_t n = 0; n < lattice.n_count; ++n) {
      const auto& j = currents.j[lattice.index(m, n)];
      for (int a = 0; a < subsamples; ++a) {
        for (int b = 0; b < subsamples; ++b) {
          const double x = lattice.x[m] + 0.5 * lattice.dx * rule.nodes[a];
          const double y = lattice.y[n] + 0.5 * lattice.dy * rule.nodes[b];
          const Vec3 rvec = p_obs - Vec3{x, y, 0.0};
          const double dist = norm(rvec);
          if (in_plane && dist < cell_span)
            throw NumericalError("oracle observation point lies in the aperture plane within one cell of a source");
          const double area = 0.25 * rule.weights[a] * rule.weights[b] * lattice.dx * lattice.dy;
          const Vec3 rh = (1.0 / dist) * rvec;
          const double kr = k * dist;
          const cd g = std::polar(1.0 / (4.0 * kPi * dist), -kr);
          const CVec3 p{j[kJex] * area, j[kJey] * area, cd{}};
          const CVec3 mm{j[kJhx] * area, j[kJhy] * area, cd{}};
          const cd a1 = 1.0 - kJ / kr - 1.0 / (kr * kr);
          const cd a2 = 1.0 - 3.0 * kJ / kr - 3.0 / (kr * kr);
          const cd rp = dot(rh, p);
          const cd ce = -jwmu * g;
          const cd cm = kJ * k * g * (1.0 + 1.0 / (kJ * kr));
          const CVec3 rxm = cross(rh, mm);
          for (std::size_t c = 0; c < 3; ++c) e[c] += ce * (a1 * p[c] - a2 * rp * rh[c]) + cm * rxm[c];
        }
      }
    }
  }
  FieldSample out;
  out.at = obs;
  out.f_theta = dot(obs.theta_hat(), e);
  out.f_phi = dot(obs.phi_hat(), e);
  return out;
}

FieldSample oracle_field_converged(const SurfaceCurrentGrid& currents, const ApertureLattice& lattice,
                                   const SphericalPoint& obs, const PhysicalConstants& constants,
                                   const OracleOptions& options) {
  require(options.initial_subsamples >= 1 && options.max_subsamples >= options.initial_subsamples,
          "oracle subsample bounds are inconsistent");
  require(options.tolerance > 0.0, "oracle tolerance must be positive");
  int n = options.initial_subsamples;
  FieldSample prev = oracle_field(currents, lattice, obs, n, constants);
  while (2 * n <= options.max_subsamples) {
    n *= 2;
    FieldSample next = oracle_field(currents, lattice, obs, n, constants);
    const double diff = std::hypot(std::abs(next.f_theta - prev.f_theta), std::abs(next.f_phi - prev.f_phi));
    const double scale = next.magnitude();
    if (diff <= options.tolerance * scale || scale == 0.0) return next;
    prev = next;
  }
  throw NumericalError("oracle did not converge to the requested tolerance");
}

std::vector<FieldSample> oracle_field_converged(const SurfaceCurrentGrid& currents,
                                                const ApertureLattice& lattice,
                                                std::span<const SphericalPoint> points,
                                                const PhysicalConstants& constants,
                                                const OracleOptions& options) {
  return over_points(points, [&](const SphericalPoint& p) {
    return oracle_field_converged(currents, lattice, p, constants, options);
  });
}

std::vector<double> prediction_error_map(std::span<const FieldSample> predicted,
                                         std::span<const FieldSample> reference) {
  require(predicted.size() == reference.size(), "prediction and reference sets differ in size");
  require(!reference.empty(), "observation set is empty");
  double peak = 0.0;
  for (const auto& s : reference) peak = std::max(peak, std::norm(s.f_phi));
  if (!(peak > 0.0)) throw NumericalError("reference field is identically zero; error map undefined");
  std::vector<double> out(reference.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double diff = std::abs(predicted[i].f_phi) - std::abs(reference[i].f_phi);
    out[i] = diff * diff / peak;
  }
  return out;
}

}  // namespace emskin
