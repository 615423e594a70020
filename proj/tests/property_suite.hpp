// SPDX-License-Identifier: Apache-2.0
// Randomised invariant checks shared by the unit tests and the acceptance binary.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "emskin/field_engine.hpp"
#include "emskin/geometry.hpp"
#include "emskin/experiments.hpp"
#include "emskin/incident.hpp"
#include "emskin/result_bundle.hpp"
#include "emskin/meta_atom.hpp"
#include "emskin/parallel.hpp"
#include "emskin/scenario.hpp"
#include "emskin/synthesis.hpp"
#include "oracles.hpp"

namespace props {

using emskin::cd;
using Rng = std::mt19937_64;

/// A check returns an empty string on success, otherwise a description.
struct Property {
  std::string name;
  std::size_t cases = 1000;
  std::function<std::string(Rng&)> check;
};

struct Outcome {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first_failure;
  bool passed() const { return failures == 0; }
};

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
inline std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}
inline cd random_cd(Rng& rng) { return {uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)}; }

template <class... Args>
std::string fmt(const char* format, Args... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

constexpr double kFrequency = 17.5e9;
constexpr double kDelta = 8.565e-3;

inline emskin::SurfaceCurrentGrid random_currents(Rng& rng, std::size_t m, std::size_t n) {
  auto j = emskin::SurfaceCurrentGrid::zeros(m, n);
  for (auto& c : j.j) {
    c[0] = random_cd(rng) / 377.0;
    c[1] = random_cd(rng) / 377.0;
    c[2] = random_cd(rng);
    c[3] = random_cd(rng);
  }
  return j;
}

/// Upper bound of r |F| for a current grid: (1/(2 lambda)) sum (eta0 |J^e| + |J^h|) dx dy.
inline double envelope_scale(const emskin::SurfaceCurrentGrid& j, const emskin::ApertureLattice& lat, double lambda) {
  double s = 0.0;
  for (const auto& c : j.j)
    s += oracle::eta0() * (std::abs(c[0]) + std::abs(c[1])) + std::abs(c[2]) + std::abs(c[3]);
  return s * lat.cell_area() / (2.0 * lambda);
}

/// Surrogate currents of a random uniform layout under a normally incident plane wave.
inline emskin::SurfaceCurrentGrid broadside_currents(Rng& rng, const emskin::ApertureLattice& lat,
                                                     const emskin::PhysicalConstants& pc) {
  static const auto table = emskin::surrogate_table({});
  const auto inc = emskin::incident_field_on_aperture(emskin::PlaneWaveSource{}, lat, 2, kFrequency);
  const auto layout = emskin::EMSLayout::uniform(lat.m_count, lat.n_count, uniform(rng, table.g_min(), table.g_max()));
  return emskin::layout_currents(layout, table, inc, lat, pc);
}

inline double field_distance(const emskin::FieldSample& a, const emskin::FieldSample& b) {
  return std::sqrt(std::norm(a.f_theta - b.f_theta) + std::norm(a.f_phi - b.f_phi));
}

inline std::vector<Property> geometry_properties() {
  std::vector<Property> out;
  out.push_back({"geometry.direction_cosines_unit_norm", 1000, [](Rng& rng) -> std::string {
                   const double th = uniform(rng, 0.0, oracle::kPi), ph = uniform(rng, 0.0, 2.0 * oracle::kPi);
                   const auto d = emskin::direction_cosines(th, ph);
                   const double n = d.u * d.u + d.v * d.v + d.w * d.w;
                   if (std::abs(n - 1.0) > 1e-12) return fmt("u^2+v^2+w^2 = %.17g", n);
                   const auto p = emskin::SphericalPoint::make(uniform(rng, 0.1, 100.0), th, ph);
                   const auto q = emskin::SphericalPoint::from_cartesian(p.cartesian());
                   if (std::abs(q.r - p.r) > 1e-12 * p.r || std::abs(q.theta - p.theta) > 1e-9)
                     return fmt("cartesian round trip moved (%g, %g)", p.r, p.theta);
                   return {};
                 }});
  out.push_back({"geometry.region_radii_monotone_and_ordered", 1000, [](Rng& rng) -> std::string {
                   const std::size_t m = pick(rng, 1, 300), n = pick(rng, 1, 300);
                   const double dx = uniform(rng, 1e-3, 2e-2), dy = uniform(rng, 1e-3, 2e-2);
                   const double f = uniform(rng, 1e9, 1e11);
                   const double lambda = oracle::kC0 / f;
                   const auto a = emskin::region_boundaries(emskin::build_lattice(m, n, dx, dy), lambda);
                   const auto b = emskin::region_boundaries(emskin::build_lattice(m + 1, n, dx, dy), lambda);
                   double rnf = 0.0, rff = 0.0;
                   oracle::region_radii(double(m), double(n), dx, dy, f, rnf, rff);
                   if (std::abs(a.r_nf - rnf) > 1e-12 * rnf || std::abs(a.r_ff - rff) > 1e-12 * rff)
                     return fmt("radii (%g, %g) vs reference (%g, %g)", a.r_nf, a.r_ff, rnf, rff);
                   const double d = std::hypot(double(m) * dx, double(n) * dy);
                   if (d >= 5.0 * lambda && a.r_ff < a.r_nf) return fmt("r_ff %g < r_nf %g", a.r_ff, a.r_nf);
                   if (d < 5.0 * lambda && (a.r_ff != std::max(10.0 * d, 10.0 * lambda) || a.r_nf != a.r_ff))
                     return fmt("small aperture radii (%g, %g) not set by 10 D / 10 lambda", a.r_nf, a.r_ff);
                   if (b.r_nf < a.r_nf || b.r_ff < a.r_ff) return "radii shrink when the lattice grows";
                   return {};
                 }});
  out.push_back({"geometry.lattice_centred_and_uniform", 1000, [](Rng& rng) -> std::string {
                   const std::size_t m = pick(rng, 1, 200), n = pick(rng, 1, 200);
                   const double dx = uniform(rng, 1e-3, 2e-2), dy = uniform(rng, 1e-3, 2e-2);
                   const auto lat = emskin::build_lattice(m, n, dx, dy);
                   double sx = 0.0, sy = 0.0;
                   for (double v : lat.x) sx += v;
                   for (double v : lat.y) sy += v;
                   if (std::abs(sx) > 1e-12 || std::abs(sy) > 1e-12) return fmt("centre sums %g, %g", sx, sy);
                   for (std::size_t i = 0; i < m; ++i)
                     if (std::abs(lat.x[i] + lat.x[m - 1 - i]) > 1e-12 * dx * double(m))
                       return fmt("x not symmetric at %zu", i);
                   for (std::size_t i = 0; i + 1 < n; ++i)
                     if (std::abs(lat.y[i + 1] - lat.y[i] - dy) > 1e-12 * dy * double(n))
                       return fmt("y spacing off at %zu", i);
                   const double d = std::hypot(double(m) * dx, double(n) * dy);
                   if (std::abs(lat.diameter - d) > 1e-12 * d) return "diameter mismatch";
                   return {};
                 }});
  return out;
}

inline std::vector<Property> incident_properties() {
  std::vector<Property> out;
  out.push_back({"incident.power_scaling_and_centre_phase", 1000, [](Rng& rng) -> std::string {
                   const auto pc = emskin::PhysicalConstants::at_frequency(kFrequency);
                   const auto lat = emskin::build_lattice(pick(rng, 1, 6), pick(rng, 1, 6), kDelta, kDelta);
                   const double dbm = uniform(rng, -10.0, 40.0);
                   const auto pos = emskin::SphericalPoint::make(uniform(rng, 0.5, 80.0), uniform(rng, 0.0, 1.2),
                                                                 uniform(rng, 0.0, 2.0 * oracle::kPi));
                   const auto horn = rng() & 1 ? emskin::HornDescriptor::low_gain() : emskin::HornDescriptor::high_gain();
                   const auto pol = rng() & 1 ? emskin::Polarization::x : emskin::Polarization::y;
                   const auto g1 = emskin::incident_field_on_aperture({pos, dbm, pol}, horn, lat, 2);
                   const auto g4 = emskin::incident_field_on_aperture({pos, dbm + 10.0 * std::log10(4.0), pol}, horn, lat, 2);
                   for (std::size_t i = 0; i < g1.cells.size(); ++i) {
                     const auto& a = g1.cells[i];
                     const auto& b = g4.cells[i];
                     const double ea = emskin::norm(a.e_mean), eb = emskin::norm(b.e_mean);
                     if (std::abs(eb - 2.0 * ea) > 1e-9 * eb) return fmt("4x power gives |E| ratio %.12g", eb / ea);
                     const cd rot = std::polar(1.0, pc.k0() * a.distance_center);
                     const double ec = emskin::norm(a.e_center);
                     for (const cd& c : a.e_center)
                       if (std::abs((c * rot).imag()) > 1e-9 * ec) return "centre phase differs from -k0 d";
                   }
                   // Friis inversion at a random probe, horn frame built here from the placement.
                   const emskin::HornPattern pattern(horn);
                   const emskin::Vec3 tx = pos.cartesian();
                   const emskin::Vec3 z = emskin::normalized(emskin::operator*(-1.0, tx));
                   const emskin::Vec3 axis = pol == emskin::Polarization::x ? emskin::Vec3{1, 0, 0} : emskin::Vec3{0, 1, 0};
                   const emskin::Vec3 y = emskin::normalized(emskin::operator-(axis, emskin::operator*(emskin::dot(axis, z), z)));
                   const emskin::Vec3 x = emskin::cross(y, z);
                   const emskin::Vec3 probe{uniform(rng, -0.5, 0.5), uniform(rng, -0.5, 0.5), uniform(rng, -0.2, 0.2)};
                   const emskin::Vec3 delta = emskin::operator-(probe, tx);
                   const double d = emskin::norm(delta);
                   const emskin::Vec3 k = emskin::operator*(1.0 / d, delta);
                   const double gain = pattern.gain(std::acos(std::clamp(emskin::dot(k, z), -1.0, 1.0)),
                                                    std::atan2(emskin::dot(k, y), emskin::dot(k, x)));
                   const auto eh = emskin::horn_field_at({pos, dbm, pol}, pattern, pc, probe);
                   const double density = std::pow(emskin::norm(eh[0]), 2) / (2.0 * oracle::eta0()) * 4.0 * oracle::kPi * d * d;
                   const double expected = std::pow(10.0, (dbm - 30.0) / 10.0) * gain;
                   if (std::abs(density - expected) > 1e-9 * expected) return fmt("power density %g vs P G %g", density, expected);
                   return {};
                 }});
  out.push_back({"incident.plane_wave_is_transverse_with_eta0", 1000, [](Rng& rng) -> std::string {
                   const auto lat = emskin::build_lattice(pick(rng, 1, 4), pick(rng, 1, 4), kDelta, kDelta);
                   emskin::PlaneWaveSource pw{uniform(rng, 0.0, 1.4), uniform(rng, 0.0, 2.0 * oracle::kPi),
                                              uniform(rng, 0.1, 10.0),
                                              rng() & 1 ? emskin::Polarization::x : emskin::Polarization::y};
                   const auto g = emskin::incident_field_on_aperture(pw, lat, 2, kFrequency);
                   const auto p = emskin::SphericalPoint::make(1.0, pw.theta, pw.phi);
                   const emskin::Vec3 k = emskin::operator*(-1.0, p.r_hat());
                   for (const auto& c : g.cells) {
                     const double e = emskin::norm(c.e_center), h = emskin::norm(c.h_center);
                     if (std::abs(e - pw.amplitude) > 1e-9 * pw.amplitude) return fmt("|E| = %g", e);
                     if (std::abs(h * oracle::eta0() - e) > 1e-9 * e) return fmt("eta |H| / |E| = %g", h * oracle::eta0() / e);
                     if (std::abs(emskin::dot(k, c.e_center)) > 1e-9 * e) return "E not transverse to k";
                   }
                   return {};
                 }});
  return out;
}

inline std::vector<Property> meta_atom_properties() {
  std::vector<Property> out;
  out.push_back({"meta_atom.pipeline_linear_in_incident_field", 1000, [](Rng& rng) -> std::string {
                   static const auto table = emskin::surrogate_table({});
                   const auto pc = emskin::PhysicalConstants::at_frequency(kFrequency);
                   const std::size_t m = pick(rng, 1, 6), n = pick(rng, 1, 6);
                   const auto lat = emskin::build_lattice(m, n, kDelta, kDelta);
                   emskin::EMSLayout layout{m, n, {}};
                   for (std::size_t i = 0; i < m * n; ++i) layout.g.push_back(uniform(rng, table.g_min(), table.g_max()));
                   const emskin::SourcePlacement sp{emskin::SphericalPoint::make(uniform(rng, 0.5, 20.0), uniform(rng, 0.0, 1.2), uniform(rng, 0.0, 6.28)),
                                                    20.0, rng() & 1 ? emskin::Polarization::x : emskin::Polarization::y};
                   const auto inc = emskin::incident_field_on_aperture(sp, emskin::HornDescriptor::low_gain(), lat, 2);
                   const cd alpha = std::polar(uniform(rng, 0.01, 100.0), uniform(rng, -3.0, 3.0));
                   auto scaled = inc;
                   for (auto& c : scaled.cells) {
                     for (auto* v : {&c.e_center, &c.h_center, &c.e_mean, &c.h_mean}) *v = emskin::operator*(alpha, *v);
                     for (auto& v : c.e_response) v = emskin::operator*(alpha, v);
                     for (auto& v : c.h_response) v = emskin::operator*(alpha, v);
                   }
                   const auto j1 = emskin::layout_currents(layout, table, inc, lat, pc);
                   const auto j2 = emskin::layout_currents(layout, table, scaled, lat, pc);
                   double peak = 0.0;
                   for (const auto& c : j2.j)
                     for (const auto& v : c) peak = std::max(peak, std::abs(v));
                   for (std::size_t i = 0; i < j1.j.size(); ++i)
                     for (std::size_t c = 0; c < 4; ++c)
                       if (std::abs(j2.j[i][c] - alpha * j1.j[i][c]) > 1e-12 * peak)
                         return fmt("cell %zu component %zu not scaled", i, c);
                   return {};
                 }});
  out.push_back({"meta_atom.currents_local_without_normal_terms", 1000, [](Rng& rng) -> std::string {
                   static const auto table = emskin::surrogate_table({});
                   const auto pc = emskin::PhysicalConstants::at_frequency(kFrequency);
                   const std::size_t m = pick(rng, 1, 6), n = pick(rng, 1, 6);
                   const auto lat = emskin::build_lattice(m, n, kDelta, kDelta);
                   emskin::EMSLayout layout{m, n, {}};
                   for (std::size_t i = 0; i < m * n; ++i) layout.g.push_back(uniform(rng, table.g_min(), table.g_max()));
                   emskin::PlaneWaveSource pw{uniform(rng, 0.0, 1.2), uniform(rng, 0.0, 6.28), 1.0, emskin::Polarization::x};
                   const auto inc = emskin::incident_field_on_aperture(pw, lat, 2, kFrequency);
                   const auto j1 = emskin::layout_currents(layout, table, inc, lat, pc);
                   const std::size_t changed = pick(rng, 0, m * n - 1);
                   layout.g[changed] = uniform(rng, table.g_min(), table.g_max());
                   const auto j2 = emskin::layout_currents(layout, table, inc, lat, pc);
                   for (std::size_t i = 0; i < j1.j.size(); ++i)
                     if (i != changed && j1.j[i] != j2.j[i]) return fmt("cell %zu changed with cell %zu", i, changed);
                   return {};
                 }});
  out.push_back({"meta_atom.lookup_lipschitz_and_exact_at_nodes", 1000, [](Rng& rng) -> std::string {
                   static const auto table = emskin::surrogate_table({});
                   const std::size_t node = pick(rng, 0, table.size() - 1);
                   const auto at = emskin::lookup_response(table, table.g[node]);
                   if (at.gamma.pp != table.gamma[node].pp || at.psi.e_xx != table.psi[node].e_xx)
                     return fmt("not exact at node %zu", node);
                   // Largest slope between neighbouring nodes bounds the interpolant's slope.
                   double slope = 0.0;
                   for (std::size_t i = 0; i + 1 < table.size(); ++i)
                     slope = std::max(slope, std::abs(table.gamma[i + 1].pp - table.gamma[i].pp) / (table.g[i + 1] - table.g[i]));
                   const double g = uniform(rng, table.g_min(), table.g_max());
                   const double h = std::min(table.g_max(), g + uniform(rng, 0.0, 1e-5));
                   const double d = std::abs(emskin::lookup_response(table, h).gamma.pp - emskin::lookup_response(table, g).gamma.pp);
                   if (d > slope * (h - g) * (1.0 + 1e-9) + 1e-15) return fmt("jump %g over %g", d, h - g);
                   return {};
                 }});
  return out;
}

inline std::vector<Property> field_properties() {
  std::vector<Property> out;
  out.push_back({"field.linear_in_currents", 1000, [](Rng& rng) -> std::string {
                   const auto pc = emskin::PhysicalConstants::at_frequency(kFrequency);
                   const std::size_t m = pick(rng, 1, 8), n = pick(rng, 1, 8);
                   const auto lat = emskin::build_lattice(m, n, kDelta, kDelta);
                   const auto ja = random_currents(rng, m, n), jb = random_currents(rng, m, n);
                   const cd a = random_cd(rng), b = random_cd(rng);
                   auto jc = ja;
                   for (std::size_t i = 0; i < jc.j.size(); ++i)
                     for (std::size_t c = 0; c < 4; ++c) jc.j[i][c] = a * ja.j[i][c] + b * jb.j[i][c];
                   const auto reg = emskin::region_boundaries(lat, pc.lambda0());
                   const auto p = emskin::SphericalPoint::from_signed(uniform(rng, reg.r_nf, 10.0 * reg.r_ff),
                                                                      uniform(rng, -1.5, 1.5), uniform(rng, 0.0, 6.28));
                   const auto fa = emskin::reflected_field(ja, lat, p, pc), fb = emskin::reflected_field(jb, lat, p, pc);
                   const auto fc = emskin::reflected_field(jc, lat, p, pc);
                   const double scale = envelope_scale(jc, lat, pc.lambda0()) / p.r;
                   const cd et = a * fa.f_theta + b * fb.f_theta, ep = a * fa.f_phi + b * fb.f_phi;
                   if (std::abs(et - fc.f_theta) > 1e-11 * scale || std::abs(ep - fc.f_phi) > 1e-11 * scale)
                     return "superposition violated";
                   return {};
                 }});
  out.push_back({"field.inverse_r_envelope_beyond_far_field", 1000, [](Rng& rng) -> std::string {
                   const auto pc = emskin::PhysicalConstants::at_frequency(kFrequency);
                   const std::size_t side = pick(rng, 2, 16);
                   const auto lat = emskin::build_lattice(side, side, kDelta, kDelta);
                   const auto j = broadside_currents(rng, lat, pc);
                   const auto reg = emskin::region_boundaries(lat, pc.lambda0());
                   const double r = reg.r_ff * uniform(rng, 1.0, 10.0);
                   const double th = uniform(rng, -1.2, 1.2), ph = uniform(rng, 0.0, 6.28);
                   const auto f1 = emskin::reflected_field(j, lat, emskin::SphericalPoint::from_signed(r, th, ph), pc);
                   const auto f2 = emskin::reflected_field(j, lat, emskin::SphericalPoint::from_signed(2.0 * r, th, ph), pc);
                   const double peak = emskin::reflected_field(j, lat, emskin::SphericalPoint::make(r, 0.0, 0.0), pc).magnitude();
                   const double d = std::abs(2.0 * f2.magnitude() - f1.magnitude()) / peak;
                   if (d > 1e-3) return fmt("2|F(2r)| - |F(r)| = %.3e of the beam peak at r = %.3g r_ff", d, r / reg.r_ff);
                   return {};
                 }});
  out.push_back({"field.far_field_gap_decays_as_inverse_r", 1000, [](Rng& rng) -> std::string {
                   const auto pc = emskin::PhysicalConstants::at_frequency(kFrequency);
                   const std::size_t m = pick(rng, 1, 12), n = pick(rng, 1, 12);
                   const auto lat = emskin::build_lattice(m, n, kDelta, kDelta);
                   const auto j = random_currents(rng, m, n);
                   const auto reg = emskin::region_boundaries(lat, pc.lambda0());
                   const double phi = uniform(rng, 0.0, 6.28);
                   auto gap = [&](double r) {
                     std::vector<emskin::SphericalPoint> pts;
                     for (int i = 0; i < 181; ++i) pts.push_back(emskin::SphericalPoint::from_signed(r, emskin::deg_to_rad(-90.0 + i), phi));
                     const auto g = emskin::reflected_field(j, lat, pts, pc);
                     const auto f = emskin::reflected_field_ff(j, lat, pts, pc);
                     double worst = 0.0, peak = 0.0;
                     for (std::size_t i = 0; i < pts.size(); ++i) {
                       worst = std::max(worst, field_distance(g[i], f[i]));
                       peak = std::max(peak, g[i].magnitude());
                     }
                     return worst / peak;
                   };
                   const double r = reg.r_ff * std::exp(uniform(rng, 0.0, std::log(100.0)));
                   const double g0 = gap(reg.r_ff), g = gap(r);
                   if (g * r > g0 * reg.r_ff * (1.0 + 1e-9))
                     return fmt("gap %.4e at r_ff, %.4e at %.3g r_ff (decay %.4g < %.4g)", g0, g, r / reg.r_ff, g0 / g, r / reg.r_ff);
                   return {};
                 }});
  out.push_back({"field.oracle_equivalence_broadside_16x16", 1000, [](Rng& rng) -> std::string {
                   const auto pc = emskin::PhysicalConstants::at_frequency(kFrequency);
                   static const auto lat = emskin::build_lattice(16, 16, kDelta, kDelta);
                   const auto j = broadside_currents(rng, lat, pc);
                   const auto reg = emskin::region_boundaries(lat, pc.lambda0());
                   const double r = reg.r_nf * std::exp(uniform(rng, 0.0, std::log(10.0 * reg.r_ff / reg.r_nf)));
                   const auto peak = emskin::oracle_field_converged(j, lat, emskin::SphericalPoint::make(r, 0.0, 0.0), pc);
                   const auto p = emskin::SphericalPoint::from_signed(r, uniform(rng, -1.5, 1.5), 0.0);
                   const auto o = emskin::oracle_field_converged(j, lat, p, pc);
                   const auto g = emskin::reflected_field(j, lat, p, pc);
                   const double e = std::abs(std::abs(g.f_phi) - std::abs(o.f_phi)) / std::abs(peak.f_phi);
                   if (e > 1e-2) return fmt("relative error %g at r = %g", e, r);
                   return {};
                 }});
  out.push_back({"field.mirror_symmetric_currents_give_mirror_magnitudes", 1000, [](Rng& rng) -> std::string {
                   const auto pc = emskin::PhysicalConstants::at_frequency(kFrequency);
                   const std::size_t m = pick(rng, 1, 12), n = pick(rng, 1, 12);
                   const auto lat = emskin::build_lattice(m, n, kDelta, kDelta);
                   auto j = random_currents(rng, m, n);
                   for (std::size_t a = 0; a < m; ++a)
                     for (std::size_t b = 0; b < n; ++b) j.j[lat.index(m - 1 - a, n - 1 - b)] = j.j[lat.index(a, b)];
                   const auto reg = emskin::region_boundaries(lat, pc.lambda0());
                   const double r = reg.r_nf * uniform(rng, 1.0, 50.0), th = uniform(rng, 0.0, 1.5), ph = uniform(rng, 0.0, 3.14);
                   const double fa = emskin::reflected_field(j, lat, emskin::SphericalPoint::make(r, th, ph), pc).magnitude();
                   const double fb = emskin::reflected_field(j, lat, emskin::SphericalPoint::make(r, th, ph + oracle::kPi), pc).magnitude();
                   if (std::abs(fa - fb) > 1e-9 * std::max(fa, fb) + 1e-15 * envelope_scale(j, lat, pc.lambda0()) / r)
                     return fmt("|F| %.12g vs mirrored %.12g", fa, fb);
                   return {};
                 }});
  out.push_back({"field.signed_theta_convention", 1000, [](Rng& rng) -> std::string {
                   const auto pc = emskin::PhysicalConstants::at_frequency(kFrequency);
                   const std::size_t m = pick(rng, 1, 8), n = pick(rng, 1, 8);
                   const auto lat = emskin::build_lattice(m, n, kDelta, kDelta);
                   const auto j = random_currents(rng, m, n);
                   const double r = uniform(rng, 1.0, 100.0), th = uniform(rng, 0.01, 1.5), ph = uniform(rng, 0.0, 3.0);
                   const auto a = emskin::reflected_field(j, lat, emskin::SphericalPoint::from_signed(r, -th, ph), pc);
                   const auto b = emskin::reflected_field(j, lat, emskin::SphericalPoint::make(r, th, ph + oracle::kPi), pc);
                   if (field_distance(a, b) > 1e-12 * (a.magnitude() + 1e-30)) return "signed theta disagrees with phi + pi";
                   return {};
                 }});
  return out;
}

inline std::vector<Property> synthesis_properties() {
  std::vector<Property> out;
  out.push_back({"synthesis.wrap_phase", 1000, [](Rng& rng) -> std::string {
                   const double x = uniform(rng, -1e3, 1e3);
                   const double w = emskin::wrap_phase(x);
                   if (!(w > -oracle::kPi && w <= oracle::kPi)) return fmt("wrap(%g) = %g outside (-pi, pi]", x, w);
                   if (std::abs(emskin::wrap_phase(w - x)) > 1e-9) return "not congruent mod 2 pi";
                   const double k = double(pick(rng, 0, 20)) - 10.0;
                   if (std::abs(emskin::wrap_phase(x + 2.0 * oracle::kPi * k) - w) > 1e-9 &&
                       std::abs(std::abs(emskin::wrap_phase(x + 2.0 * oracle::kPi * k) - w) - 2.0 * oracle::kPi) > 1e-9)
                     return "not 2 pi periodic";
                   if (std::abs(w - oracle::wrap(x)) > 1e-9 && std::abs(std::abs(w - oracle::wrap(x)) - 2.0 * oracle::kPi) > 1e-9)
                     return "disagrees with reference wrap";
                   return {};
                 }});
  out.push_back({"synthesis.usm_phase_tends_to_ffm", 1000, [](Rng& rng) -> std::string {
                   const auto pc = emskin::PhysicalConstants::at_frequency(kFrequency);
                   const std::size_t m = pick(rng, 1, 64), n = pick(rng, 1, 64);
                   const auto lat = emskin::build_lattice(m, n, kDelta, kDelta);
                   const auto reg = emskin::region_boundaries(lat, pc.lambda0());
                   const double th = uniform(rng, 0.0, 1.4), ph = uniform(rng, 0.0, 6.28);
                   const auto usm = emskin::target_phase_usm(lat, emskin::SphericalPoint::make(1e6 * reg.r_ff, th, ph), pc.lambda0());
                   const auto ffm = emskin::target_phase_ffm(lat, emskin::direction_cosines(th, ph), pc.lambda0());
                   for (std::size_t i = 0; i < usm.phase.size(); ++i)
                     if (std::abs(emskin::wrap_phase(usm.phase[i] - ffm.phase[i])) > 1e-4) return fmt("cell %zu differs", i);
                   return {};
                 }});
  out.push_back({"synthesis.usm_focus_dominates_ffm", 1000, [](Rng& rng) -> std::string {
                   static const auto table = emskin::surrogate_table({});
                   const auto pc = emskin::PhysicalConstants::at_frequency(kFrequency);
                   const std::size_t m = pick(rng, 1, 24), n = pick(rng, 1, 24);
                   const auto lat = emskin::build_lattice(m, n, kDelta, kDelta);
                   const emskin::SourcePlacement sp{emskin::SphericalPoint::make(uniform(rng, 5.0, 50.0), uniform(rng, 0.0, 1.0), uniform(rng, 0.0, 6.28)),
                                                    20.0, rng() & 1 ? emskin::Polarization::x : emskin::Polarization::y};
                   const auto inc = emskin::incident_field_on_aperture(sp, emskin::HornDescriptor::high_gain(), lat, 2);
                   const auto j = emskin::layout_currents(emskin::EMSLayout::uniform(m, n, uniform(rng, table.g_min(), table.g_max())),
                                                          table, inc, lat, pc);
                   const auto reg = emskin::region_boundaries(lat, pc.lambda0());
                   const double r = reg.r_nf + uniform(rng, 0.0, 1.0) * (reg.r_ff - reg.r_nf);
                   const auto rx = emskin::SphericalPoint::make(r, uniform(rng, 0.0, 1.2), uniform(rng, 0.0, 6.28));
                   const auto usm = emskin::apply_target_phase(j, emskin::target_phase_usm(lat, rx, pc.lambda0()));
                   const auto ffm = emskin::apply_target_phase(
                       j, emskin::target_phase_ffm(lat, emskin::direction_cosines(rx.theta, rx.phi), pc.lambda0()));
                   const double pu = std::pow(emskin::reflected_field(usm, lat, rx, pc).magnitude(), 2);
                   const double pf = std::pow(emskin::reflected_field(ffm, lat, rx, pc).magnitude(), 2);
                   const double bound = emskin::focused_power_bound(j, lat, rx, pc);
                   if (pu < pf * (1.0 - 1e-12)) return fmt("USM %g below FFM %g", pu, pf);
                   if (std::abs(pu - bound) > 1e-9 * bound) return fmt("USM %g vs bound %g", pu, bound);
                   return {};
                 }});
  out.push_back({"synthesis.cost_invariant_under_global_phase", 1000, [](Rng& rng) -> std::string {
                   const std::size_t m = pick(rng, 1, 10), n = pick(rng, 1, 10);
                   const auto lat = emskin::build_lattice(m, n, kDelta, kDelta);
                   const auto j = random_currents(rng, m, n);
                   emskin::TargetPhaseGrid t{m, n, {}};
                   for (std::size_t i = 0; i < m * n; ++i) t.phase.push_back(uniform(rng, -oracle::kPi, oracle::kPi));
                   const double alpha = uniform(rng, -10.0, 10.0);
                   auto jr = j;
                   for (auto& c : jr.j)
                     for (auto& v : c) v *= std::polar(1.0, alpha);
                   auto tr = t;
                   for (auto& p : tr.phase) p = emskin::wrap_phase(p + alpha);
                   const double c0 = emskin::phase_mismatch_cost(j, t, lat), c1 = emskin::phase_mismatch_cost(jr, tr, lat);
                   if (c0 < 0.0) return "negative cost";
                   if (std::abs(c0 - c1) > 1e-9 * (c0 + 1e-30)) return fmt("cost %g vs rotated %g", c0, c1);
                   double ref = 0.0;
                   for (double v : oracle::cell_costs(j, t, lat.cell_area(), emskin::kDefaultCostFloor)) ref += v;
                   if (std::abs(c0 - ref) > 1e-9 * (ref + 1e-30)) return fmt("cost %g vs reference %g", c0, ref);
                   return {};
                 }});
  out.push_back({"synthesis.swarm_within_5pct_of_separable_optimum", 1000, [](Rng& rng) -> std::string {
                   static const auto table = emskin::surrogate_table({});
                   const auto pc = emskin::PhysicalConstants::at_frequency(kFrequency);
                   const std::size_t m = pick(rng, 1, 16), n = pick(rng, 1, 16);
                   const auto lat = emskin::build_lattice(m, n, kDelta, kDelta);
                   const emskin::PlaneWaveSource pw{uniform(rng, 0.0, 1.0), uniform(rng, 0.0, 6.28), 1.0,
                                                    rng() & 1 ? emskin::Polarization::x : emskin::Polarization::y};
                   const auto inc = emskin::incident_field_on_aperture(pw, lat, 2, kFrequency);
                   const emskin::SynthesisProblem problem{&lat, &table, &inc, pc, emskin::kDefaultCostFloor};
                   const auto reg = emskin::region_boundaries(lat, pc.lambda0());
                   const auto rx = emskin::SphericalPoint::make(reg.r_nf * uniform(rng, 1.0, 3.0), uniform(rng, 0.0, 1.0), uniform(rng, 0.0, 6.28));
                   const auto t = emskin::target_phase_usm(lat, rx, pc.lambda0());
                   emskin::SwarmConfig swarm;
                   swarm.seed = rng();
                   const auto res = emskin::run_sbd_synthesis(problem, t, swarm);
                   for (std::size_t i = 1; i < res.trace.size(); ++i)
                     if (res.trace[i] > res.trace[i - 1]) return fmt("trace rises at %zu", i);
                   const auto best = oracle::exhaustive_optimum(problem, t);
                   // Absolute slack at rounding level for targets the table hits exactly.
                   const double slack = 1e-12 * lat.cell_area() * double(lat.cell_count());
                   if (res.cost > 1.05 * best.cost + slack)
                     return fmt("%zux%zu: swarm %.4e vs optimum %.4e", m, n, res.cost, best.cost);
                   return {};
                 }});
  return out;
}

inline std::vector<Property> harness_properties() {
  std::vector<Property> out;
  out.push_back({"harness.csv_bytes_independent_of_thread_count", 1000, [](Rng& rng) -> std::string {
                   nlohmann::json j;
                   j["frequency"] = kFrequency;
                   j["tx"] = {{"source", "horn"},
                              {"horn", "high_gain"},
                              {"position", {{"r", uniform(rng, 2.0, 20.0)}, {"theta_deg", uniform(rng, 0.0, 50.0)}, {"phi_deg", 180.0}}}};
                   const std::size_t side = pick(rng, 1, 20);
                   j["ems"] = {{"m", side}, {"n", side}, {"dx", kDelta}, {"dy", kDelta}, {"quad_order", 2}};
                   j["rx"] = {{"position", {{"r", uniform(rng, 2.0, 20.0)}, {"theta_deg", uniform(rng, 0.0, 50.0)}, {"phi_deg", 0.0}}},
                              {"map", {{"half_width", 0.2}, {"points", 3}}}};
                   j["run"] = {{"name", "prop"}, {"seed", rng() >> 1}, {"swarm", {{"particles", 4}, {"iterations", 8}}}};
                   const auto cfg = emskin::parse_config(j.dump(), ".");
                   const auto dir = std::filesystem::temp_directory_path() / "emskin_props";
                   auto emit_with = [&](unsigned threads, const char* sub) {
                     emskin::set_max_threads(threads);
                     const auto bundle = emskin::run_synthesize(cfg);
                     emskin::set_max_threads(0);
                     std::filesystem::remove_all(dir / sub);
                     std::filesystem::create_directories(dir / sub);
                     std::vector<std::string> contents;
                     for (const auto& path : emskin::emit(bundle, dir / sub, emskin::OutputFormat::csv)) {
                       if (path.extension() != ".csv") continue;
                       std::ifstream in(path, std::ios::binary);
                       contents.emplace_back(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
                     }
                     return std::make_pair(bundle.metadata.config_hash, contents);
                   };
                   const auto a = emit_with(1, "t1"), b = emit_with(4, "t4");
                   if (a.second.empty() || a.second != b.second) return "CSV bytes differ between 1 and 4 threads";
                   const auto canonical = emskin::parse_config(emskin::to_json(cfg).dump(), ".");
                   if (a.first != emskin::hash_hex(emskin::config_hash(canonical))) return "bundle hash differs from canonical hash";
                   return {};
                 }});
  out.push_back({"scenario.config_round_trip", 1000, [](Rng& rng) -> std::string {
                   nlohmann::json j;
                   j["frequency"] = uniform(rng, 1e9, 40e9);
                   if (rng() & 1) {
                     j["tx"] = {{"source", "horn"},
                                {"horn", rng() & 1 ? "low_gain" : "high_gain"},
                                {"position", {{"r", uniform(rng, 0.5, 100.0)}, {"theta_deg", uniform(rng, 0.0, 80.0)}, {"phi_deg", uniform(rng, 0.0, 359.0)}}},
                                {"power_dbm", uniform(rng, -10.0, 40.0)}};
                   } else {
                     j["tx"] = {{"source", "plane_wave"},
                                {"direction", {{"theta_deg", uniform(rng, 0.0, 80.0)}, {"phi_deg", uniform(rng, 0.0, 359.0)}}},
                                {"polarization", rng() & 1 ? "x" : "y"}};
                   }
                   j["ems"] = {{"m", pick(rng, 1, 200)}, {"n", pick(rng, 1, 200)}, {"dx", uniform(rng, 1e-3, 2e-2)},
                               {"dy", uniform(rng, 1e-3, 2e-2)}, {"quad_order", pick(rng, 1, 8)}};
                   j["rx"] = {{"position", {{"r", uniform(rng, 1.0, 100.0)}, {"theta_deg", uniform(rng, 0.0, 80.0)}, {"phi_deg", uniform(rng, 0.0, 359.0)}}}};
                   j["observation"]["cuts"] = nlohmann::json::array(
                       {{{"name", "near"}, {"r_factor", uniform(rng, 1.0, 3.0)}, {"relative_to", "r_nf"}, {"points", pick(rng, 1, 400)}},
                        {{"name", "map"}, {"type", "plane"}, {"r", uniform(rng, 1.0, 50.0)}, {"half_width", uniform(rng, 0.1, 2.0)}}});
                   j["run"] = {{"seed", rng() >> 1}, {"name", "case"}, {"swarm", {{"particles", pick(rng, 2, 40)}}}};
                   const auto a = emskin::parse_config(j.dump(), ".");
                   const auto b = emskin::parse_config(emskin::to_json(a).dump(), ".");
                   if (emskin::to_json(a) != emskin::to_json(b)) return "serialisation not stable";
                   if (emskin::config_hash(a) != emskin::config_hash(b)) return "hash changed on round trip";
                   j["run"]["seed"] = j["run"]["seed"].get<std::uint64_t>() ^ 1u;
                   if (emskin::config_hash(emskin::parse_config(j.dump(), ".")) == emskin::config_hash(a)) return "hash ignores seed";
                   return {};
                 }});
  return out;
}

inline std::vector<Property> all_properties() {
  std::vector<Property> out;
  for (auto* group : {geometry_properties, incident_properties, meta_atom_properties, field_properties,
                      synthesis_properties, harness_properties}) {
    auto part = group();
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

/// Each case draws from its own generator so failures reproduce by index. Stops at
/// the first counterexample.
inline Outcome run(const Property& p, std::uint64_t seed = 20240917) {
  Outcome o{p.name, p.cases, 0, {}};
  for (std::size_t i = 0; i < p.cases; ++i) {
    Rng rng(seed ^ (0x9e3779b97f4a7c15ull * (i + 1)));
    std::string msg;
    try {
      msg = p.check(rng);
    } catch (const std::exception& e) {
      msg = std::string("threw: ") + e.what();
    }
    if (!msg.empty()) {
      o.failures = 1;
      o.first_failure = "case " + std::to_string(i) + ": " + msg;
      break;
    }
  }
  return o;
}

}  // namespace props
