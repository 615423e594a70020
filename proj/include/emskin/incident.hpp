// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "emskin/geometry.hpp"
#include "emskin/meta_atom_types.hpp"
#include "emskin/quadrature.hpp"
#include "emskin/vec3.hpp"

namespace emskin {

/// Pyramidal horn geometry. c1 x c2 is the feeding waveguide, b1 (H-plane) x
/// b2 (E-plane) the aperture, rho_e / rho_h the flare slant lengths that set
/// the quadratic phase error across the aperture. beta is kept as metadata.
struct HornDescriptor {
  double c1 = 0.0;
  double c2 = 0.0;
  double beta = 0.0;
  double rho_e = 0.0;
  double rho_h = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;
  double g_max_dbi = 0.0;
  double frequency = 0.0;

  void validate() const;

  static HornDescriptor low_gain();   ///< 13.7 dBi, 17.5 GHz
  static HornDescriptor high_gain();  ///< 20.4 dBi, 17.5 GHz
};

/// Aperture-integral horn pattern, renormalised so that the boresight gain is
/// exactly 10^(g_max/10). The E-plane aperture is uniform with quadratic phase
/// k y^2 / (2 rho_e); the H-plane aperture carries the TE10 cosine taper with
/// quadratic phase k x^2 / (2 rho_h); a (1 + cos theta)/2 obliquity factor is
/// applied. theta/phi are measured in the horn frame (z = boresight, y = E-plane).
class HornPattern {
 public:
  explicit HornPattern(const HornDescriptor& horn);

  double gain(double theta, double phi) const;
  double boresight_gain() const { return boresight_gain_; }

 private:
  cd h_plane_integral(double s) const;
  cd e_plane_integral(double s) const;

  HornDescriptor horn_;
  GaussLegendre rule_;
  double k0_ = 0.0;
  double boresight_gain_ = 0.0;
  double normalisation_ = 0.0;
};

double horn_gain(const HornDescriptor& horn, double theta, double phi);

enum class Polarization { x, y };

struct SourcePlacement {
  SphericalPoint position;
  double tx_power_dbm = 0.0;
  Polarization polarization = Polarization::y;
};

/// Plane wave arriving from direction (theta, phi) with field amplitude in V/m.
struct PlaneWaveSource {
  double theta = 0.0;
  double phi = 0.0;
  double amplitude = 1.0;
  Polarization polarization = Polarization::y;
};

/// Cell-level view of the incident illumination. The reflected field is linear
/// in the four reflection-tensor entries, so the cell means of the per-entry
/// responses are stored and combined on demand.
struct CellIncidence {
  CVec3 e_center{};
  CVec3 h_center{};
  double distance_center = 0.0;  ///< source-to-centre distance, 0 for plane waves
  CVec3 e_mean{};
  CVec3 h_mean{};
  std::array<CVec3, 4> e_response{};  ///< order: pp, ps, sp, ss
  std::array<CVec3, 4> h_response{};
};

struct IncidentFieldGrid {
  std::size_t m_count = 0;
  std::size_t n_count = 0;
  int quad_order = 4;
  std::vector<CellIncidence> cells;
};

struct AveragedField {
  CVec3 e{};
  CVec3 h{};
};

/// Spherical-wave illumination by a horn. At distance d from the phase centre
/// |E| = sqrt(eta0 * P_tx * G / (2 pi)) / d with phase -k0 d.
IncidentFieldGrid incident_field_on_aperture(const SourcePlacement& placement,
                                             const HornDescriptor& horn,
                                             const ApertureLattice& lattice, int quad_order);

IncidentFieldGrid incident_field_on_aperture(const PlaneWaveSource& source,
                                             const ApertureLattice& lattice, int quad_order,
                                             double frequency);

/// Field incident at an arbitrary point (E, H) for a horn source.
std::array<CVec3, 2> horn_field_at(const SourcePlacement& placement, const HornPattern& pattern,
                                   const PhysicalConstants& constants, const Vec3& point);

AveragedField averaged_field(const CellIncidence& cell, const ReflectionTensor& gamma);

/// Per-cell mean of (F_inc + F_ref) / 2, F_ref built from Gamma.
std::vector<AveragedField> surface_averaged_field(const IncidentFieldGrid& grid,
                                                  std::span<const ReflectionTensor> reflection);

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

}  // namespace emskin
