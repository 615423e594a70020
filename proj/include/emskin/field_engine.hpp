// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "emskin/geometry.hpp"
#include "emskin/meta_atom.hpp"

namespace emskin {

/// Spherical E-field components at an observation point. `valid` is false when
/// the closed form is evaluated below the radiative near-field radius.
struct FieldSample {
  cd f_theta{};
  cd f_phi{};
  SphericalPoint at;
  bool valid = true;

  double magnitude() const { return std::sqrt(std::norm(f_theta) + std::norm(f_phi)); }
};

/// Per-cell aperture coefficient in m^2:
///   exp[-j pi/(lambda r) ((x w)^2 + (y w)^2 + (x v - y u)^2)]
///   * exp[j 2 pi/lambda (x u + y v)] * dx dy sinc(pi dx u/lambda) sinc(pi dy v/lambda)
cd gamma_coefficient(double x, double y, double r, const DirectionCosines& d, double dx, double dy,
                     double lambda0);

/// Same coefficient without the quadratic (Fresnel) phase.
cd gamma_coefficient_ff(double x, double y, const DirectionCosines& d, double dx, double dy,
                        double lambda0);

/// Closed-form reflected field valid from the radiative near field outwards.
FieldSample reflected_field(const SurfaceCurrentGrid& currents, const ApertureLattice& lattice,
                            const SphericalPoint& obs, const PhysicalConstants& constants);

/// Far-field predictor: the closed form with the quadratic phase dropped.
FieldSample reflected_field_ff(const SurfaceCurrentGrid& currents, const ApertureLattice& lattice,
                               const SphericalPoint& obs, const PhysicalConstants& constants);

std::vector<FieldSample> reflected_field(const SurfaceCurrentGrid& currents,
                                         const ApertureLattice& lattice,
                                         std::span<const SphericalPoint> points,
                                         const PhysicalConstants& constants);

std::vector<FieldSample> reflected_field_ff(const SurfaceCurrentGrid& currents,
                                            const ApertureLattice& lattice,
                                            std::span<const SphericalPoint> points,
                                            const PhysicalConstants& constants);

/// Brute-force reference: every cell is split into subsamples x subsamples
/// Gauss-Legendre points, each an electric and magnetic current element
/// radiating the exact free-space dipole fields (all 1/R, 1/R^2, 1/R^3 terms).
/// Throws NumericalError when the point lies in the aperture plane within one
/// cell of a source point.
FieldSample oracle_field(const SurfaceCurrentGrid& currents, const ApertureLattice& lattice,
                         const SphericalPoint& obs, int subsamples, const PhysicalConstants& constants);

struct OracleOptions {
  int initial_subsamples = 3;
  double tolerance = 1e-4;
  int max_subsamples = 48;
};

/// Doubles the subsample count until the relative change of |F| drops below
/// the tolerance. Throws NumericalError if max_subsamples is reached first.
FieldSample oracle_field_converged(const SurfaceCurrentGrid& currents, const ApertureLattice& lattice,
                                   const SphericalPoint& obs, const PhysicalConstants& constants,
                                   const OracleOptions& options = {});

std::vector<FieldSample> oracle_field_converged(const SurfaceCurrentGrid& currents,
                                                const ApertureLattice& lattice,
                                                std::span<const SphericalPoint> points,
                                                const PhysicalConstants& constants,
                                                const OracleOptions& options = {});

/// (|pred_phi| - |ref_phi|)^2 / max |ref_phi|^2 per point. Throws NumericalError
/// when the reference is identically zero.
std::vector<double> prediction_error_map(std::span<const FieldSample> predicted,
                                         std::span<const FieldSample> reference);

}  // namespace emskin
