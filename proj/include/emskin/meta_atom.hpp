// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "emskin/geometry.hpp"
#include "emskin/incident.hpp"
#include "emskin/meta_atom_types.hpp"

namespace emskin {

/// Single-descriptor meta-atom response table. g is the patch side in metres.
struct MetaAtomTable {
  std::vector<double> g;
  std::vector<SusceptibilityTensors> psi;
  std::vector<ReflectionTensor> gamma;

  std::string substrate;
  double thickness = 0.0;
  double frequency = 0.0;

  std::size_t size() const { return g.size(); }
  double g_min() const { return g.front(); }
  double g_max() const { return g.back(); }

  /// Throws InvalidArgument unless g is strictly increasing with >= 2 entries
  /// and every stored value is finite.
  void validate() const;
};

struct MetaAtomResponse {
  SusceptibilityTensors psi;
  ReflectionTensor gamma;
};

/// Re/Im linear interpolation; exact at nodes. Out-of-range g throws RangeError.
MetaAtomResponse lookup_response(const MetaAtomTable& table, double g);

struct SurrogateParams {
  double g_min = 0.5e-3;
  double g_max = 8.0e-3;
  std::size_t entries = 64;
  double resonance_center = 4.5e-3;
  double q_factor = 10.0;
  double frequency = 17.5e9;
};

/// Lossless single-resonance table with an electric-only response:
///   Gamma(g) = exp(j phi(g)), phi(g) = pi + 2 atan(Q (g - g0) / g0),
///   psi_e_xx = psi_e_yy = 4j Gamma / (k0 (1 + Gamma)), all other psi zero.
/// With this psi the GSTC pipeline gives J^e = -2 Gamma E_t / eta0 at normal
/// incidence, whose radiation into z > 0 is Gamma times the incident wave.
MetaAtomTable surrogate_table(const SurrogateParams& params);

/// CSV with header g,re_psi_e_xx,im_psi_e_xx,...,re_gamma_ss,im_gamma_ss.
/// Lines starting with '#' carry `key=value` metadata (substrate, thickness,
/// frequency) and are otherwise ignored.
MetaAtomTable read_table_csv(const std::filesystem::path& path);
void write_table_csv(const MetaAtomTable& table, const std::filesystem::path& path);

/// Descriptor value per cell, row-major with the lattice index m * n_count + n.
struct EMSLayout {
  std::size_t m_count = 0;
  std::size_t n_count = 0;
  std::vector<double> g;

  static EMSLayout uniform(std::size_t m_count, std::size_t n_count, double value);
  double at(std::size_t m, std::size_t n) const { return g[m * n_count + n]; }
};

/// Throws RangeError naming the first cell outside the table interval.
void validate_layout(const EMSLayout& layout, const MetaAtomTable& table);

struct LayoutResponse {
  std::vector<SusceptibilityTensors> psi;
  std::vector<ReflectionTensor> gamma;
};

LayoutResponse lookup_layout(const EMSLayout& layout, const MetaAtomTable& table);

struct PolarizationGrid {
  std::size_t m_count = 0;
  std::size_t n_count = 0;
  std::vector<CVec3> p_e;  ///< C/m
  std::vector<CVec3> p_h;  ///< A
};

/// P^e = eps0 psi^e . E_avg, P^h = psi^h . H_avg, per cell.
PolarizationGrid polarization_densities(std::size_t m_count, std::size_t n_count,
                                        std::span<const SusceptibilityTensors> psi,
                                        std::span<const AveragedField> averaged);

PolarizationGrid polarization_densities(const EMSLayout& layout, const MetaAtomTable& table,
                                        std::span<const AveragedField> averaged);

enum CurrentComponent : std::size_t { kJex = 0, kJey = 1, kJhx = 2, kJhy = 3 };

/// Piecewise-constant current coefficients: J^e in A/m, J^h in V/m.
struct SurfaceCurrentGrid {
  std::size_t m_count = 0;
  std::size_t n_count = 0;
  std::vector<std::array<cd, 4>> j;  ///< per cell: Jex, Jey, Jhx, Jhy

  static SurfaceCurrentGrid zeros(std::size_t m_count, std::size_t n_count);
  std::size_t cell_count() const { return j.size(); }
};

/// J^e = j omega P_t^e - z x grad_t P_z^h, J^h = j omega mu0 P_t^h + (1/eps0) z x grad_t P_z^e.
/// grad_t uses second-order central differences on cell centres, second-order
/// one-sided stencils on the border (first-order with two cells, zero with one).
SurfaceCurrentGrid gstc_currents(const PolarizationGrid& polarization, const ApertureLattice& lattice,
                                 double omega);

/// lookup -> surface-averaged field -> polarization -> GSTC currents.
SurfaceCurrentGrid layout_currents(const EMSLayout& layout, const MetaAtomTable& table,
                                   const IncidentFieldGrid& incident, const ApertureLattice& lattice,
                                   const PhysicalConstants& constants);

}  // namespace emskin
