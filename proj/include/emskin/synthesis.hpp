// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "emskin/field_engine.hpp"
#include "emskin/geometry.hpp"
#include "emskin/incident.hpp"
#include "emskin/meta_atom.hpp"

namespace emskin {

/// Maps an angle to (-pi, pi].
double wrap_phase(double phase);

/// One phase per cell, shared by all four current components; wrapped.
struct TargetPhaseGrid {
  std::size_t m_count = 0;
  std::size_t n_count = 0;
  std::vector<double> phase;
};

/// Phase-conjugation rule including the Fresnel term:
///   pi/(lambda r) ((x w)^2 + (y w)^2 + (x v - y u)^2) - 2 pi/lambda (x u + y v).
TargetPhaseGrid target_phase_usm(const ApertureLattice& lattice, const SphericalPoint& rx,
                                 double lambda0);

/// Linear far-field steering: -2 pi/lambda (x u + y v).
TargetPhaseGrid target_phase_ffm(const ApertureLattice& lattice, const DirectionCosines& direction,
                                 double lambda0);

inline constexpr double kDefaultCostFloor = 1e-12;

/// sum over components and cells of wrap(target - arg J)^2 * dx dy. Coefficients
/// with |J| below floor * (grid max |J|) are skipped.
double phase_mismatch_cost(const SurfaceCurrentGrid& currents, const TargetPhaseGrid& target,
                           const ApertureLattice& lattice, double floor = kDefaultCostFloor);

/// Received power in W: lambda^2 g_rx / (8 pi eta0) (|F_theta|^2 + |F_phi|^2).
double received_power(const FieldSample& field, double g_rx, double lambda0);

/// |F|^2 at the focus when every current carries the exact conjugate phase:
/// (1/(2 lambda r))^2 ([sum |gamma| w_theta . |J|]^2 + [sum |gamma| w_phi . |J|]^2).
double focused_power_bound(const SurfaceCurrentGrid& currents, const ApertureLattice& lattice,
                           const SphericalPoint& rx, const PhysicalConstants& constants);

/// Keeps |J| of every coefficient and replaces its phase by the cell target.
SurfaceCurrentGrid apply_target_phase(const SurfaceCurrentGrid& currents, const TargetPhaseGrid& target);

enum class SynthesisMethod { usm, ffm };

std::string to_string(SynthesisMethod method);

struct SwarmConfig {
  std::size_t particle_count = 10;
  std::size_t iteration_budget = 10000;
  double inertia = 0.729;
  double cognitive = 1.494;
  double social = 1.494;
  double velocity_clamp = 0.2;  ///< fraction of the descriptor range
  std::uint64_t seed = 1;
  std::size_t stall_window = 200;
  double stall_tolerance = 1e-8;

  void validate() const;
};

/// Everything the swarm needs to score a layout.
struct SynthesisProblem {
  const ApertureLattice* lattice = nullptr;
  const MetaAtomTable* table = nullptr;
  const IncidentFieldGrid* incident = nullptr;
  PhysicalConstants constants;
  double cost_floor = kDefaultCostFloor;
};

double layout_cost(const SynthesisProblem& problem, const EMSLayout& layout,
                   const TargetPhaseGrid& target);

struct SynthesisResult {
  SynthesisMethod method = SynthesisMethod::usm;
  EMSLayout layout;
  SurfaceCurrentGrid currents;
  double cost = 0.0;
  std::vector<double> trace;  ///< best-so-far cost; entry 0 is the initial swarm
  std::size_t iterations = 0;
};

/// Global-best particle swarm over the M*N descriptors. Deterministic for a
/// fixed seed regardless of the thread count.
SynthesisResult run_sbd_synthesis(const SynthesisProblem& problem, const TargetPhaseGrid& target,
                                  const SwarmConfig& swarm, SynthesisMethod method = SynthesisMethod::usm);

}  // namespace emskin
