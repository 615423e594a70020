// SPDX-License-Identifier: Apache-2.0
#include "emskin/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "emskin/errors.hpp"
#include "emskin/parallel.hpp"

namespace emskin {

double wrap_phase(double phase) {
  double w = std::remainder(phase, 2.0 * kPi);
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

namespace {

TargetPhaseGrid make_target(const ApertureLattice& lattice) {
  return {lattice.m_count, lattice.n_count, std::vector<double>(lattice.cell_count())};
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::mt19937_64 stream_for(std::uint64_t seed, std::uint64_t particle, std::uint64_t iteration) {
  return std::mt19937_64(splitmix(splitmix(splitmix(seed) ^ particle) ^ iteration));
}

constexpr std::size_t kParallelCellThreshold = 256;

}  // namespace

TargetPhaseGrid target_phase_usm(const ApertureLattice& lattice, const SphericalPoint& rx,
                                 double lambda0) {
  require(rx.r > 0.0, "receiver distance must be positive");
  require(lambda0 > 0.0, "wavelength must be positive");
  const DirectionCosines d = direction_cosines(rx.theta, rx.phi);
  TargetPhaseGrid t = make_target(lattice);
  for (std::size_t m = 0; m < lattice.m_count; ++m) {
    for (std::size_t n = 0; n < lattice.n_count; ++n) {
      const double x = lattice.x[m], y = lattice.y[n];
      const double xw = x * d.w, yw = y * d.w, cr = x * d.v - y * d.u;
      t.phase[lattice.index(m, n)] = wrap_phase(kPi / (lambda0 * rx.r) * (xw * xw + yw * yw + cr * cr) -
                                                2.0 * kPi / lambda0 * (x * d.u + y * d.v));
    }
  }
  return t;
}

TargetPhaseGrid target_phase_ffm(const ApertureLattice& lattice, const DirectionCosines& d,
                                 double lambda0) {
  require(lambda0 > 0.0, "wavelength must be positive");
  TargetPhaseGrid t = make_target(lattice);
  for (std::size_t m = 0; m < lattice.m_count; ++m)
    for (std::size_t n = 0; n < lattice.n_count; ++n)
      t.phase[lattice.index(m, n)] =
          wrap_phase(-2.0 * kPi / lambda0 * (lattice.x[m] * d.u + lattice.y[n] * d.v));
  return t;
}

double phase_mismatch_cost(const SurfaceCurrentGrid& currents, const TargetPhaseGrid& target,
                           const ApertureLattice& lattice, double floor) {
  require(currents.j.size() == lattice.cell_count() && target.phase.size() == lattice.cell_count(),
          "current, target and lattice grids must be congruent");
  require(floor >= 0.0, "cost floor must be non-negative");
  double peak = 0.0;
  for (const auto& cell : currents.j)
    for (const cd& v : cell) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return 0.0;
  const double cutoff = floor * peak;
  double sum = 0.0;
  for (std::size_t i = 0; i < currents.j.size(); ++i) {
    for (const cd& v : currents.j[i]) {
      if (std::abs(v) <= cutoff || v == cd{}) continue;
      const double e = wrap_phase(target.phase[i] - std::arg(v));
      sum += e * e;
    }
  }
  return sum * lattice.cell_area();
}

double received_power(const FieldSample& field, double g_rx, double lambda0) {
  require(g_rx > 0.0, "receiver gain must be positive");
  return lambda0 * lambda0 * g_rx / (8.0 * kPi * PhysicalConstants::eta0()) *
         (std::norm(field.f_theta) + std::norm(field.f_phi));
}

double focused_power_bound(const SurfaceCurrentGrid& currents, const ApertureLattice& lattice,
                           const SphericalPoint& rx, const PhysicalConstants& constants) {
  require(currents.j.size() == lattice.cell_count(), "current grid does not match the lattice");
  const double lambda = constants.lambda0();
  const DirectionCosines d = direction_cosines(rx.theta, rx.phi);
  const double eta = PhysicalConstants::eta0();
  const double ct = std::cos(rx.theta), cp = std::cos(rx.phi), sp = std::sin(rx.phi);
  const std::array<double, 4> w_theta{eta * ct * cp, eta * ct * sp, -sp, cp};
  const std::array<double, 4> w_phi{-eta * sp, eta * cp, -ct * cp, -ct * sp};
  // |gamma| depends only on the direction.
  const double g_abs = std::abs(gamma_coefficient_ff(0.0, 0.0, d, lattice.dx, lattice.dy, lambda));
  double s_theta = 0.0, s_phi = 0.0;
  for (const auto& cell : currents.j) {
    for (std::size_t k = 0; k < 4; ++k) {
      s_theta += w_theta[k] * std::abs(cell[k]);
      s_phi += w_phi[k] * std::abs(cell[k]);
    }
  }
  const double scale = g_abs / (2.0 * lambda * rx.r);
  return scale * scale * (s_theta * s_theta + s_phi * s_phi);
}

SurfaceCurrentGrid apply_target_phase(const SurfaceCurrentGrid& currents, const TargetPhaseGrid& target) {
  require(currents.j.size() == target.phase.size(), "current and target grids must be congruent");
  SurfaceCurrentGrid out = currents;
  for (std::size_t i = 0; i < out.j.size(); ++i)
    for (cd& v : out.j[i]) v = std::polar(std::abs(v), target.phase[i]);
  return out;
}

std::string to_string(SynthesisMethod method) { return method == SynthesisMethod::usm ? "usm" : "ffm"; }

void SwarmConfig::validate() const {
  require(particle_count >= 2, "swarm particle_count must be at least 2");
  require(iteration_budget >= 1, "swarm iteration_budget must be at least 1");
  require(inertia > 0.0 && cognitive > 0.0 && social > 0.0, "swarm coefficients must be positive");
  require(velocity_clamp > 0.0 && velocity_clamp <= 1.0, "swarm velocity_clamp must lie in (0, 1]");
  require(stall_window >= 1, "swarm stall_window must be at least 1");
  require(stall_tolerance >= 0.0, "swarm stall_tolerance must be non-negative");
}

double layout_cost(const SynthesisProblem& problem, const EMSLayout& layout,
                   const TargetPhaseGrid& target) {
  const SurfaceCurrentGrid j =
      layout_currents(layout, *problem.table, *problem.incident, *problem.lattice, problem.constants);
  return phase_mismatch_cost(j, target, *problem.lattice, problem.cost_floor);
}

SynthesisResult run_sbd_synthesis(const SynthesisProblem& problem, const TargetPhaseGrid& target,
                                  const SwarmConfig& swarm, SynthesisMethod method) {
  require(problem.lattice && problem.table && problem.incident, "synthesis problem is incomplete");
  swarm.validate();
  const ApertureLattice& lattice = *problem.lattice;
  const MetaAtomTable& table = *problem.table;
  require(target.phase.size() == lattice.cell_count(), "target grid does not match the lattice");
  const double lo = table.g_min(), hi = table.g_max();
  require(hi > lo, "table descriptor range is degenerate");

  const std::size_t dim = lattice.cell_count();
  const std::size_t count = swarm.particle_count;
  const double vmax = swarm.velocity_clamp * (hi - lo);
  const bool parallel = dim >= kParallelCellThreshold;

  std::vector<std::vector<double>> pos(count, std::vector<double>(dim));
  std::vector<std::vector<double>> vel(count, std::vector<double>(dim));
  for (std::size_t b = 0; b < count; ++b) {
    auto rng = stream_for(swarm.seed, b, 0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t d = 0; d < dim; ++d) {
      pos[b][d] = lo + (hi - lo) * unit(rng);
      vel[b][d] = vmax * (2.0 * unit(rng) - 1.0);
    }
  }

  std::vector<double> cost(count);
  auto evaluate = [&] {
    auto body = [&](std::size_t b) {
      cost[b] = layout_cost(problem, {lattice.m_count, lattice.n_count, pos[b]}, target);
    };
    if (parallel) {
      parallel_for(count, body);
    } else {
      for (std::size_t b = 0; b < count; ++b) body(b);
    }
  };

  evaluate();
  std::vector<std::vector<double>> pbest = pos;
  std::vector<double> pbest_cost = cost;
  std::size_t best = 0;
  for (std::size_t b = 1; b < count; ++b)
    if (cost[b] < cost[best]) best = b;
  std::vector<double> gbest = pos[best];
  double gbest_cost = cost[best];

  SynthesisResult result;
  result.method = method;
  result.trace.push_back(gbest_cost);

  std::size_t it = 1;
  for (; it <= swarm.iteration_budget; ++it) {
    for (std::size_t b = 0; b < count; ++b) {
      auto rng = stream_for(swarm.seed, b, it);
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      for (std::size_t d = 0; d < dim; ++d) {
        const double r1 = unit(rng), r2 = unit(rng);
        double v = swarm.inertia * vel[b][d] + swarm.cognitive * r1 * (pbest[b][d] - pos[b][d]) +
                   swarm.social * r2 * (gbest[d] - pos[b][d]);
        v = std::clamp(v, -vmax, vmax);
        vel[b][d] = v;
        pos[b][d] = std::clamp(pos[b][d] + v, lo, hi);
      }
    }
    evaluate();
    for (std::size_t b = 0; b < count; ++b) {
      if (cost[b] < pbest_cost[b]) {
        pbest_cost[b] = cost[b];
        pbest[b] = pos[b];
      }
      if (cost[b] < gbest_cost) {
        gbest_cost = cost[b];
        gbest = pos[b];
      }
    }
    result.trace.push_back(gbest_cost);
    if (it >= swarm.stall_window) {
      const double past = result.trace[it - swarm.stall_window];
      if (past - gbest_cost <= swarm.stall_tolerance * std::abs(past)) break;
    }
  }
  result.iterations = std::min(it, swarm.iteration_budget);
  result.layout = {lattice.m_count, lattice.n_count, gbest};
  result.cost = gbest_cost;
  result.currents = layout_currents(result.layout, table, *problem.incident, lattice, problem.constants);
  return result;
}

}  // namespace emskin
