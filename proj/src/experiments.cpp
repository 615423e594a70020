// SPDX-License-Identifier: Apache-2.0
#include "emskin/experiments.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "emskin/errors.hpp"

namespace emskin {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const char* kOracleNote =
    "analysis reference is oracle_field (exact free-space dipole superposition of the surface "
    "currents); it stands in for full-wave simulation, which is out of scope";

double dbm(double watts) { return watts > 0.0 ? watts_to_dbm(watts) : -std::numeric_limits<double>::infinity(); }

BundleMetadata metadata_for(const ScenarioConfig& c, const std::string& command) {
  BundleMetadata m;
  m.run_name = c.run.name;
  m.config_hash = hash_hex(config_hash(c));
  m.version = kLibraryVersion;
  m.seed = c.run.seed;
  m.command = command;
  m.notes.push_back(kOracleNote);
  return m;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::vector<SynthesisMethod> methods_of(MethodSelection s) {
  switch (s) {
    case MethodSelection::usm: return {SynthesisMethod::usm};
    case MethodSelection::ffm: return {SynthesisMethod::ffm};
    case MethodSelection::both: return {SynthesisMethod::usm, SynthesisMethod::ffm};
  }
  return {};
}

std::size_t dominant_component(const SurfaceCurrentGrid& j) {
  std::array<double, 4> total{};
  for (const auto& cell : j.j)
    for (std::size_t k = 0; k < 4; ++k) total[k] += std::abs(cell[k]);
  std::size_t best = 0;
  for (std::size_t k = 1; k < 4; ++k)
    if (total[k] > total[best]) best = k;
  return best;
}

const RxConfig& require_rx(const ScenarioConfig& c) {
  if (!c.rx) throw ConfigError("rx: block is required for synthesis");
  return *c.rx;
}

}  // namespace

MethodOutcome synthesize_method(const ScenarioConfig& c, const ScenarioModel& model, SynthesisMethod method) {
  const RxConfig& rx = require_rx(c);
  const double lambda = model.constants.lambda0();
  MethodOutcome out;
  out.method = method;
  out.target = method == SynthesisMethod::usm
                   ? target_phase_usm(model.lattice, rx.position, lambda)
                   : target_phase_ffm(model.lattice, direction_cosines(rx.position.theta, rx.position.phi), lambda);
  if (c.run.level == SynthesisLevel::synthesis) {
    SynthesisProblem problem{&model.lattice, &model.table, &model.incident, model.constants,
                             c.run.phase_cost_floor};
    SwarmConfig swarm = c.run.swarm;
    swarm.seed = c.run.seed;
    out.synthesis = run_sbd_synthesis(problem, out.target, swarm, method);
    out.currents = out.synthesis->currents;
  } else {
    const SurfaceCurrentGrid base =
        layout_currents(model.layout, model.table, model.incident, model.lattice, model.constants);
    out.currents = apply_target_phase(base, out.target);
  }
  const double g_rx = std::pow(10.0, rx.gain_dbi / 10.0);
  out.focus = reflected_field(out.currents, model.lattice, rx.position, model.constants);
  out.psi_rx_dbm = dbm(received_power(out.focus, g_rx, lambda));
  const double bound = focused_power_bound(out.currents, model.lattice, rx.position, model.constants);
  out.bound_dbm = dbm(lambda * lambda * g_rx / (8.0 * kPi * PhysicalConstants::eta0()) * bound);
  return out;
}

ResultBundle run_analyze(const ScenarioConfig& c) {
  const auto start = std::chrono::steady_clock::now();
  if (c.cuts.empty()) throw ConfigError("observation.cuts: at least one cut is required for analyze");
  const ScenarioModel model = build_model(c);
  const SurfaceCurrentGrid currents =
      layout_currents(model.layout, model.table, model.incident, model.lattice, model.constants);
  OracleOptions oracle;
  oracle.initial_subsamples = c.run.oracle_subsamples;
  oracle.tolerance = c.run.oracle_tolerance;
  oracle.max_subsamples = std::max(48, c.run.oracle_subsamples);

  ResultBundle bundle;
  bundle.metadata = metadata_for(c, "analyze");
  Table summary{"summary", {"cut", "r", "points", "valid", "max_error_generalized", "max_error_ff"}, {}};
  for (const CutConfig& cut : c.cuts) {
    const std::vector<SphericalPoint> points = cut_points(cut, model.regions);
    const auto gen = reflected_field(currents, model.lattice, points, model.constants);
    const auto ff = reflected_field_ff(currents, model.lattice, points, model.constants);
    const auto ref = oracle_field_converged(currents, model.lattice, points, model.constants, oracle);
    const auto err_gen = prediction_error_map(gen, ref);
    const auto err_ff = prediction_error_map(ff, ref);

    Table fields{cut.name + "_fields",
                 {"index", "coord_a", "coord_b", "r", "theta_deg", "phi_deg", "generalized_abs_phi", "ff_abs_phi",
                  "oracle_abs_phi", "generalized_abs", "ff_abs", "oracle_abs", "valid"},
                 {}};
    Table egen{cut.name + "_error_generalized", {"index", "error"}, {}};
    Table eff{cut.name + "_error_ff", {"index", "error"}, {}};
    std::vector<PlanePoint> plane;
    if (cut.kind == CutKind::plane)
      plane = plane_points(SphericalPoint::make(points.front().r, deg_to_rad(cut.theta_deg), deg_to_rad(cut.phi_deg)),
                           cut.half_width, cut.points);
    double max_gen = 0.0, max_ff = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      double a = 0.0, b = 0.0;
      if (cut.kind == CutKind::theta_cut) {
        const double t = cut.points == 1 ? 0.5 : static_cast<double>(i) / static_cast<double>(cut.points - 1);
        a = cut.theta_min_deg + t * (cut.theta_max_deg - cut.theta_min_deg);
      } else {
        a = plane[i].a;
        b = plane[i].b;
      }
      const SphericalPoint& p = points[i];
      fields.add_row({static_cast<double>(i), a, b, p.r, rad_to_deg(p.theta), rad_to_deg(p.phi),
                      std::abs(gen[i].f_phi), std::abs(ff[i].f_phi), std::abs(ref[i].f_phi), gen[i].magnitude(),
                      ff[i].magnitude(), ref[i].magnitude(), gen[i].valid ? 1.0 : 0.0});
      egen.add_row({static_cast<double>(i), err_gen[i]});
      eff.add_row({static_cast<double>(i), err_ff[i]});
      max_gen = std::max(max_gen, err_gen[i]);
      max_ff = std::max(max_ff, err_ff[i]);
    }
    summary.add_row({cut.name, points.front().r, static_cast<double>(points.size()),
                     gen.front().valid ? 1.0 : 0.0, max_gen, max_ff});
    bundle.tables.push_back(std::move(fields));
    bundle.tables.push_back(std::move(egen));
    bundle.tables.push_back(std::move(eff));
  }
  Table regions{"regions", {"diameter", "lambda0", "r_nf", "r_ff"}, {}};
  regions.add_row({model.lattice.diameter, model.constants.lambda0(), model.regions.r_nf, model.regions.r_ff});
  bundle.tables.push_back(std::move(regions));
  bundle.tables.push_back(std::move(summary));
  bundle.metadata.wall_time_s = seconds_since(start);
  return bundle;
}

ResultBundle run_synthesize(const ScenarioConfig& c) {
  const auto start = std::chrono::steady_clock::now();
  const RxConfig& rx = require_rx(c);
  const ScenarioModel model = build_model(c);
  const double lambda = model.constants.lambda0();
  const double g_rx = std::pow(10.0, rx.gain_dbi / 10.0);

  ResultBundle bundle;
  bundle.metadata = metadata_for(c, "synthesize");
  Table summary{"summary",
                {"method", "level", "psi_rx_dbm", "bound_dbm", "cost", "iterations", "rx_r", "rx_valid"},
                {}};
  std::vector<double> psi;
  for (SynthesisMethod method : methods_of(c.run.method)) {
    const MethodOutcome out = synthesize_method(c, model, method);
    const std::string tag = to_string(method);
    const std::size_t dom = dominant_component(out.currents);

    Table phases{"phases_" + tag, {"m", "n", "x", "y", "target_phase", "achieved_phase", "g"}, {}};
    for (std::size_t m = 0; m < model.lattice.m_count; ++m) {
      for (std::size_t n = 0; n < model.lattice.n_count; ++n) {
        const std::size_t i = model.lattice.index(m, n);
        const double g = out.synthesis ? out.synthesis->layout.g[i] : model.layout.g[i];
        phases.add_row({static_cast<double>(m), static_cast<double>(n), model.lattice.x[m], model.lattice.y[n],
                        out.target.phase[i], std::arg(out.currents.j[i][dom]), g});
      }
    }
    bundle.tables.push_back(std::move(phases));

    double cost = phase_mismatch_cost(out.currents, out.target, model.lattice, c.run.phase_cost_floor);
    double iterations = 0.0;
    if (out.synthesis) {
      Table layout{"layout_" + tag, {}, {}};
      for (std::size_t n = 0; n < model.lattice.n_count; ++n) layout.columns.push_back("n" + std::to_string(n));
      for (std::size_t m = 0; m < model.lattice.m_count; ++m) {
        std::vector<TableCell> row;
        for (std::size_t n = 0; n < model.lattice.n_count; ++n) row.emplace_back(out.synthesis->layout.at(m, n));
        layout.add_row(std::move(row));
      }
      bundle.tables.push_back(std::move(layout));
      Table trace{"trace_" + tag, {"iteration", "best_cost"}, {}};
      for (std::size_t i = 0; i < out.synthesis->trace.size(); ++i)
        trace.add_row({static_cast<double>(i), out.synthesis->trace[i]});
      bundle.tables.push_back(std::move(trace));
      cost = out.synthesis->cost;
      iterations = static_cast<double>(out.synthesis->iterations);
    }

    if (rx.map) {
      const auto grid = plane_points(rx.position, rx.map->half_width, rx.map->points);
      std::vector<SphericalPoint> pts;
      for (const auto& p : grid) pts.push_back(p.point);
      const auto fields = reflected_field(out.currents, model.lattice, pts, model.constants);
      Table map{"rx_map_" + tag, {"a", "b", "r", "theta_deg", "phi_deg", "power_dbm"}, {}};
      for (std::size_t i = 0; i < grid.size(); ++i)
        map.add_row({grid[i].a, grid[i].b, pts[i].r, rad_to_deg(pts[i].theta), rad_to_deg(pts[i].phi),
                     dbm(received_power(fields[i], g_rx, lambda))});
      bundle.tables.push_back(std::move(map));
    }
    summary.add_row({tag, c.run.level == SynthesisLevel::synthesis ? "synthesis" : "ideal", out.psi_rx_dbm,
                     out.bound_dbm, cost, iterations, rx.position.r, rx.position.r >= model.regions.r_nf ? 1.0 : 0.0});
    psi.push_back(out.psi_rx_dbm);
  }
  bundle.tables.push_back(std::move(summary));
  if (psi.size() == 2) {
    Table delta{"delta", {"delta_psi_db"}, {}};
    delta.add_row({psi[0] - psi[1]});
    bundle.tables.push_back(std::move(delta));
  }
  bundle.metadata.wall_time_s = seconds_since(start);
  return bundle;
}

ResultBundle run_sweep(const ScenarioConfig& c) {
  const auto start = std::chrono::steady_clock::now();
  if (!c.sweep) throw ConfigError("sweep: block is required for the sweep command");
  require_rx(c);
  if (c.sweep->axis == SweepAxis::r_tx && c.tx.source != SourceKind::horn)
    throw ConfigError("sweep.axis: r_tx requires a horn source");

  ResultBundle bundle;
  bundle.metadata = metadata_for(c, "sweep");
  Table table{"sweep",
              {"axis", "value", "r_nf", "r_ff", "rx_valid", "psi_usm_dbm", "psi_ffm_dbm", "delta_psi_db", "status"},
              {}};
  std::optional<ScenarioModel> shared;
  const bool reuse = c.sweep->axis == SweepAxis::r_rx || c.sweep->axis == SweepAxis::theta_rx;
  for (double value : c.sweep->values) {
    ScenarioConfig point = c;
    double r_nf = kNaN, r_ff = kNaN, valid = kNaN, usm = kNaN, ffm = kNaN, delta = kNaN;
    std::string status = "ok";
    try {
      switch (c.sweep->axis) {
        case SweepAxis::r_rx:
          point.rx->position = SphericalPoint::make(value, c.rx->position.theta, c.rx->position.phi);
          break;
        case SweepAxis::theta_rx:
          point.rx->position = SphericalPoint::make(c.rx->position.r, deg_to_rad(value), c.rx->position.phi);
          break;
        case SweepAxis::r_tx:
          point.tx.placement.position =
              SphericalPoint::make(value, c.tx.placement.position.theta, c.tx.placement.position.phi);
          break;
        case SweepAxis::aperture:
          if (!(value >= 1.0) || value != std::floor(value))
            throw InvalidArgument("aperture sweep values are cells per side and must be positive integers");
          point.ems.m = point.ems.n = static_cast<std::size_t>(value);
          break;
      }
      if (reuse && !shared) shared = build_model(c);
      const ScenarioModel local = reuse ? ScenarioModel{} : build_model(point);
      const ScenarioModel& model = reuse ? *shared : local;
      r_nf = model.regions.r_nf;
      r_ff = model.regions.r_ff;
      valid = point.rx->position.r >= r_nf ? 1.0 : 0.0;
      for (SynthesisMethod method : methods_of(c.run.method)) {
        const double p = synthesize_method(point, model, method).psi_rx_dbm;
        (method == SynthesisMethod::usm ? usm : ffm) = p;
      }
      if (c.run.method == MethodSelection::both) delta = usm - ffm;
    } catch (const Error& e) {
      status = e.what();
    }
    table.add_row({to_string(c.sweep->axis), value, r_nf, r_ff, valid, usm, ffm, delta, status});
  }
  bundle.tables.push_back(std::move(table));
  bundle.metadata.wall_time_s = seconds_since(start);
  return bundle;
}

}  // namespace emskin
