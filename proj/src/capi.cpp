// SPDX-License-Identifier: Apache-2.0
#include "emskin/emskin.h"

#include <cstdio>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "emskin/errors.hpp"
#include "emskin/experiments.hpp"
#include "emskin/field_engine.hpp"
#include "emskin/meta_atom.hpp"
#include "emskin/parallel.hpp"
#include "emskin/result_bundle.hpp"
#include "emskin/scenario.hpp"
#include "emskin/synthesis.hpp"

struct ems_scenario {
  emskin::ScenarioConfig config;
};

struct ems_bundle {
  emskin::ResultBundle bundle;
};

struct ems_table {
  emskin::MetaAtomTable table;
};

namespace {

thread_local std::string last_error;

ems_status status_of(emskin::ErrorKind kind) {
  switch (kind) {
    case emskin::ErrorKind::invalid_argument: return EMS_ERR_INVALID_ARGUMENT;
    case emskin::ErrorKind::range: return EMS_ERR_RANGE;
    case emskin::ErrorKind::config: return EMS_ERR_CONFIG;
    case emskin::ErrorKind::numerical: return EMS_ERR_NUMERICAL;
    case emskin::ErrorKind::io: return EMS_ERR_IO;
  }
  return EMS_ERR_INTERNAL;
}

template <class F>
ems_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return EMS_OK;
  } catch (const emskin::Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return EMS_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return EMS_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return EMS_ERR_INTERNAL;
  }
}

void need(const void* p, const char* name) {
  if (!p) throw emskin::InvalidArgument(std::string(name) + " must not be NULL");
}

const emskin::Table& table_of(const ems_bundle* b, const char* name) {
  need(b, "bundle");
  need(name, "table");
  return b->bundle.table(name);
}

const emskin::TableCell& cell_of(const emskin::Table& t, size_t row, size_t col) {
  if (row >= t.rows.size() || col >= t.columns.size())
    throw emskin::RangeError("cell (" + std::to_string(row) + ", " + std::to_string(col) + ") outside table '" +
                             t.name + "'");
  return t.rows[row][col];
}

emskin::SurfaceCurrentGrid currents_from(size_t m, size_t n, const double* data) {
  emskin::SurfaceCurrentGrid grid = emskin::SurfaceCurrentGrid::zeros(m, n);
  for (size_t i = 0; i < grid.j.size(); ++i)
    for (size_t k = 0; k < 4; ++k) grid.j[i][k] = {data[8 * i + 2 * k], data[8 * i + 2 * k + 1]};
  return grid;
}

template <class Run>
ems_status run_into(const ems_scenario* scenario, ems_bundle** out, Run&& run) {
  return guarded([&] {
    need(scenario, "scenario");
    need(out, "out");
    *out = nullptr;
    auto b = std::make_unique<ems_bundle>();
    b->bundle = run(scenario->config);
    *out = b.release();
  });
}

}  // namespace

extern "C" {

const char* ems_last_error(void) { return last_error.c_str(); }

const char* ems_version(void) { return emskin::kLibraryVersion; }

ems_status ems_set_threads(unsigned threads) {
  return guarded([&] { emskin::set_max_threads(threads); });
}

ems_status ems_region_boundaries(size_t m, size_t n, double dx, double dy, double frequency, double* r_nf,
                                 double* r_ff, double* diameter) {
  return guarded([&] {
    emskin::require(frequency > 0.0, "frequency must be positive");
    const auto lattice = emskin::build_lattice(m, n, dx, dy);
    const auto regions =
        emskin::region_boundaries(lattice, emskin::PhysicalConstants::at_frequency(frequency).lambda0());
    if (r_nf) *r_nf = regions.r_nf;
    if (r_ff) *r_ff = regions.r_ff;
    if (diameter) *diameter = lattice.diameter;
  });
}

ems_status ems_direction_cosines(double theta, double phi, double* u, double* v, double* w) {
  return guarded([&] {
    need(u, "u");
    need(v, "v");
    need(w, "w");
    const auto d = emskin::direction_cosines(theta, phi);
    *u = d.u;
    *v = d.v;
    *w = d.w;
  });
}

ems_status ems_scenario_load(const char* path, ems_scenario** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = nullptr;
    auto s = std::make_unique<ems_scenario>();
    s->config = emskin::load_config(path);
    *out = s.release();
  });
}

ems_status ems_scenario_set_seed(ems_scenario* scenario, uint64_t seed) {
  return guarded([&] {
    need(scenario, "scenario");
    scenario->config.run.seed = seed;
    scenario->config.run.swarm.seed = seed;
  });
}

ems_status ems_scenario_hash(const ems_scenario* scenario, char* buf, size_t buf_len) {
  return guarded([&] {
    need(scenario, "scenario");
    need(buf, "buf");
    const std::string h = emskin::hash_hex(emskin::config_hash(scenario->config));
    if (buf_len < h.size() + 1) throw emskin::InvalidArgument("hash buffer needs 17 bytes");
    std::memcpy(buf, h.c_str(), h.size() + 1);
  });
}

void ems_scenario_free(ems_scenario* scenario) { delete scenario; }

ems_status ems_run_analyze(const ems_scenario* scenario, ems_bundle** out) {
  return run_into(scenario, out, [](const emskin::ScenarioConfig& c) { return emskin::run_analyze(c); });
}

ems_status ems_run_synthesize(const ems_scenario* scenario, ems_bundle** out) {
  return run_into(scenario, out, [](const emskin::ScenarioConfig& c) { return emskin::run_synthesize(c); });
}

ems_status ems_run_sweep(const ems_scenario* scenario, ems_bundle** out) {
  return run_into(scenario, out, [](const emskin::ScenarioConfig& c) { return emskin::run_sweep(c); });
}

ems_status ems_bundle_emit(const ems_bundle* bundle, const char* dir, ems_format format) {
  return guarded([&] {
    need(bundle, "bundle");
    need(dir, "dir");
    if (format != EMS_FORMAT_CSV && format != EMS_FORMAT_JSON) throw emskin::InvalidArgument("unknown format");
    emskin::emit(bundle->bundle, dir,
                 format == EMS_FORMAT_CSV ? emskin::OutputFormat::csv : emskin::OutputFormat::json);
  });
}

size_t ems_bundle_table_count(const ems_bundle* bundle) { return bundle ? bundle->bundle.tables.size() : 0; }

const char* ems_bundle_table_name(const ems_bundle* bundle, size_t index) {
  if (!bundle || index >= bundle->bundle.tables.size()) return nullptr;
  return bundle->bundle.tables[index].name.c_str();
}

const char* ems_bundle_config_hash(const ems_bundle* bundle) {
  return bundle ? bundle->bundle.metadata.config_hash.c_str() : nullptr;
}

double ems_bundle_wall_time(const ems_bundle* bundle) { return bundle ? bundle->bundle.metadata.wall_time_s : 0.0; }

ems_status ems_bundle_table_shape(const ems_bundle* bundle, const char* table, size_t* rows, size_t* cols) {
  return guarded([&] {
    const auto& t = table_of(bundle, table);
    if (rows) *rows = t.rows.size();
    if (cols) *cols = t.columns.size();
  });
}

const char* ems_bundle_column_name(const ems_bundle* bundle, const char* table, size_t col) {
  const char* name = nullptr;
  guarded([&] {
    const auto& t = table_of(bundle, table);
    if (col < t.columns.size()) name = t.columns[col].c_str();
  });
  return name;
}

ems_status ems_bundle_table_value(const ems_bundle* bundle, const char* table, size_t row, size_t col,
                                  double* out) {
  return guarded([&] {
    need(out, "out");
    const auto& cell = cell_of(table_of(bundle, table), row, col);
    const double* v = std::get_if<double>(&cell);
    if (!v) throw emskin::InvalidArgument("cell is not numeric");
    *out = *v;
  });
}

ems_status ems_bundle_table_text(const ems_bundle* bundle, const char* table, size_t row, size_t col, char* buf,
                                 size_t buf_len) {
  return guarded([&] {
    need(buf, "buf");
    const auto& cell = cell_of(table_of(bundle, table), row, col);
    const std::string text =
        std::holds_alternative<double>(cell) ? emskin::format_number(std::get<double>(cell)) : std::get<std::string>(cell);
    if (buf_len < text.size() + 1) throw emskin::InvalidArgument("text buffer too small");
    std::memcpy(buf, text.c_str(), text.size() + 1);
  });
}

void ems_bundle_free(ems_bundle* bundle) { delete bundle; }

ems_status ems_table_surrogate(double g_min, double g_max, size_t entries, double resonance_center,
                               double q_factor, double frequency, ems_table** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    auto t = std::make_unique<ems_table>();
    t->table = emskin::surrogate_table({g_min, g_max, entries, resonance_center, q_factor, frequency});
    *out = t.release();
  });
}

ems_status ems_table_load_csv(const char* path, ems_table** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = nullptr;
    auto t = std::make_unique<ems_table>();
    t->table = emskin::read_table_csv(path);
    *out = t.release();
  });
}

ems_status ems_table_save_csv(const ems_table* table, const char* path) {
  return guarded([&] {
    need(table, "table");
    need(path, "path");
    emskin::write_table_csv(table->table, path);
  });
}

ems_status ems_table_range(const ems_table* table, double* g_min, double* g_max, size_t* entries) {
  return guarded([&] {
    need(table, "table");
    if (g_min) *g_min = table->table.g_min();
    if (g_max) *g_max = table->table.g_max();
    if (entries) *entries = table->table.size();
  });
}

ems_status ems_table_lookup(const ems_table* table, double g, double* psi, double* gamma) {
  return guarded([&] {
    need(table, "table");
    const auto r = emskin::lookup_response(table->table, g);
    if (psi) {
      const emskin::cd values[] = {r.psi.e_xx, r.psi.e_yy, r.psi.e_zz, r.psi.h_xx, r.psi.h_yy, r.psi.h_zz};
      for (size_t k = 0; k < 6; ++k) {
        psi[2 * k] = values[k].real();
        psi[2 * k + 1] = values[k].imag();
      }
    }
    if (gamma) {
      const emskin::cd values[] = {r.gamma.pp, r.gamma.ps, r.gamma.sp, r.gamma.ss};
      for (size_t k = 0; k < 4; ++k) {
        gamma[2 * k] = values[k].real();
        gamma[2 * k + 1] = values[k].imag();
      }
    }
  });
}

void ems_table_free(ems_table* table) { delete table; }

ems_status ems_reflected_field(size_t m, size_t n, double dx, double dy, double frequency, const double* currents,
                               double r, double theta, double phi, ems_field_model model, double* out, int* valid) {
  return guarded([&] {
    need(currents, "currents");
    need(out, "out");
    emskin::require(frequency > 0.0, "frequency must be positive");
    const auto lattice = emskin::build_lattice(m, n, dx, dy);
    const auto constants = emskin::PhysicalConstants::at_frequency(frequency);
    const auto grid = currents_from(m, n, currents);
    const auto obs = emskin::SphericalPoint::make(r, theta, phi);
    emskin::FieldSample s;
    switch (model) {
      case EMS_MODEL_GENERALIZED: s = emskin::reflected_field(grid, lattice, obs, constants); break;
      case EMS_MODEL_FAR_FIELD: s = emskin::reflected_field_ff(grid, lattice, obs, constants); break;
      case EMS_MODEL_ORACLE: s = emskin::oracle_field_converged(grid, lattice, obs, constants); break;
      default: throw emskin::InvalidArgument("unknown field model");
    }
    out[0] = s.f_theta.real();
    out[1] = s.f_theta.imag();
    out[2] = s.f_phi.real();
    out[3] = s.f_phi.imag();
    if (valid) *valid = s.valid ? 1 : 0;
  });
}

ems_status ems_target_phase(size_t m, size_t n, double dx, double dy, double frequency, double r, double theta,
                            double phi, ems_method method, double* out) {
  return guarded([&] {
    need(out, "out");
    emskin::require(frequency > 0.0, "frequency must be positive");
    const auto lattice = emskin::build_lattice(m, n, dx, dy);
    const double lambda = emskin::PhysicalConstants::at_frequency(frequency).lambda0();
    emskin::TargetPhaseGrid t;
    if (method == EMS_METHOD_USM) {
      t = emskin::target_phase_usm(lattice, emskin::SphericalPoint::make(r, theta, phi), lambda);
    } else if (method == EMS_METHOD_FFM) {
      t = emskin::target_phase_ffm(lattice, emskin::direction_cosines(theta, phi), lambda);
    } else {
      throw emskin::InvalidArgument("unknown synthesis method");
    }
    std::memcpy(out, t.phase.data(), t.phase.size() * sizeof(double));
  });
}

}  // extern "C"
