// SPDX-License-Identifier: Apache-2.0
#include "emskin/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "emskin/errors.hpp"

namespace emskin {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ConfigError(path + ": " + message);
}

std::string join(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

void check_object(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(path.empty() ? "<root>" : path, "expected an object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& item : j.items())
    if (!keys.count(item.key())) fail(join(path, item.key()), "unknown key");
}

const json* find(const json& j, const char* key) {
  const auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

double number(const json& j, const char* key, const std::string& path, std::optional<double> def = {}) {
  const json* v = find(j, key);
  if (!v) {
    if (def) return *def;
    fail(join(path, key), "required field is missing");
  }
  if (!v->is_number()) fail(join(path, key), "expected a number");
  const double d = v->get<double>();
  if (!std::isfinite(d)) fail(join(path, key), "must be finite");
  return d;
}

double positive(const json& j, const char* key, const std::string& path, std::optional<double> def = {}) {
  const double d = number(j, key, path, def);
  if (!(d > 0.0)) fail(join(path, key), "must be positive");
  return d;
}

std::uint64_t unsigned_int(const json& j, const char* key, const std::string& path,
                           std::optional<std::uint64_t> def = {}) {
  const json* v = find(j, key);
  if (!v) {
    if (def) return *def;
    fail(join(path, key), "required field is missing");
  }
  if (!v->is_number_integer() || (v->is_number_integer() && !v->is_number_unsigned() && v->get<long long>() < 0))
    fail(join(path, key), "expected a non-negative integer");
  return v->get<std::uint64_t>();
}

std::string string(const json& j, const char* key, const std::string& path,
                   std::optional<std::string> def = {}) {
  const json* v = find(j, key);
  if (!v) {
    if (def) return *def;
    fail(join(path, key), "required field is missing");
  }
  if (!v->is_string()) fail(join(path, key), "expected a string");
  return v->get<std::string>();
}

template <class Enum>
Enum choice(const json& j, const char* key, const std::string& path,
            std::initializer_list<std::pair<const char*, Enum>> options, std::optional<Enum> def = {}) {
  const json* v = find(j, key);
  if (!v && def) return *def;
  const std::string s = string(j, key, path);
  std::string names;
  for (const auto& [name, value] : options) {
    if (s == name) return value;
    names += names.empty() ? name : std::string(", ") + name;
  }
  fail(join(path, key), "expected one of {" + names + "}, got '" + s + "'");
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_relative()) path = base / path;
  return path.lexically_normal();
}

void require_file(const std::filesystem::path& file, const std::string& path) {
  if (!std::filesystem::is_regular_file(file)) throw IoError(path + ": file not found: " + file.string());
}

SphericalPoint position(const json& j, const std::string& path) {
  check_object(j, path, {"r", "theta_deg", "phi_deg"});
  const double r = positive(j, "r", path);
  const double theta = number(j, "theta_deg", path, 0.0);
  const double phi = number(j, "phi_deg", path, 0.0);
  if (theta < 0.0 || theta > 180.0) fail(join(path, "theta_deg"), "must lie in [0, 180]");
  return SphericalPoint::make(r, deg_to_rad(theta), deg_to_rad(phi));
}

Polarization polarization(const json& j, const std::string& path) {
  return choice<Polarization>(j, "polarization", path, {{"x", Polarization::x}, {"y", Polarization::y}},
                              Polarization::y);
}

HornDescriptor horn_from(const json& j, const std::string& path, double frequency, std::string& preset) {
  if (j.is_string()) {
    preset = j.get<std::string>();
    HornDescriptor h;
    if (preset == "low_gain") h = HornDescriptor::low_gain();
    else if (preset == "high_gain") h = HornDescriptor::high_gain();
    else fail(path, "expected 'low_gain', 'high_gain' or an object, got '" + preset + "'");
    h.frequency = frequency;
    return h;
  }
  preset.clear();
  check_object(j, path, {"c1", "c2", "beta", "rho_e", "rho_h", "b1", "b2", "g_max_dbi"});
  HornDescriptor h;
  h.c1 = positive(j, "c1", path);
  h.c2 = positive(j, "c2", path);
  h.beta = positive(j, "beta", path);
  h.rho_e = positive(j, "rho_e", path);
  h.rho_h = positive(j, "rho_h", path);
  h.b1 = positive(j, "b1", path);
  h.b2 = positive(j, "b2", path);
  h.g_max_dbi = positive(j, "g_max_dbi", path);
  h.frequency = frequency;
  return h;
}

TxConfig parse_tx(const json& j, double frequency) {
  const std::string path = "tx";
  TxConfig tx;
  tx.source = choice<SourceKind>(j.is_object() ? j : json::object(), "source", path,
                                 {{"horn", SourceKind::horn}, {"plane_wave", SourceKind::plane_wave}},
                                 SourceKind::horn);
  if (tx.source == SourceKind::horn) {
    check_object(j, path, {"source", "horn", "position", "power_dbm", "polarization"});
    const json* horn = find(j, "horn");
    tx.horn = horn ? horn_from(*horn, join(path, "horn"), frequency, tx.horn_preset)
                   : horn_from(json("high_gain"), join(path, "horn"), frequency, tx.horn_preset);
    const json* pos = find(j, "position");
    if (!pos) fail(join(path, "position"), "required field is missing");
    tx.placement.position = position(*pos, join(path, "position"));
    tx.placement.tx_power_dbm = number(j, "power_dbm", path, 20.0);
    tx.placement.polarization = polarization(j, path);
  } else {
    check_object(j, path, {"source", "direction", "amplitude", "polarization"});
    const json* dir = find(j, "direction");
    if (!dir) fail(join(path, "direction"), "required field is missing");
    const std::string dpath = join(path, "direction");
    check_object(*dir, dpath, {"theta_deg", "phi_deg"});
    const double theta = number(*dir, "theta_deg", dpath, 0.0);
    if (theta < 0.0 || theta >= 90.0) fail(join(dpath, "theta_deg"), "must lie in [0, 90)");
    tx.plane_wave.theta = deg_to_rad(theta);
    tx.plane_wave.phi = SphericalPoint::make(1.0, 0.0, deg_to_rad(number(*dir, "phi_deg", dpath, 0.0))).phi;
    tx.plane_wave.amplitude = positive(j, "amplitude", path, 1.0);
    tx.plane_wave.polarization = polarization(j, path);
  }
  return tx;
}

EmsConfig parse_ems(const json& j, const std::filesystem::path& base, double frequency) {
  const std::string path = "ems";
  check_object(j, path, {"m", "n", "dx", "dy", "quad_order", "table", "layout"});
  EmsConfig ems;
  ems.m = unsigned_int(j, "m", path);
  ems.n = unsigned_int(j, "n", path);
  if (ems.m < 1) fail(join(path, "m"), "must be at least 1");
  if (ems.n < 1) fail(join(path, "n"), "must be at least 1");
  ems.dx = positive(j, "dx", path);
  ems.dy = positive(j, "dy", path);
  const std::uint64_t q = unsigned_int(j, "quad_order", path, 4);
  if (q < 1 || q > 32) fail(join(path, "quad_order"), "must lie in [1, 32]");
  ems.quad_order = static_cast<int>(q);

  ems.table.surrogate.frequency = frequency;
  if (const json* t = find(j, "table")) {
    const std::string tpath = join(path, "table");
    check_object(*t, tpath, {"file", "surrogate"});
    if (find(*t, "file") && find(*t, "surrogate")) fail(tpath, "give either 'file' or 'surrogate', not both");
    if (find(*t, "file")) {
      ems.table.file = resolve(base, string(*t, "file", tpath));
      require_file(*ems.table.file, join(tpath, "file"));
    } else if (const json* s = find(*t, "surrogate")) {
      const std::string spath = join(tpath, "surrogate");
      check_object(*s, spath, {"g_min", "g_max", "entries", "resonance_center", "q_factor"});
      SurrogateParams& p = ems.table.surrogate;
      p.g_min = positive(*s, "g_min", spath, p.g_min);
      p.g_max = positive(*s, "g_max", spath, p.g_max);
      p.entries = unsigned_int(*s, "entries", spath, p.entries);
      p.resonance_center = positive(*s, "resonance_center", spath, p.resonance_center);
      p.q_factor = positive(*s, "q_factor", spath, p.q_factor);
      if (p.g_min >= p.g_max) fail(join(spath, "g_max"), "must exceed g_min");
      if (p.resonance_center <= p.g_min || p.resonance_center >= p.g_max)
        fail(join(spath, "resonance_center"), "must lie strictly inside (g_min, g_max)");
      if (p.entries < 16) fail(join(spath, "entries"), "must be at least 16");
    }
  }
  if (const json* l = find(j, "layout")) {
    const std::string lpath = join(path, "layout");
    check_object(*l, lpath, {"file", "uniform"});
    if (find(*l, "file") && find(*l, "uniform")) fail(lpath, "give either 'file' or 'uniform', not both");
    if (find(*l, "file")) {
      ems.layout.file = resolve(base, string(*l, "file", lpath));
      require_file(*ems.layout.file, join(lpath, "file"));
    } else if (find(*l, "uniform")) {
      ems.layout.uniform = positive(*l, "uniform", lpath);
    }
  }
  return ems;
}

RxConfig parse_rx(const json& j) {
  const std::string path = "rx";
  check_object(j, path, {"gain_dbi", "position", "map"});
  RxConfig rx;
  rx.gain_dbi = number(j, "gain_dbi", path, HornDescriptor::high_gain().g_max_dbi);
  const json* pos = find(j, "position");
  if (!pos) fail(join(path, "position"), "required field is missing");
  rx.position = position(*pos, join(path, "position"));
  if (const json* m = find(j, "map")) {
    const std::string mpath = join(path, "map");
    check_object(*m, mpath, {"half_width", "points"});
    RxMapConfig map;
    map.half_width = positive(*m, "half_width", mpath);
    map.points = unsigned_int(*m, "points", mpath);
    if (map.points < 1) fail(join(mpath, "points"), "must be at least 1");
    rx.map = map;
  }
  return rx;
}

CutConfig parse_cut(const json& j, const std::string& path, std::size_t index) {
  CutConfig cut;
  cut.kind = choice<CutKind>(j.is_object() ? j : json::object(), "type", path,
                             {{"theta_cut", CutKind::theta_cut}, {"plane", CutKind::plane}},
                             CutKind::theta_cut);
  if (cut.kind == CutKind::theta_cut) {
    check_object(j, path, {"name", "type", "r", "r_factor", "relative_to", "phi_deg", "theta_min_deg",
                           "theta_max_deg", "points"});
    cut.theta_min_deg = number(j, "theta_min_deg", path, -90.0);
    cut.theta_max_deg = number(j, "theta_max_deg", path, 90.0);
    if (cut.theta_min_deg < -90.0 || cut.theta_max_deg > 90.0 || cut.theta_min_deg > cut.theta_max_deg)
      fail(join(path, "theta_min_deg"), "theta range must satisfy -90 <= min <= max <= 90");
    cut.points = unsigned_int(j, "points", path, 181);
  } else {
    check_object(j, path, {"name", "type", "r", "r_factor", "relative_to", "theta_deg", "phi_deg",
                           "half_width", "points"});
    cut.theta_deg = number(j, "theta_deg", path, 0.0);
    if (cut.theta_deg < 0.0 || cut.theta_deg >= 90.0) fail(join(path, "theta_deg"), "must lie in [0, 90)");
    cut.half_width = positive(j, "half_width", path);
    cut.points = unsigned_int(j, "points", path, 21);
  }
  if (cut.points < 1) fail(join(path, "points"), "must be at least 1");
  cut.name = string(j, "name", path, "cut" + std::to_string(index));
  if (cut.name.empty() || cut.name.find_first_of("/\\ ") != std::string::npos)
    fail(join(path, "name"), "must be non-empty without spaces or path separators");
  cut.phi_deg = number(j, "phi_deg", path, 0.0);
  if (find(j, "r")) {
    if (find(j, "r_factor") || find(j, "relative_to")) fail(path, "give either 'r' or 'r_factor' + 'relative_to'");
    cut.r = positive(j, "r", path);
  } else {
    cut.r_factor = positive(j, "r_factor", path);
    cut.relative_to = choice<std::string>(j, "relative_to", path, {{"r_nf", "r_nf"}, {"r_ff", "r_ff"}});
  }
  return cut;
}

SwarmConfig parse_swarm(const json& j, const std::string& path) {
  check_object(j, path, {"particles", "iterations", "inertia", "cognitive", "social", "velocity_clamp",
                         "stall_window", "stall_tolerance"});
  SwarmConfig s;
  s.particle_count = unsigned_int(j, "particles", path, s.particle_count);
  s.iteration_budget = unsigned_int(j, "iterations", path, s.iteration_budget);
  s.inertia = positive(j, "inertia", path, s.inertia);
  s.cognitive = positive(j, "cognitive", path, s.cognitive);
  s.social = positive(j, "social", path, s.social);
  s.velocity_clamp = positive(j, "velocity_clamp", path, s.velocity_clamp);
  s.stall_window = unsigned_int(j, "stall_window", path, s.stall_window);
  s.stall_tolerance = number(j, "stall_tolerance", path, s.stall_tolerance);
  try {
    s.validate();
  } catch (const InvalidArgument& e) {
    fail(path, e.what());
  }
  return s;
}

RunConfig parse_run(const json& j) {
  const std::string path = "run";
  check_object(j, path, {"name", "seed", "method", "level", "swarm", "oracle_subsamples", "oracle_tolerance",
                         "phase_cost_floor"});
  RunConfig run;
  run.name = string(j, "name", path, run.name);
  if (run.name.empty() || run.name.find_first_of("/\\ ") != std::string::npos)
    fail(join(path, "name"), "must be non-empty without spaces or path separators");
  run.seed = unsigned_int(j, "seed", path, run.seed);
  run.method = choice<MethodSelection>(
      j, "method", path,
      {{"usm", MethodSelection::usm}, {"ffm", MethodSelection::ffm}, {"both", MethodSelection::both}},
      MethodSelection::both);
  run.level = choice<SynthesisLevel>(
      j, "level", path, {{"synthesis", SynthesisLevel::synthesis}, {"ideal", SynthesisLevel::ideal}},
      SynthesisLevel::synthesis);
  if (const json* s = find(j, "swarm")) run.swarm = parse_swarm(*s, join(path, "swarm"));
  const std::uint64_t sub = unsigned_int(j, "oracle_subsamples", path, 3);
  if (sub < 1 || sub > 48) fail(join(path, "oracle_subsamples"), "must lie in [1, 48]");
  run.oracle_subsamples = static_cast<int>(sub);
  run.oracle_tolerance = positive(j, "oracle_tolerance", path, run.oracle_tolerance);
  run.phase_cost_floor = number(j, "phase_cost_floor", path, run.phase_cost_floor);
  if (run.phase_cost_floor < 0.0 || run.phase_cost_floor >= 1.0)
    fail(join(path, "phase_cost_floor"), "must lie in [0, 1)");
  run.swarm.seed = run.seed;
  return run;
}

SweepConfig parse_sweep(const json& j) {
  const std::string path = "sweep";
  check_object(j, path, {"axis", "values"});
  SweepConfig sweep;
  sweep.axis = choice<SweepAxis>(j, "axis", path,
                                 {{"r_rx", SweepAxis::r_rx},
                                  {"theta_rx", SweepAxis::theta_rx},
                                  {"r_tx", SweepAxis::r_tx},
                                  {"aperture", SweepAxis::aperture}});
  const json* values = find(j, "values");
  if (!values || !values->is_array() || values->empty())
    fail(join(path, "values"), "expected a non-empty array of numbers");
  for (std::size_t i = 0; i < values->size(); ++i) {
    const json& v = (*values)[i];
    if (!v.is_number() || !std::isfinite(v.get<double>()))
      fail(join(path, "values") + "[" + std::to_string(i) + "]", "expected a finite number");
    sweep.values.push_back(v.get<double>());
  }
  return sweep;
}

std::string line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

json position_json(const SphericalPoint& p) {
  return {{"r", p.r}, {"theta_deg", rad_to_deg(p.theta)}, {"phi_deg", rad_to_deg(p.phi)}};
}

const char* polarization_name(Polarization p) { return p == Polarization::x ? "x" : "y"; }

std::vector<double> read_layout_rows(const std::filesystem::path& file, std::size_t& rows, std::size_t& cols) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open layout file: " + file.string());
  std::vector<double> values;
  rows = cols = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#' || line == "\r") continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      while (end && (*end == ' ' || *end == '\r')) ++end;
      if (cell.empty() || *end != '\0') {
        numeric = false;
        break;
      }
      row.push_back(v);
    }
    if (!numeric) {
      if (rows == 0 && values.empty()) continue;  // header
      throw ConfigError(file.string() + ":" + std::to_string(line_no) + ": layout row is not numeric");
    }
    if (cols == 0) cols = row.size();
    if (row.size() != cols)
      throw ConfigError(file.string() + ":" + std::to_string(line_no) + ": ragged layout row");
    values.insert(values.end(), row.begin(), row.end());
    ++rows;
  }
  return values;
}

}  // namespace

ScenarioConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config syntax error at " + line_column(text, e.byte) + ": " + e.what());
  }
  check_object(root, "", {"frequency", "tx", "ems", "rx", "observation", "run", "sweep"});
  ScenarioConfig c;
  c.frequency = positive(root, "frequency", "");
  const json* tx = find(root, "tx");
  if (!tx) fail("tx", "required block is missing");
  c.tx = parse_tx(*tx, c.frequency);
  const json* ems = find(root, "ems");
  if (!ems) fail("ems", "required block is missing");
  c.ems = parse_ems(*ems, base_dir, c.frequency);
  if (const json* rx = find(root, "rx")) c.rx = parse_rx(*rx);
  if (const json* obs = find(root, "observation")) {
    check_object(*obs, "observation", {"cuts"});
    const json* cuts = find(*obs, "cuts");
    if (!cuts || !cuts->is_array()) fail("observation.cuts", "expected an array");
    for (std::size_t i = 0; i < cuts->size(); ++i)
      c.cuts.push_back(parse_cut((*cuts)[i], "observation.cuts[" + std::to_string(i) + "]", i));
    std::set<std::string> names;
    for (const auto& cut : c.cuts)
      if (!names.insert(cut.name).second) fail("observation.cuts", "duplicate cut name '" + cut.name + "'");
  }
  c.run = parse_run(find(root, "run") ? root["run"] : json::object());
  if (const json* sweep = find(root, "sweep")) c.sweep = parse_sweep(*sweep);
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file: " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.has_parent_path() ? path.parent_path() : std::filesystem::path("."));
}

json to_json(const ScenarioConfig& c) {
  json root;
  root["frequency"] = c.frequency;

  json tx;
  if (c.tx.source == SourceKind::horn) {
    tx["source"] = "horn";
    if (!c.tx.horn_preset.empty()) {
      tx["horn"] = c.tx.horn_preset;
    } else {
      const HornDescriptor& h = c.tx.horn;
      tx["horn"] = {{"c1", h.c1}, {"c2", h.c2}, {"beta", h.beta}, {"rho_e", h.rho_e}, {"rho_h", h.rho_h},
                    {"b1", h.b1}, {"b2", h.b2}, {"g_max_dbi", h.g_max_dbi}};
    }
    tx["position"] = position_json(c.tx.placement.position);
    tx["power_dbm"] = c.tx.placement.tx_power_dbm;
    tx["polarization"] = polarization_name(c.tx.placement.polarization);
  } else {
    tx["source"] = "plane_wave";
    tx["direction"] = {{"theta_deg", rad_to_deg(c.tx.plane_wave.theta)},
                       {"phi_deg", rad_to_deg(c.tx.plane_wave.phi)}};
    tx["amplitude"] = c.tx.plane_wave.amplitude;
    tx["polarization"] = polarization_name(c.tx.plane_wave.polarization);
  }
  root["tx"] = tx;

  json ems{{"m", c.ems.m}, {"n", c.ems.n}, {"dx", c.ems.dx}, {"dy", c.ems.dy}, {"quad_order", c.ems.quad_order}};
  if (c.ems.table.file) {
    ems["table"] = {{"file", c.ems.table.file->string()}};
  } else {
    const SurrogateParams& p = c.ems.table.surrogate;
    ems["table"] = {{"surrogate",
                     {{"g_min", p.g_min}, {"g_max", p.g_max}, {"entries", p.entries},
                      {"resonance_center", p.resonance_center}, {"q_factor", p.q_factor}}}};
  }
  if (c.ems.layout.file) ems["layout"] = {{"file", c.ems.layout.file->string()}};
  else if (c.ems.layout.uniform) ems["layout"] = {{"uniform", *c.ems.layout.uniform}};
  root["ems"] = ems;

  if (c.rx) {
    json rx{{"gain_dbi", c.rx->gain_dbi}, {"position", position_json(c.rx->position)}};
    if (c.rx->map) rx["map"] = {{"half_width", c.rx->map->half_width}, {"points", c.rx->map->points}};
    root["rx"] = rx;
  }

  if (!c.cuts.empty()) {
    json cuts = json::array();
    for (const auto& cut : c.cuts) {
      json jc{{"name", cut.name}, {"phi_deg", cut.phi_deg}, {"points", cut.points}};
      if (cut.kind == CutKind::theta_cut) {
        jc["type"] = "theta_cut";
        jc["theta_min_deg"] = cut.theta_min_deg;
        jc["theta_max_deg"] = cut.theta_max_deg;
      } else {
        jc["type"] = "plane";
        jc["theta_deg"] = cut.theta_deg;
        jc["half_width"] = cut.half_width;
      }
      if (cut.r) {
        jc["r"] = *cut.r;
      } else {
        jc["r_factor"] = cut.r_factor;
        jc["relative_to"] = cut.relative_to;
      }
      cuts.push_back(jc);
    }
    root["observation"] = {{"cuts", cuts}};
  }

  const RunConfig& r = c.run;
  const char* methods[] = {"usm", "ffm", "both"};
  root["run"] = {{"name", r.name},
                 {"seed", r.seed},
                 {"method", methods[static_cast<int>(r.method)]},
                 {"level", r.level == SynthesisLevel::synthesis ? "synthesis" : "ideal"},
                 {"swarm",
                  {{"particles", r.swarm.particle_count},
                   {"iterations", r.swarm.iteration_budget},
                   {"inertia", r.swarm.inertia},
                   {"cognitive", r.swarm.cognitive},
                   {"social", r.swarm.social},
                   {"velocity_clamp", r.swarm.velocity_clamp},
                   {"stall_window", r.swarm.stall_window},
                   {"stall_tolerance", r.swarm.stall_tolerance}}},
                 {"oracle_subsamples", r.oracle_subsamples},
                 {"oracle_tolerance", r.oracle_tolerance},
                 {"phase_cost_floor", r.phase_cost_floor}};

  if (c.sweep) root["sweep"] = {{"axis", to_string(c.sweep->axis)}, {"values", c.sweep->values}};
  return root;
}

std::uint64_t config_hash(const ScenarioConfig& config) {
  const std::string canonical = to_json(config).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t hash) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::r_rx: return "r_rx";
    case SweepAxis::theta_rx: return "theta_rx";
    case SweepAxis::r_tx: return "r_tx";
    case SweepAxis::aperture: return "aperture";
  }
  return "unknown";
}

ScenarioModel build_model(const ScenarioConfig& c) {
  ScenarioModel model;
  model.constants = PhysicalConstants::at_frequency(c.frequency);
  model.lattice = build_lattice(c.ems.m, c.ems.n, c.ems.dx, c.ems.dy);
  model.regions = region_boundaries(model.lattice, model.constants.lambda0());
  model.table = c.ems.table.file ? read_table_csv(*c.ems.table.file) : surrogate_table(c.ems.table.surrogate);
  if (c.ems.layout.file) {
    std::size_t rows = 0, cols = 0;
    std::vector<double> g = read_layout_rows(*c.ems.layout.file, rows, cols);
    if (rows != c.ems.m || cols != c.ems.n)
      throw ConfigError("ems.layout.file: expected " + std::to_string(c.ems.m) + " x " +
                        std::to_string(c.ems.n) + " values, got " + std::to_string(rows) + " x " +
                        std::to_string(cols));
    model.layout = {c.ems.m, c.ems.n, std::move(g)};
  } else {
    const double g = c.ems.layout.uniform.value_or(0.5 * (model.table.g_min() + model.table.g_max()));
    model.layout = EMSLayout::uniform(c.ems.m, c.ems.n, g);
  }
  validate_layout(model.layout, model.table);
  if (c.tx.source == SourceKind::horn) {
    model.incident = incident_field_on_aperture(c.tx.placement, c.tx.horn, model.lattice, c.ems.quad_order);
  } else {
    model.incident = incident_field_on_aperture(c.tx.plane_wave, model.lattice, c.ems.quad_order, c.frequency);
  }
  return model;
}

std::vector<SphericalPoint> cut_points(const CutConfig& cut, const RegionBoundaries& regions) {
  double r = 0.0;
  if (cut.r) {
    r = *cut.r;
  } else {
    r = cut.r_factor * (cut.relative_to == "r_ff" ? regions.r_ff : regions.r_nf);
  }
  std::vector<SphericalPoint> out;
  if (cut.kind == CutKind::theta_cut) {
    const double phi = deg_to_rad(cut.phi_deg);
    for (std::size_t i = 0; i < cut.points; ++i) {
      const double t = cut.points == 1 ? 0.5 : static_cast<double>(i) / static_cast<double>(cut.points - 1);
      const double theta = cut.theta_min_deg + t * (cut.theta_max_deg - cut.theta_min_deg);
      out.push_back(SphericalPoint::from_signed(r, deg_to_rad(theta), phi));
    }
  } else {
    const SphericalPoint centre = SphericalPoint::make(r, deg_to_rad(cut.theta_deg), deg_to_rad(cut.phi_deg));
    for (const auto& p : plane_points(centre, cut.half_width, cut.points)) out.push_back(p.point);
  }
  return out;
}

std::vector<PlanePoint> plane_points(const SphericalPoint& centre, double half_width, std::size_t points) {
  require(points >= 1, "plane needs at least one point per side");
  require(half_width >= 0.0, "plane half width must be non-negative");
  const Vec3 c = centre.cartesian();
  const Vec3 th = centre.theta_hat();
  const Vec3 ph = centre.phi_hat();
  std::vector<PlanePoint> out;
  out.reserve(points * points);
  for (std::size_t i = 0; i < points; ++i) {
    const double a = points == 1 ? 0.0 : -half_width + 2.0 * half_width * i / static_cast<double>(points - 1);
    for (std::size_t k = 0; k < points; ++k) {
      const double b = points == 1 ? 0.0 : -half_width + 2.0 * half_width * k / static_cast<double>(points - 1);
      const Vec3 p = c + a * th + b * ph;
      if (!(p[2] > 0.0)) throw InvalidArgument("plane point falls below the aperture plane");
      out.push_back({a, b, SphericalPoint::from_cartesian(p)});
    }
  }
  return out;
}

}  // namespace emskin
