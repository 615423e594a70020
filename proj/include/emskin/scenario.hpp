// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "emskin/geometry.hpp"
#include "emskin/incident.hpp"
#include "emskin/meta_atom.hpp"
#include "emskin/synthesis.hpp"

namespace emskin {

enum class SourceKind { horn, plane_wave };

struct TxConfig {
  SourceKind source = SourceKind::horn;
  std::string horn_preset;  ///< "low_gain", "high_gain" or empty for explicit
  HornDescriptor horn = HornDescriptor::high_gain();
  SourcePlacement placement;
  PlaneWaveSource plane_wave;
};

struct TableSource {
  std::optional<std::filesystem::path> file;
  SurrogateParams surrogate;
};

struct LayoutSource {
  std::optional<std::filesystem::path> file;
  std::optional<double> uniform;  ///< defaults to the table midpoint
};

struct EmsConfig {
  std::size_t m = 0;
  std::size_t n = 0;
  double dx = 0.0;
  double dy = 0.0;
  int quad_order = 4;
  TableSource table;
  LayoutSource layout;
};

struct RxMapConfig {
  double half_width = 0.0;
  std::size_t points = 0;
};

struct RxConfig {
  double gain_dbi = 0.0;
  SphericalPoint position;
  std::optional<RxMapConfig> map;
};

enum class CutKind { theta_cut, plane };

struct CutConfig {
  std::string name;
  CutKind kind = CutKind::theta_cut;
  std::optional<double> r;       ///< metres
  double r_factor = 1.0;         ///< used with relative_to when r is absent
  std::string relative_to;       ///< "r_nf" or "r_ff"
  double theta_deg = 0.0;        ///< plane centre
  double phi_deg = 0.0;
  double theta_min_deg = -90.0;  ///< theta cut, signed convention
  double theta_max_deg = 90.0;
  double half_width = 0.0;       ///< plane
  std::size_t points = 181;
};

enum class MethodSelection { usm, ffm, both };
enum class SynthesisLevel { synthesis, ideal };

struct RunConfig {
  std::string name = "run";
  std::uint64_t seed = 1;
  MethodSelection method = MethodSelection::both;
  SynthesisLevel level = SynthesisLevel::synthesis;
  SwarmConfig swarm;
  int oracle_subsamples = 3;
  double oracle_tolerance = 1e-4;
  double phase_cost_floor = kDefaultCostFloor;
};

enum class SweepAxis { r_rx, theta_rx, r_tx, aperture };

struct SweepConfig {
  SweepAxis axis = SweepAxis::r_rx;
  std::vector<double> values;
};

struct ScenarioConfig {
  double frequency = 0.0;
  TxConfig tx;
  EmsConfig ems;
  std::optional<RxConfig> rx;
  std::vector<CutConfig> cuts;
  RunConfig run;
  std::optional<SweepConfig> sweep;
};

/// Reads and validates a JSON scenario. Relative paths resolve against the
/// config file's directory. Errors: IoError (unreadable file), ConfigError
/// (syntax with line/column, unknown keys, invalid values naming the field).
ScenarioConfig load_config(const std::filesystem::path& path);
ScenarioConfig parse_config(const std::string& text, const std::filesystem::path& base_dir);

/// Fully defaulted, key-sorted serialisation; parse_config(to_json(c).dump())
/// reproduces c.
nlohmann::json to_json(const ScenarioConfig& config);
std::uint64_t config_hash(const ScenarioConfig& config);
std::string hash_hex(std::uint64_t hash);

std::string to_string(SweepAxis axis);

/// Runtime objects derived from a config.
struct ScenarioModel {
  PhysicalConstants constants;
  ApertureLattice lattice;
  RegionBoundaries regions;
  MetaAtomTable table;
  EMSLayout layout;
  IncidentFieldGrid incident;
};

ScenarioModel build_model(const ScenarioConfig& config);

/// Observation points of a cut; relative radii resolve against the lattice.
std::vector<SphericalPoint> cut_points(const CutConfig& cut, const RegionBoundaries& regions);

/// Receiver-map grid in the plane through the receiver normal to r_hat.
struct PlanePoint {
  double a = 0.0;  ///< offset along theta_hat
  double b = 0.0;  ///< offset along phi_hat
  SphericalPoint point;
};

std::vector<PlanePoint> plane_points(const SphericalPoint& centre, double half_width, std::size_t points);

}  // namespace emskin
