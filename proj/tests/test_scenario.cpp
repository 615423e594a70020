// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "emskin/errors.hpp"
#include "emskin/experiments.hpp"
#include "emskin/scenario.hpp"

using namespace emskin;
namespace fs = std::filesystem;

namespace {

const fs::path kData = EMSKIN_TEST_DATA_DIR;

std::string error_of(const std::string& text) {
  try {
    parse_config(text, kData);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

const char* kMinimal = R"({
  "frequency": 17.5e9,
  "tx": {"source": "plane_wave", "direction": {"theta_deg": 0, "phi_deg": 0}},
  "ems": {"m": 4, "n": 4, "dx": 0.008, "dy": 0.008},
  "rx": {"position": {"r": 1.0, "theta_deg": 0, "phi_deg": 0}}
})";

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "emskin_unit" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("config errors name the offending field") {
  CHECK(error_of(R"({"frequency": -1})").find("frequency") != std::string::npos);
  CHECK_THROWS_AS(load_config(kData / "bad_frequency.json"), ConfigError);
  CHECK_THROWS_AS(load_config(kData / "does_not_exist.json"), IoError);

  std::string text = kMinimal;
  text.replace(text.find("\"m\": 4"), 6, "\"m\": 4, \"colour\": 1");
  CHECK(error_of(text).find("ems.colour") != std::string::npos);

  const std::string syntax = error_of("{\n  \"frequency\": 17.5e9,\n  \"tx\": {\n}}}");
  CHECK(syntax.find("line 4") != std::string::npos);

  text = kMinimal;
  text.replace(text.find("\"dy\": 0.008}"), 12, R"("dy": 0.008, "table": {"file": "missing_table.csv"}})");
  CHECK_THROWS_AS(parse_config(text, kData), IoError);
  try {
    parse_config(text, kData);
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("missing_table.csv") != std::string::npos);
  }
  CHECK(error_of(R"({"frequency": 1e10, "ems": {"m": 1, "n": 1, "dx": 0.01, "dy": 0.01}})").find("tx") !=
        std::string::npos);
}

TEST_CASE("defaults survive a round trip") {
  const auto a = parse_config(kMinimal, kData);
  CHECK(a.run.swarm.particle_count == SwarmConfig{}.particle_count);
  CHECK(a.ems.quad_order == 4);
  const auto b = parse_config(to_json(a).dump(), kData);
  CHECK(to_json(a) == to_json(b));
  CHECK(config_hash(a) == config_hash(b));
  CHECK(hash_hex(config_hash(a)).size() == 16);
}

TEST_CASE("analyze needs an observation block") {
  const auto c = parse_config(kMinimal, kData);
  CHECK_THROWS_AS(run_analyze(c), ConfigError);
}

TEST_CASE("analyze ranks the generalized model above the far-field model in the near zone") {
  const auto bundle = run_analyze(load_config(kData / "analyze_small.json"));
  const auto& s = bundle.table("summary");
  REQUIRE(s.rows.size() == 3);
  CHECK(std::get<std::string>(s.rows[0][0]) == "near");
  const double gen = s.number(0, "max_error_generalized"), ff = s.number(0, "max_error_ff");
  CHECK(gen < 0.01);
  CHECK(ff > gen);
  CHECK(bundle.table("patch_fields").rows.size() == 25);
  CHECK(bundle.has_table("regions"));
}

TEST_CASE("emit writes CSV and JSON that agree") {
  const auto bundle = run_synthesize(load_config(kData / "synthesize_small.json"));
  const auto dir = scratch("emit");
  const auto csv = emit(bundle, dir, OutputFormat::csv);
  const auto js = emit(bundle, dir, OutputFormat::json);
  REQUIRE(js.size() == 1);
  CHECK(csv.size() == bundle.tables.size() + 1);
  std::ifstream in(js.front());
  const auto doc = nlohmann::json::parse(in);
  const auto summary = read_table_csv_file(dir / "synthesize_small__summary.csv", "summary");
  const auto& original = bundle.table("summary");
  REQUIRE(summary.rows.size() == original.rows.size());
  for (std::size_t r = 0; r < original.rows.size(); ++r)
    CHECK(summary.number(r, "psi_rx_dbm") == original.number(r, "psi_rx_dbm"));
  CHECK(doc.dump().find("psi_rx_dbm") != std::string::npos);
  CHECK(doc.dump().find(bundle.metadata.config_hash) != std::string::npos);

  const fs::path blocker = scratch("blocked") / "file";
  std::ofstream(blocker) << "x";
  try {
    emit(bundle, blocker / "sub", OutputFormat::csv);
    FAIL("emit into a path below a regular file should fail");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("blocked") != std::string::npos);
  }
}

TEST_CASE("ideal focusing favours the near-field rule") {
  auto c = load_config(kData / "synthesize_small.json");
  c.run.level = SynthesisLevel::ideal;
  const auto bundle = run_synthesize(c);
  CHECK(bundle.table("delta").number(0, "delta_psi_db") >= 0.0);
  const auto& s = bundle.table("summary");
  for (std::size_t r = 0; r < s.rows.size(); ++r) CHECK(s.number(r, "psi_rx_dbm") <= s.number(r, "bound_dbm") + 1e-9);
}

TEST_CASE("single-value sweep matches synthesize") {
  auto c = load_config(kData / "sweep_small.json");
  c.sweep->values = {c.rx->position.r};
  const auto sweep = run_sweep(c);
  const auto synth = run_synthesize(c);
  const auto& row = sweep.table("sweep");
  CHECK(row.number(0, "psi_usm_dbm") == doctest::Approx(synth.table("summary").number(0, "psi_rx_dbm")).epsilon(1e-12));
  CHECK(row.number(0, "delta_psi_db") == doctest::Approx(synth.table("delta").number(0, "delta_psi_db")).epsilon(1e-9));
}

TEST_CASE("sweep records failing points and continues") {
  auto c = load_config(kData / "sweep_small.json");
  c.sweep->axis = SweepAxis::aperture;
  c.sweep->values = {2.5, 4.0};
  const auto t = run_sweep(c).table("sweep");
  REQUIRE(t.rows.size() == 2);
  CHECK(std::get<std::string>(t.rows[0][t.column_index("status")]) != "ok");
  CHECK(std::get<std::string>(t.rows[1][t.column_index("status")]) == "ok");
}
