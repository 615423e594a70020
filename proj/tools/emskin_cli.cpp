// SPDX-License-Identifier: Apache-2.0
// emskin command-line front end. Uses only the C API.
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "emskin/emskin.h"

namespace {

int exit_code(ems_status s) {
  switch (s) {
    case EMS_OK: return 0;
    case EMS_ERR_INVALID_ARGUMENT:
    case EMS_ERR_RANGE:
    case EMS_ERR_CONFIG: return 2;
    case EMS_ERR_NUMERICAL: return 3;
    case EMS_ERR_IO: return 4;
    default: return 1;
  }
}

int report(ems_status s) {
  std::fprintf(stderr, "emskin: error: %s\n", ems_last_error());
  return exit_code(s);
}

void print_table(const ems_bundle* bundle, const char* table) {
  size_t rows = 0, cols = 0;
  if (ems_bundle_table_shape(bundle, table, &rows, &cols) != EMS_OK) return;
  std::printf("[%s]\n", table);
  for (size_t c = 0; c < cols; ++c) std::printf("%s%s", c ? "," : "", ems_bundle_column_name(bundle, table, c));
  std::printf("\n");
  char buf[512];
  for (size_t r = 0; r < rows; ++r) {
    for (size_t c = 0; c < cols; ++c) {
      if (ems_bundle_table_text(bundle, table, r, c, buf, sizeof buf) != EMS_OK) buf[0] = '\0';
      std::printf("%s%s", c ? "," : "", buf);
    }
    std::printf("\n");
  }
}

struct RunOptions {
  std::string config;
  std::string out = "out";
  std::string format = "csv";
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
  bool quiet = false;
};

void add_run_options(CLI::App* cmd, RunOptions& o) {
  cmd->add_option("--config", o.config, "Scenario config (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", o.out, "Output directory")->capture_default_str();
  cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  cmd->add_option("--seed", o.seed, "Override run.seed");
  cmd->add_option("--threads", o.threads, "Cap engine threads (0 = hardware default)");
  cmd->add_flag("--quiet", o.quiet, "Suppress the summary on stdout");
}

int run(const RunOptions& o, ems_status (*runner)(const ems_scenario*, ems_bundle**),
        const std::vector<const char*>& summary_tables) {
  if (ems_status s = ems_set_threads(o.threads); s != EMS_OK) return report(s);
  ems_scenario* scenario = nullptr;
  if (ems_status s = ems_scenario_load(o.config.c_str(), &scenario); s != EMS_OK) return report(s);
  if (o.seed) ems_scenario_set_seed(scenario, *o.seed);
  ems_bundle* bundle = nullptr;
  ems_status s = runner(scenario, &bundle);
  ems_scenario_free(scenario);
  if (s != EMS_OK) return report(s);
  s = ems_bundle_emit(bundle, o.out.c_str(), o.format == "json" ? EMS_FORMAT_JSON : EMS_FORMAT_CSV);
  if (s != EMS_OK) {
    ems_bundle_free(bundle);
    return report(s);
  }
  if (!o.quiet) {
    std::printf("config hash %s, wall time %.3f s, output in %s\n", ems_bundle_config_hash(bundle),
                ems_bundle_wall_time(bundle), o.out.c_str());
    for (const char* t : summary_tables) print_table(bundle, t);
  }
  ems_bundle_free(bundle);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"emskin: generalized analysis and synthesis of electromagnetic skins"};
  app.set_version_flag("--version", std::string(ems_version()));
  app.require_subcommand(1);

  RunOptions analyze_opts, synth_opts, sweep_opts;
  auto* analyze = app.add_subcommand("analyze", "Closed-form, far-field and oracle fields on the configured cuts");
  add_run_options(analyze, analyze_opts);
  auto* synth = app.add_subcommand("synthesize", "Phase targets and swarm layout synthesis for the receiver");
  add_run_options(synth, synth_opts);
  auto* sweep = app.add_subcommand("sweep", "Parametric synthesis sweep");
  add_run_options(sweep, sweep_opts);

  auto* regions = app.add_subcommand("regions", "Print r_nf and r_ff for a lattice");
  std::size_t m = 0, n = 0;
  double dx = 0.0, dy = 0.0, frequency = 0.0;
  bool regions_quiet = false;
  regions->add_option("--m", m, "Cells along x")->required();
  regions->add_option("--n", n, "Cells along y")->required();
  regions->add_option("--dx", dx, "Pitch along x [m]")->required();
  regions->add_option("--dy", dy, "Pitch along y [m] (defaults to dx)");
  regions->add_option("--frequency", frequency, "Frequency [Hz]")->required();
  regions->add_flag("--quiet", regions_quiet, "Print only the two numbers");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*analyze) return run(analyze_opts, ems_run_analyze, {"summary"});
  if (*synth) return run(synth_opts, ems_run_synthesize, {"summary", "delta"});
  if (*sweep) return run(sweep_opts, ems_run_sweep, {"sweep"});

  double r_nf = 0.0, r_ff = 0.0, diameter = 0.0;
  if (dy == 0.0) dy = dx;
  if (ems_status s = ems_region_boundaries(m, n, dx, dy, frequency, &r_nf, &r_ff, &diameter); s != EMS_OK)
    return report(s);
  if (regions_quiet) {
    std::printf("%.17g %.17g\n", r_nf, r_ff);
  } else {
    std::printf("diameter %.6g m\nr_nf %.6g m\nr_ff %.6g m\n", diameter, r_nf, r_ff);
  }
  return 0;
}
