// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>

#include "emskin/field_engine.hpp"
#include "emskin/result_bundle.hpp"
#include "emskin/scenario.hpp"
#include "emskin/synthesis.hpp"

namespace emskin {

inline constexpr const char* kLibraryVersion = "0.1.0";

/// One synthesis method evaluated at the configured receiver.
struct MethodOutcome {
  SynthesisMethod method = SynthesisMethod::usm;
  TargetPhaseGrid target;
  SurfaceCurrentGrid currents;
  std::optional<SynthesisResult> synthesis;  ///< absent at the ideal level
  FieldSample focus;
  double psi_rx_dbm = 0.0;
  double bound_dbm = 0.0;  ///< focused_power_bound of the same current magnitudes
};

MethodOutcome synthesize_method(const ScenarioConfig& config, const ScenarioModel& model,
                                SynthesisMethod method);

/// Closed form, far-field form and oracle on every configured cut, plus the
/// two prediction-error maps per cut.
ResultBundle run_analyze(const ScenarioConfig& config);

ResultBundle run_synthesize(const ScenarioConfig& config);

/// One synthesis per sweep value and method; failing points are recorded in
/// the status column and the sweep continues.
ResultBundle run_sweep(const ScenarioConfig& config);

}  // namespace emskin
