#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fwm/scenario.hpp"

namespace fwm {

// Shortest round-trip decimal representation.
std::string format_double(double v);

/// Per-configuration roots, discriminants and cubic coefficients at (p, k1).
/// The flat "solutions" array holds JSON records
/// {config, s1, s2, s3, k1, q, k2, k3, residual}.
nlohmann::json match_report(const SystemParams& p, double k1);
nlohmann::json to_json(const FwmSolution& s);

/// Group velocities of pump and matched probes over a k1 scan. Long format,
/// one row per (k1, configuration, q); empty cells where a configuration has
/// no solution. Header:
///   k1,config,s1,s2,s3,q,k2,k3,v_pump,v_k2,v_k3
std::string gv_csv(const SystemParams& p, const GvSpec& scan);

struct SimulationResult {
  nlohmann::json summary;
  SpinorField initial;
  SpinorField final_state;
};

struct SimulateOptions {
  std::optional<std::filesystem::path> output;  // snapshots + logs written here
};

/// Builds the initial state, propagates and reports conservation, spectral
/// peaks and efficiencies of the generated modes.
SimulationResult simulate(const ResolvedScenario& s, const SimulateOptions& opts = {});

struct EfficiencyRow {
  double omega_z = 0.0;
  double g = 0.0;
  double g1 = 0.0;
  double g2 = 0.0;
  std::optional<double> eta_percent;  // empty when phase matching fails
};

/// Re-solves phase matching and reruns the scenario for every (nonlinearity,
/// omega_z) pair; points are distributed over `parallel` worker threads.
std::vector<EfficiencyRow> efficiency_scan(const ScenarioConfig& base,
                                           const std::vector<double>& omega_z,
                                           const std::vector<NonlinearitySpec>& nonlinearity,
                                           int parallel = 1);

/// Header omega_z,g,g1,g2,eta_percent.
std::string efficiency_csv(const std::vector<EfficiencyRow>& rows);

struct CommandOptions {
  std::filesystem::path config;
  std::filesystem::path out;
  int parallel = 1;
  std::optional<double> k_min, k_max;
  std::optional<int> samples;
  std::optional<std::vector<double>> omega_z;
};

enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericalFailure = 3 };

/// Entry point behind the CLI: "match", "gv", "simulate", "efficiency-scan".
/// Returns the process exit code; diagnostics go to stderr.
int run_command(const std::string& name, const CommandOptions& opts);

}  // namespace fwm
