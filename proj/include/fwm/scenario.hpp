#pragma once

/**
 * JSON scenario files.
 *
 * {
 *   "system":  {"alpha": 3, "omega_x": 2.5, "omega_z": 4, "g": 0.8, "g1": 0.808, "g2": 0.792},
 *   "pump":    {"k": -0.45, "branch": 1, "amplitude": 1},
 *   "width":   60,
 *   "matches": [{"id": "main", "configuration": 1, "q_near": 4.15}],
 *   "seeds":   [{"label": "k2", "amplitude": 0.2, "k": "auto", "match": "main", "probe": "plus"},
 *               {"label": "k3", "amplitude": 0.0, "k": "auto", "match": "main", "probe": "minus",
 *                "generated": true}],
 *   "grid":    "auto" | {"n": 8192, "length": 2520},
 *   "run":     {"t_final": 300, "dt": 5e-4, "snapshot_every": 20000},
 *   "output":  "out/fig3",
 *   "gv":      {"k_min": -2, "k_max": 2, "samples": 401},                 (optional)
 *   "efficiency_scan": {"omega_z": [...],
 *                       "nonlinearity": [{"g": 0.8, "delta_g_ratio": 0}]} (optional)
 * }
 *
 * An "auto" seed sits at k1 + q ("plus") or k1 - q ("minus") for the
 * solution q of the referenced match closest to q_near (largest q when
 * q_near is absent); its branch defaults to s2 / s3 of the configuration.
 */

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fwm/dispersion.hpp"
#include "fwm/phase_matching.hpp"
#include "fwm/propagator.hpp"
#include "fwm/wavepackets.hpp"

namespace fwm {

struct PumpSpec {
  double k = 0.0;
  Branch branch = Branch::Upper;
  double amplitude = 1.0;
  friend bool operator==(const PumpSpec&, const PumpSpec&) = default;
};

struct MatchSpec {
  std::string id;
  int configuration = 1;
  std::optional<double> q_near;
  friend bool operator==(const MatchSpec&, const MatchSpec&) = default;
};

enum class Probe { Plus, Minus };

struct SeedSpec {
  std::string label;
  double amplitude = 0.0;
  std::optional<double> k;          // nullopt = "auto"
  std::optional<Branch> branch;     // required when k is explicit
  std::optional<std::string> match; // auto seeds: defaults to the first match
  Probe probe = Probe::Plus;
  bool generated = false;
  friend bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

struct GridSpec {
  std::size_t n = 0;
  double length = 0.0;
  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct RunSpec {
  double t_final = 0.0;
  double dt = 5e-4;
  std::size_t snapshot_every = 0;
  friend bool operator==(const RunSpec&, const RunSpec&) = default;
};

struct GvSpec {
  double k_min = -2.0;
  double k_max = 2.0;
  int samples = 401;
  friend bool operator==(const GvSpec&, const GvSpec&) = default;
};

struct NonlinearitySpec {
  double g = 0.0;
  double delta_g_ratio = 0.0;  // (g1 - g2) / (2 g); g1 + g2 = 2 g
  friend bool operator==(const NonlinearitySpec&, const NonlinearitySpec&) = default;
};

struct EfficiencyScanSpec {
  std::vector<double> omega_z;
  std::vector<NonlinearitySpec> nonlinearity;
  friend bool operator==(const EfficiencyScanSpec&, const EfficiencyScanSpec&) = default;
};

struct ScenarioConfig {
  SystemParams system;
  PumpSpec pump;
  double width = 0.0;
  std::vector<MatchSpec> matches;
  std::vector<SeedSpec> seeds;
  std::optional<GridSpec> grid;  // nullopt = "auto"
  RunSpec run;
  std::string output;
  std::optional<GvSpec> gv;
  std::optional<EfficiencyScanSpec> efficiency_scan;
  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Throws ConfigError on missing keys, wrong types or invalid values.
ScenarioConfig parse_scenario(const nlohmann::json& j);
ScenarioConfig load_scenario(const std::filesystem::path& path);
nlohmann::json to_json(const ScenarioConfig& c);

/// Everything needed to run: concrete packets (pump first) and grid.
struct ResolvedScenario {
  SystemParams system;
  double width = 0.0;
  std::vector<WavepacketSpec> packets;
  std::vector<std::string> labels;
  std::vector<bool> generated;
  std::vector<FwmSolution> matched;  // one per MatchSpec, in order
  Grid grid;
  RunSpec run;
};

/// Grid with L = 2 (max|v| t_final + 5 w) and the smallest power-of-two n
/// >= 8192 that resolves every packet.
Grid auto_grid(const std::vector<WavepacketSpec>& packets, double width, double t_final,
               const SystemParams& p);

/// Fills "auto" seeds from phase matching and the grid. Throws ConfigError
/// if a referenced match has no solution.
ResolvedScenario resolve(const ScenarioConfig& c);

}  // namespace fwm
