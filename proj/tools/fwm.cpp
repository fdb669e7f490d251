// fwm: phase matching and split-step simulation of degenerate four-wave
// mixing in spin-orbit-coupled condensates.
//
//   fwm match|gv|simulate|efficiency-scan --config <file> --out <dir> [--parallel <n>]

#include <CLI11.hpp>

#include "fwm/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Degenerate four-wave mixing in spin-orbit-coupled BECs"};
  app.require_subcommand(1);

  fwm::CommandOptions opts;
  double k_min = 0.0, k_max = 0.0;
  int samples = 0;
  std::vector<double> omega_z;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opts.config, "Scenario JSON file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opts.out, "Output directory (defaults to the scenario's \"output\")");
    sub->add_option("--parallel", opts.parallel, "Worker threads")->check(CLI::PositiveNumber);
  };

  auto* match = app.add_subcommand("match", "Phase-matched solutions for every configuration");
  add_common(match);

  auto* gv = app.add_subcommand("gv", "Group velocities of pump and probes over a k1 scan");
  add_common(gv);
  auto* k_min_opt = gv->add_option("--k-min", k_min, "Scan start");
  auto* k_max_opt = gv->add_option("--k-max", k_max, "Scan end");
  auto* samples_opt = gv->add_option("--samples", samples, "Number of k1 samples");

  auto* sim = app.add_subcommand("simulate", "Run the split-step simulation of a scenario");
  add_common(sim);

  auto* scan = app.add_subcommand("efficiency-scan", "Efficiency versus omega_z");
  add_common(scan);
  auto* oz_opt = scan->add_option("--omega-z", omega_z, "Comma-separated omega_z values")
                     ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : fwm::kConfigError;
  }

  if (*k_min_opt) opts.k_min = k_min;
  if (*k_max_opt) opts.k_max = k_max;
  if (*samples_opt) opts.samples = samples;
  if (*oz_opt) opts.omega_z = omega_z;

  return fwm::run_command(app.get_subcommands().front()->get_name(), opts);
}
