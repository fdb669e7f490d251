#include "fwm/commands.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include "fwm/errors.hpp"
#include "fwm/snapshot_io.hpp"

namespace fwm {

using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

json to_json(const FwmSolution& s) {
  return {{"config", s.config.id}, {"s1", s.config.signs.s1}, {"s2", s.config.signs.s2},
          {"s3", s.config.signs.s3}, {"k1", s.k1},            {"q", s.q},
          {"k2", s.k2},              {"k3", s.k3},            {"residual", s.residual}};
}

json match_report(const SystemParams& p, double k1) {
  const auto all = enumerate_all(k1, p);
  json report;
  report["system"] = {{"alpha", p.alpha}, {"omega_x", p.omega_x}, {"omega_z", p.omega_z}};
  report["k1"] = k1;
  report["configurations"] = json::array();
  report["solutions"] = json::array();

  for (const auto& cfg : kConfigurations) {
    json c{{"id", cfg.id},
           {"signs", {cfg.signs.s1, cfg.signs.s2, cfg.signs.s3}},
           {"n_max", cfg.n_max}};
    if (p.alpha != 0.0) {
      const CubicProblem cubic = make_cubic(cfg.signs.s1, k1, p);
      c["discriminant"] = discriminant(cfg.signs.s1, cubic.omega_tilde_scaled, cubic.omega_z_scaled);
      c["cubic"] = {{"omega_tilde_scaled", cubic.omega_tilde_scaled},
                    {"omega_z_scaled", cubic.omega_z_scaled},
                    {"coefficients", {1.0, cubic.c2, cubic.c1, cubic.c0}}};
    } else {
      c["discriminant"] = nullptr;
      c["cubic"] = nullptr;
    }
    c["solutions"] = json::array();
    for (const auto& s : all) {
      if (s.config.id == cfg.id) c["solutions"].push_back(to_json(s));
    }
    report["configurations"].push_back(c);
  }
  for (const auto& s : all) report["solutions"].push_back(to_json(s));
  return report;
}

std::string gv_csv(const SystemParams& p, const GvSpec& scan) {
  std::string out = "k1,config,s1,s2,s3,q,k2,k3,v_pump,v_k2,v_k3\n";
  auto cell = [](std::optional<double> v) { return v ? format_double(*v) : std::string{}; };
  auto gv = [&](double k, int s) -> std::optional<double> {
    try {
      return group_velocity(k, branch_from_sign(s), p);
    } catch (const DegenerateDispersion&) {
      return std::nullopt;
    }
  };
  for (int i = 0; i < scan.samples; ++i) {
    const double k1 = scan.samples == 1
                          ? scan.k_min
                          : scan.k_min + (scan.k_max - scan.k_min) * i / (scan.samples - 1);
    for (const auto& cfg : kConfigurations) {
      const auto& s = cfg.signs;
      const std::string head = format_double(k1) + "," + std::to_string(cfg.id) + "," +
                               std::to_string(s.s1) + "," + std::to_string(s.s2) + "," +
                               std::to_string(s.s3) + ",";
      const auto sols = solve_configuration(cfg, k1, p);
      if (sols.empty()) {
        out += head + ",,," + cell(gv(k1, s.s1)) + ",,\n";
        continue;
      }
      for (const auto& sol : sols) {
        out += head + format_double(sol.q) + "," + format_double(sol.k2) + "," +
               format_double(sol.k3) + "," + cell(gv(k1, s.s1)) + "," + cell(gv(sol.k2, s.s2)) +
               "," + cell(gv(sol.k3, s.s3)) + "\n";
      }
    }
  }
  return out;
}

namespace {

double relative_drift(double initial, double final_value) {
  const double scale = std::abs(initial);
  return scale > 0.0 ? std::abs(final_value - initial) / scale : std::abs(final_value - initial);
}

json peaks_json(const std::vector<SpectralPeak>& peaks, const ResolvedScenario& s) {
  json arr = json::array();
  for (std::size_t i = 0; i < peaks.size(); ++i) {
    arr.push_back({{"label", s.labels[i]},
                   {"k", peaks[i].k_center},
                   {"population1", peaks[i].population1},
                   {"population2", peaks[i].population2},
                   {"total", peaks[i].total()}});
  }
  return arr;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw Error("cannot write " + path.string());
  f << text;
}

}  // namespace

SimulationResult simulate(const ResolvedScenario& s, const SimulateOptions& opts) {
  SimulationResult result;
  result.initial = build_initial_state(s.packets, s.width, s.grid, s.system);

  std::vector<double> ks;
  for (const auto& w : s.packets) ks.push_back(w.k_center);
  const double window = default_window(s.width, s.grid);
  const auto peaks0 = spectral_peaks(result.initial, ks, window);
  const Diagnostics d0 = compute_diagnostics(result.initial, s.system);

  std::ofstream log;
  if (opts.output) {
    std::filesystem::create_directories(*opts.output);
    log.open(*opts.output / "conservation.jsonl", std::ios::trunc);
    if (!log) throw Error("cannot write conservation log in " + opts.output->string());
  }

  result.final_state = result.initial;
  PropagateOptions popts;
  popts.t_final = s.run.t_final;
  popts.dt = s.run.dt;
  popts.snapshot_every = s.run.snapshot_every;

  std::size_t index = 0;
  auto observer = [&](const SpinorField& f, std::size_t step) {
    if (!opts.output) return;
    const Diagnostics d = step == 0 ? d0 : compute_diagnostics(f, s.system);
    write_snapshot(*opts.output / "snapshots", index++, f, d);
    json row = to_json(d);
    row["step"] = step;
    log << row.dump() << '\n';
  };

  const StepPlan plan(s.grid, s.system, s.run.dt);
  propagate(result.final_state, plan, popts, observer);

  const Diagnostics d1 = compute_diagnostics(result.final_state, s.system);
  const auto peaks1 = spectral_peaks(result.final_state, ks, window);

  json packets = json::array();
  for (std::size_t i = 0; i < s.packets.size(); ++i) {
    packets.push_back({{"label", s.labels[i]},
                       {"k", s.packets[i].k_center},
                       {"branch", sign_of(s.packets[i].branch)},
                       {"amplitude", s.packets[i].amplitude},
                       {"generated", static_cast<bool>(s.generated[i])}});
  }
  json matched = json::array();
  for (const auto& m : s.matched) matched.push_back(to_json(m));

  json eff = json::array();
  for (std::size_t i = 0; i < s.packets.size(); ++i) {
    if (!s.generated[i]) continue;
    eff.push_back({{"label", s.labels[i]},
                   {"k", s.packets[i].k_center},
                   {"eta_percent", efficiency(result.initial, result.final_state,
                                              s.packets[i].k_center, window)}});
  }

  result.summary = {
      {"scenario",
       {{"system", {{"alpha", s.system.alpha}, {"omega_x", s.system.omega_x},
                    {"omega_z", s.system.omega_z}, {"g", s.system.g}, {"g1", s.system.g1},
                    {"g2", s.system.g2}}},
        {"width", s.width},
        {"grid", {{"n", s.grid.n_points}, {"length", s.grid.length}}},
        {"run", {{"t_final", s.run.t_final}, {"dt", s.run.dt},
                 {"snapshot_every", s.run.snapshot_every}}},
        {"packets", packets},
        {"matches", matched}}},
      {"diagnostics",
       {{"initial", to_json(d0)},
        {"final", to_json(d1)},
        {"relative_drift",
         {{"norm", relative_drift(d0.norm, d1.norm)},
          {"pi_momentum", relative_drift(d0.pi_momentum, d1.pi_momentum)},
          {"canonical_momentum", relative_drift(d0.canonical_momentum, d1.canonical_momentum)},
          {"energy", relative_drift(d0.energy, d1.energy)}}}}},
      {"peaks", {{"window", window}, {"initial", peaks_json(peaks0, s)},
                 {"final", peaks_json(peaks1, s)}}},
      {"efficiency", eff}};

  if (opts.output) write_text(*opts.output / "summary.json", result.summary.dump(2) + "\n");
  return result;
}

std::vector<EfficiencyRow> efficiency_scan(const ScenarioConfig& base,
                                           const std::vector<double>& omega_z,
                                           const std::vector<NonlinearitySpec>& nonlinearity,
                                           int parallel) {
  std::vector<EfficiencyRow> rows;
  for (const auto& nl : nonlinearity) {
    for (double oz : omega_z) {
      const double dg = nl.delta_g_ratio * nl.g;
      rows.push_back({oz, nl.g, nl.g + dg, nl.g - dg, std::nullopt});
    }
  }

  auto run_point = [&](EfficiencyRow& row) {
    ScenarioConfig c = base;
    c.system.omega_z = row.omega_z;
    c.system.g = row.g;
    c.system.g1 = row.g1;
    c.system.g2 = row.g2;
    ResolvedScenario s;
    try {
      s = resolve(c);
    } catch (const ConfigError&) {
      return;  // no phase matching at this point: empty eta
    }
    std::size_t target = s.packets.size() - 1;
    for (std::size_t i = 0; i < s.generated.size(); ++i) {
      if (s.generated[i]) {
        target = i;
        break;
      }
    }
    const SimulationResult r = simulate(s);
    row.eta_percent = efficiency(r.initial, r.final_state, s.packets[target].k_center,
                                 default_window(s.width, s.grid));
  };

  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(std::max(parallel, 1)),
                                                     rows.size()));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      try {
        run_point(rows[i]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

std::string efficiency_csv(const std::vector<EfficiencyRow>& rows) {
  std::string out = "omega_z,g,g1,g2,eta_percent\n";
  for (const auto& r : rows) {
    out += format_double(r.omega_z) + "," + format_double(r.g) + "," + format_double(r.g1) + "," +
           format_double(r.g2) + "," + (r.eta_percent ? format_double(*r.eta_percent) : "") + "\n";
  }
  return out;
}

int run_command(const std::string& name, const CommandOptions& opts) {
  try {
    const ScenarioConfig cfg = load_scenario(opts.config);
    std::filesystem::path out = opts.out.empty() ? std::filesystem::path(cfg.output) : opts.out;
    if (out.empty()) out = ".";

    if (name == "match") {
      const json report = match_report(cfg.system, cfg.pump.k);
      write_text(out / "match.json", report.dump(2) + "\n");
      std::cout << report.dump(2) << '\n';
    } else if (name == "gv") {
      GvSpec scan = cfg.gv.value_or(GvSpec{});
      if (opts.k_min) scan.k_min = *opts.k_min;
      if (opts.k_max) scan.k_max = *opts.k_max;
      if (opts.samples) scan.samples = *opts.samples;
      if (scan.samples < 1 || scan.k_max < scan.k_min) {
        throw ConfigError("gv scan needs samples >= 1 and k_max >= k_min");
      }
      write_text(out / "gv.csv", gv_csv(cfg.system, scan));
    } else if (name == "simulate") {
      const ResolvedScenario s = resolve(cfg);
      const SimulationResult r = simulate(s, {out});
      std::cout << r.summary.at("efficiency").dump() << '\n';
    } else if (name == "efficiency-scan") {
      std::vector<double> oz;
      std::vector<NonlinearitySpec> nl;
      if (cfg.efficiency_scan) {
        oz = cfg.efficiency_scan->omega_z;
        nl = cfg.efficiency_scan->nonlinearity;
      }
      if (opts.omega_z) oz = *opts.omega_z;
      if (nl.empty()) {
        const double g = cfg.system.g;
        const double ratio = g != 0.0 ? 0.5 * (cfg.system.g1 - cfg.system.g2) / g : 0.0;
        nl.push_back({g, ratio});
      }
      if (oz.empty()) throw ConfigError("efficiency scan needs omega_z values");
      const auto rows = efficiency_scan(cfg, oz, nl, opts.parallel);
      write_text(out / "efficiency.csv", efficiency_csv(rows));
    } else {
      throw ConfigError("unknown command \"" + name + "\"");
    }
    return kOk;
  } catch (const NaNEncountered& e) {
    std::cerr << "fwm " << name << ": numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const ConfigError& e) {
    std::cerr << "fwm " << name << ": config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const GridTooCoarse& e) {
    std::cerr << "fwm " << name << ": config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const OverlappingWindows& e) {
    std::cerr << "fwm " << name << ": config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "fwm " << name << ": " << e.what() << '\n';
    return kNumericalFailure;
  }
}

}  // namespace fwm
