#include "fwm/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "fwm/errors.hpp"

namespace fwm {

using nlohmann::json;

namespace {

double number(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(std::string("\"") + key + "\" must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(std::string("\"") + key + "\" must be finite");
  return x;
}

double number_or(const json& j, const char* key, double fallback) {
  return j.contains(key) ? number(j, key) : fallback;
}

Branch branch_value(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_number_integer()) throw ConfigError(std::string("\"") + key + "\" must be +1 or -1");
  try {
    return branch_from_sign(v.get<int>());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

SystemParams parse_system(const json& j) {
  SystemParams p;
  p.alpha = number(j, "alpha");
  p.omega_x = number(j, "omega_x");
  p.omega_z = number(j, "omega_z");
  p.g = number_or(j, "g", 0.0);
  p.g1 = number_or(j, "g1", 0.0);
  p.g2 = number_or(j, "g2", 0.0);
  p.validate();
  return p;
}

json system_json(const SystemParams& p) {
  return {{"alpha", p.alpha}, {"omega_x", p.omega_x}, {"omega_z", p.omega_z},
          {"g", p.g},         {"g1", p.g1},           {"g2", p.g2}};
}

SeedSpec parse_seed(const json& j) {
  SeedSpec s;
  s.label = j.value("label", std::string{});
  s.amplitude = number(j, "amplitude");
  if (s.amplitude < 0.0) throw ConfigError("seed amplitude must be >= 0");
  const json& k = j.at("k");
  if (k.is_string()) {
    if (k.get<std::string>() != "auto") throw ConfigError("seed \"k\" must be a number or \"auto\"");
  } else {
    s.k = number(j, "k");
  }
  if (j.contains("branch")) s.branch = branch_value(j, "branch");
  if (s.k && !s.branch) throw ConfigError("explicit seed wavenumber needs a \"branch\"");
  if (j.contains("match")) s.match = j.at("match").get<std::string>();
  const std::string probe = j.value("probe", std::string("plus"));
  if (probe == "plus") {
    s.probe = Probe::Plus;
  } else if (probe == "minus") {
    s.probe = Probe::Minus;
  } else {
    throw ConfigError("seed \"probe\" must be \"plus\" or \"minus\"");
  }
  s.generated = j.value("generated", false);
  return s;
}

json seed_json(const SeedSpec& s) {
  json j{{"label", s.label}, {"amplitude", s.amplitude},
         {"probe", s.probe == Probe::Plus ? "plus" : "minus"}, {"generated", s.generated}};
  j["k"] = s.k ? json(*s.k) : json("auto");
  if (s.branch) j["branch"] = sign_of(*s.branch);
  if (s.match) j["match"] = *s.match;
  return j;
}

}  // namespace

ScenarioConfig parse_scenario(const json& j) {
  try {
    ScenarioConfig c;
    c.system = parse_system(j.at("system"));

    const json& pump = j.at("pump");
    c.pump.k = number(pump, "k");
    c.pump.branch = pump.contains("branch") ? branch_value(pump, "branch") : Branch::Upper;
    c.pump.amplitude = number_or(pump, "amplitude", 1.0);
    if (c.pump.amplitude < 0.0) throw ConfigError("pump amplitude must be >= 0");

    c.width = number_or(j, "width", 0.0);
    if (c.width < 0.0) throw ConfigError("\"width\" must be positive");

    for (const json& m : j.value("matches", json::array())) {
      MatchSpec ms;
      ms.id = m.value("id", std::string{});
      ms.configuration = m.at("configuration").get<int>();
      if (ms.configuration < 1 || ms.configuration > 4) {
        throw ConfigError("\"configuration\" must be 1..4");
      }
      if (m.contains("q_near")) ms.q_near = number(m, "q_near");
      c.matches.push_back(std::move(ms));
    }
    for (const json& s : j.value("seeds", json::array())) c.seeds.push_back(parse_seed(s));

    if (j.contains("grid")) {
      const json& g = j.at("grid");
      if (g.is_string()) {
        if (g.get<std::string>() != "auto") throw ConfigError("\"grid\" must be \"auto\" or {n, length}");
      } else {
        c.grid = GridSpec{g.at("n").get<std::size_t>(), number(g, "length")};
        try {
          (void)Grid(c.grid->n, c.grid->length);
        } catch (const std::invalid_argument& e) {
          throw ConfigError(e.what());
        }
      }
    }

    if (j.contains("run")) {
      const json& r = j.at("run");
      c.run.t_final = number_or(r, "t_final", 0.0);
      c.run.dt = number_or(r, "dt", 5e-4);
      c.run.snapshot_every = r.value("snapshot_every", std::size_t{0});
      if (c.run.t_final < 0.0 || !(c.run.dt > 0.0)) {
        throw ConfigError("run needs t_final >= 0 and dt > 0");
      }
    }
    c.output = j.value("output", std::string{});

    if (j.contains("gv")) {
      const json& g = j.at("gv");
      c.gv = GvSpec{number(g, "k_min"), number(g, "k_max"), g.at("samples").get<int>()};
      if (c.gv->samples < 1 || c.gv->k_max < c.gv->k_min) {
        throw ConfigError("gv needs samples >= 1 and k_max >= k_min");
      }
    }
    if (j.contains("efficiency_scan")) {
      const json& e = j.at("efficiency_scan");
      EfficiencyScanSpec es;
      for (const json& v : e.at("omega_z")) {
        if (!v.is_number() || v.get<double>() < 0.0) throw ConfigError("omega_z values must be >= 0");
        es.omega_z.push_back(v.get<double>());
      }
      for (const json& v : e.at("nonlinearity")) {
        es.nonlinearity.push_back({number(v, "g"), number_or(v, "delta_g_ratio", 0.0)});
      }
      c.efficiency_scan = std::move(es);
    }
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed scenario: ") + e.what());
  }
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_scenario(j);
}

json to_json(const ScenarioConfig& c) {
  json j;
  j["system"] = system_json(c.system);
  j["pump"] = {{"k", c.pump.k}, {"branch", sign_of(c.pump.branch)}, {"amplitude", c.pump.amplitude}};
  j["width"] = c.width;
  j["matches"] = json::array();
  for (const auto& m : c.matches) {
    json mj{{"id", m.id}, {"configuration", m.configuration}};
    if (m.q_near) mj["q_near"] = *m.q_near;
    j["matches"].push_back(mj);
  }
  j["seeds"] = json::array();
  for (const auto& s : c.seeds) j["seeds"].push_back(seed_json(s));
  j["grid"] = c.grid ? json{{"n", c.grid->n}, {"length", c.grid->length}} : json("auto");
  j["run"] = {{"t_final", c.run.t_final}, {"dt", c.run.dt}, {"snapshot_every", c.run.snapshot_every}};
  j["output"] = c.output;
  if (c.gv) j["gv"] = {{"k_min", c.gv->k_min}, {"k_max", c.gv->k_max}, {"samples", c.gv->samples}};
  if (c.efficiency_scan) {
    json nl = json::array();
    for (const auto& n : c.efficiency_scan->nonlinearity) {
      nl.push_back({{"g", n.g}, {"delta_g_ratio", n.delta_g_ratio}});
    }
    j["efficiency_scan"] = {{"omega_z", c.efficiency_scan->omega_z}, {"nonlinearity", nl}};
  }
  return j;
}

Grid auto_grid(const std::vector<WavepacketSpec>& packets, double width, double t_final,
               const SystemParams& p) {
  double v_max = 0.0;
  double k_max = 0.0;
  for (const auto& w : packets) {
    double v;
    try {
      v = std::abs(group_velocity(w.k_center, w.branch, p));
    } catch (const DegenerateDispersion&) {
      v = std::abs(w.k_center) + 0.5 * std::abs(p.alpha);
    }
    v_max = std::max(v_max, v);
    k_max = std::max(k_max, std::abs(w.k_center));
  }
  const double length = 2.0 * (v_max * t_final + 5.0 * width);
  std::size_t n = 8192;
  while (Grid(n, length).nyquist() <= k_max + 6.0 / width) n *= 2;
  return Grid(n, length);
}

ResolvedScenario resolve(const ScenarioConfig& c) {
  if (!(c.width > 0.0)) throw ConfigError("\"width\" must be positive");
  ResolvedScenario r;
  r.system = c.system;
  r.width = c.width;
  r.run = c.run;

  for (const MatchSpec& m : c.matches) {
    const Configuration& cfg = configuration(m.configuration);
    if (cfg.signs.s1 != sign_of(c.pump.branch)) {
      throw ConfigError("match \"" + m.id + "\": configuration " + std::to_string(cfg.id) +
                        " needs the pump on branch " + std::to_string(cfg.signs.s1));
    }
    const auto sols = solve_configuration(cfg, c.pump.k, c.system);
    if (sols.empty()) {
      throw ConfigError("match \"" + m.id + "\": configuration " + std::to_string(cfg.id) +
                        " has no phase-matched solution at k1 = " + std::to_string(c.pump.k));
    }
    auto best = sols.back();  // ascending in q: largest q by default
    if (m.q_near) {
      best = *std::min_element(sols.begin(), sols.end(), [&](const auto& a, const auto& b) {
        return std::abs(a.q - *m.q_near) < std::abs(b.q - *m.q_near);
      });
    }
    r.matched.push_back(best);
  }

  r.packets.push_back({c.pump.amplitude, c.pump.k, c.pump.branch});
  r.labels.emplace_back("k1");
  r.generated.push_back(false);

  for (const SeedSpec& s : c.seeds) {
    WavepacketSpec w;
    w.amplitude = s.amplitude;
    if (s.k) {
      w.k_center = *s.k;
      w.branch = *s.branch;
    } else {
      if (c.matches.empty()) throw ConfigError("auto seed \"" + s.label + "\" needs a match");
      std::size_t idx = 0;
      if (s.match) {
        auto it = std::find_if(c.matches.begin(), c.matches.end(),
                               [&](const MatchSpec& m) { return m.id == *s.match; });
        if (it == c.matches.end()) throw ConfigError("unknown match id \"" + *s.match + "\"");
        idx = static_cast<std::size_t>(it - c.matches.begin());
      }
      const FwmSolution& sol = r.matched[idx];
      w.k_center = s.probe == Probe::Plus ? sol.k2 : sol.k3;
      const int sign = s.probe == Probe::Plus ? sol.config.signs.s2 : sol.config.signs.s3;
      w.branch = s.branch.value_or(branch_from_sign(sign));
    }
    r.packets.push_back(w);
    r.labels.push_back(s.label);
    r.generated.push_back(s.generated);
  }

  if (c.grid) {
    r.grid = Grid(c.grid->n, c.grid->length);
  } else {
    if (!(c.run.t_final > 0.0)) throw ConfigError("\"grid\": \"auto\" needs run.t_final > 0");
    r.grid = auto_grid(r.packets, c.width, c.run.t_final, c.system);
  }
  return r;
}

}  // namespace fwm
