#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kScenarios{FWM_SCENARIO_DIR};

int run(const std::string& args) {
  const std::string cmd = std::string(FWM_BINARY) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("fwm_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_json(const fs::path& p, const json& j) { std::ofstream(p) << j.dump(2); }

}  // namespace

TEST_CASE("match writes a report and is deterministic") {
  const fs::path a = scratch("match_a"), b = scratch("match_b");
  const std::string cfg = (kScenarios / "fig1a_match.json").string();
  REQUIRE(run("match --config " + cfg + " --out " + a.string()) == 0);
  REQUIRE(run("match --config " + cfg + " --out " + b.string()) == 0);
  const std::string text = slurp(a / "match.json");
  CHECK(text == slurp(b / "match.json"));
  const json report = json::parse(text);
  for (int id : {1, 2, 3}) {
    CAPTURE(id);
    const json& c = report.at("configurations").at(id - 1);
    CHECK(c.at("id") == id);
    CHECK_FALSE(c.at("solutions").empty());
  }
}

TEST_CASE("match with no solutions still succeeds") {
  const fs::path out = scratch("match_empty");
  REQUIRE(run("match --config " + (kScenarios / "fig1c_alpha5.json").string() + " --out " +
              out.string()) == 0);
  const json report = json::parse(slurp(out / "match.json"));
  CHECK(report.at("configurations").at(3).at("solutions").empty());
}

TEST_CASE("gv csv") {
  const fs::path out = scratch("gv");
  REQUIRE(run("gv --config " + (kScenarios / "fig2a_gv.json").string() + " --out " + out.string() +
              " --k-min -1 --k-max 1 --samples 5") == 0);
  std::istringstream csv(slurp(out / "gv.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "k1,config,s1,s2,s3,q,k2,k3,v_pump,v_k2,v_k3");
  int rows = 0;
  while (std::getline(csv, line)) ++rows;
  CHECK(rows >= 5 * 4);
}

TEST_CASE("simulate a short run") {
  const fs::path dir = scratch("simulate");
  json j = json::parse(slurp(kScenarios / "fig3.json"));
  j["width"] = 10;
  j["grid"] = {{"n", 1024}, {"length", 200}};
  j["run"] = {{"t_final", 1.0}, {"dt", 0.01}, {"snapshot_every", 50}};
  write_json(dir / "s.json", j);
  REQUIRE(run("simulate --config " + (dir / "s.json").string() + " --out " + (dir / "out").string()) == 0);
  const json summary = json::parse(slurp(dir / "out" / "summary.json"));
  CHECK(summary.at("diagnostics").at("relative_drift").at("norm").get<double>() < 1e-10);
  CHECK(fs::exists(dir / "out" / "snapshots" / "snap_00000.bin"));
  CHECK(fs::exists(dir / "out" / "snapshots" / "snap_00002.json"));
  CHECK(fs::file_size(dir / "out" / "snapshots" / "snap_00000.bin") == 4 * 1024 * 16);
  CHECK(fs::exists(dir / "out" / "conservation.jsonl"));
  CHECK(summary.at("efficiency").size() == 1);

  // Rerun is bit-identical.
  REQUIRE(run("simulate --config " + (dir / "s.json").string() + " --out " + (dir / "again").string()) == 0);
  CHECK(slurp(dir / "out" / "summary.json") == slurp(dir / "again" / "summary.json"));
}

TEST_CASE("efficiency-scan csv") {
  const fs::path dir = scratch("eff");
  json j = json::parse(slurp(kScenarios / "fig8_left.json"));
  j["width"] = 10;
  j["grid"] = {{"n", 1024}, {"length", 200}};
  j["run"] = {{"t_final", 0.5}, {"dt", 0.01}, {"snapshot_every", 0}};
  j["efficiency_scan"]["nonlinearity"] = json::array({{{"g", 0.8}, {"delta_g_ratio", 0.05}}});
  write_json(dir / "s.json", j);
  REQUIRE(run("efficiency-scan --config " + (dir / "s.json").string() + " --out " + dir.string() +
              " --omega-z 0,1,2 --parallel 2") == 0);
  std::istringstream csv(slurp(dir / "efficiency.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "omega_z,g,g1,g2,eta_percent");
  int rows = 0;
  while (std::getline(csv, line)) {
    std::istringstream fields(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(fields, cell, ',')) v.push_back(std::stod(cell));
    REQUIRE(v.size() == 5);
    CHECK(v[0] == rows);
    CHECK(v[2] == doctest::Approx(0.84));
    CHECK(v[3] == doctest::Approx(0.76));
    CHECK(v[4] >= 0.0);
    ++rows;
  }
  CHECK(rows == 3);
}

TEST_CASE("exit codes") {
  const fs::path dir = scratch("errors");
  CHECK(run("") == 2);
  CHECK(run("frobnicate") == 2);
  CHECK(run("match") == 2);
  CHECK(run("match --config " + (dir / "absent.json").string()) == 2);

  std::ofstream(dir / "broken.json") << "{ not json";
  CHECK(run("match --config " + (dir / "broken.json").string() + " --out " + dir.string()) == 2);

  json j = json::parse(slurp(kScenarios / "fig3.json"));
  j["system"].erase("alpha");
  write_json(dir / "noalpha.json", j);
  CHECK(run("simulate --config " + (dir / "noalpha.json").string() + " --out " + dir.string()) == 2);

  // A time step far too large for this grid blows up.
  j = json::parse(slurp(kScenarios / "fig3.json"));
  j["system"]["g"] = 1e6;
  j["system"]["g1"] = 1e6;
  j["system"]["g2"] = 1e6;
  j["pump"]["amplitude"] = 1e200;
  j["width"] = 10;
  j["grid"] = {{"n", 1024}, {"length", 200}};
  j["run"] = {{"t_final", 1.0}, {"dt", 0.5}, {"snapshot_every", 0}};
  write_json(dir / "nan.json", j);
  CHECK(run("simulate --config " + (dir / "nan.json").string() + " --out " + (dir / "nan").string()) == 3);
}
