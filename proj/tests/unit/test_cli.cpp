#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "phasenoise/cli.hpp"
#include "phasenoise/io.hpp"

using namespace phasenoise;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "phasenoise");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("phasenoise_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

fs::path write_config(const fs::path& dir, const json& j) {
  const auto path = dir / "config.json";
  std::ofstream(path) << j.dump(2);
  return path;
}

const fs::path kConfigs = fs::path(PHASENOISE_TEST_DATA).parent_path().parent_path() / "configs";

json small_simulation() {
  auto j = json::parse(slurp(kConfigs / "simulate_desk.json"));
  j["simulation"]["n_samples"] = 1 << 17;
  j["simulation"]["segment_length"] = 4096;
  j["tone"]["frequency_hz"] = 3.52e6;  // on the 40 kHz bin grid
  return j;
}

}  // namespace

TEST_CASE("argument errors") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"budget"}).code == 2);
  CHECK(run({"budget", "--config", "/nonexistent.json"}).code == 2);
  CHECK(run({"calibrate"}).code == 2);
}

TEST_CASE("transduce") {
  const auto dir = scratch("transduce");
  const auto r = run({"transduce", "--config", (kConfigs / "transduce_fig3.json").string(), "--out", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(fs::exists(dir / "detuning_sweep.csv"));
  CHECK(fs::exists(dir / "spectrum.csv"));
  const auto manifest = read_json(dir / "manifest.json");
  CHECK(manifest["tool"] == "phasenoise");
  CHECK(manifest["config_hash"].get<std::string>().size() == 16);
  CHECK(manifest["sweep_maxima_rad_per_s"].size() == 4);
  const auto sweep = read_csv(dir / "detuning_sweep.csv");
  CHECK(sweep.axis_name == "delta_rad_per_s");
  CHECK(sweep.axis.size() == 4001);

  const auto zero_dir = scratch("transduce_zero");
  REQUIRE(run({"transduce", "--config", (kConfigs / "transduce_resonant.json").string(), "--out",
               zero_dir.string()})
              .code == 0);
  const auto zero = read_csv(zero_dir / "detuning_sweep.csv");
  CHECK(zero.values.size() == 1);
  CHECK((zero.values == 0.0).all());
  CHECK((read_trace_csv(zero_dir / "spectrum.csv").values() == 0.0).all());

  auto j = json::parse(slurp(kConfigs / "transduce_fig3.json"));
  j["cavity"].erase("power_w");
  const auto bad = run({"transduce", "--config", write_config(dir, j).string()});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("power_w") != std::string::npos);
}

TEST_CASE("simulate and calibrate") {
  const auto dir = scratch("simulate");
  const auto config = write_config(dir, small_simulation()).string();
  REQUIRE(run({"simulate", "--config", config, "--out", (dir / "a").string()}).code == 0);
  REQUIRE(run({"simulate", "--config", config, "--out", (dir / "b").string()}).code == 0);
  REQUIRE(run({"simulate", "--config", config, "--out", (dir / "c").string(), "--seed", "7"}).code == 0);
  for (const char* f : {"raw.csv", "background.csv", "manifest.json"}) {
    CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
  }
  CHECK(slurp(dir / "a" / "raw.csv") != slurp(dir / "c" / "raw.csv"));
  CHECK(read_json(dir / "a" / "manifest.json")["seed"] == 2024);
  CHECK(read_json(dir / "c" / "manifest.json")["seed"] == 7);

  const auto cal = run({"calibrate", "--bundle", (dir / "a").string()});
  REQUIRE(cal.code == 0);
  const auto manifest = read_json(dir / "a" / "calibrated" / "manifest.json");
  CHECK(manifest["method"] == "ratio-at-tone");
  CHECK(manifest["validity"] == "near tone frequency");
  CHECK(manifest["s_ww_at_tone_rad2_hz"].get<double>() == doctest::Approx(1.6e4).epsilon(0.2));
  const auto spectrum = read_trace_csv(dir / "a" / "calibrated" / "calibrated.csv");
  CHECK(spectrum.unit() == Unit::frequency_noise);

  REQUIRE(run({"calibrate", "--bundle", (dir / "a").string(), "--mode", "deconvolved", "--out",
               (dir / "d").string()})
              .code == 0);
  CHECK(read_json(dir / "d" / "manifest.json")["method"] == "deconvolved");
  CHECK(run({"calibrate", "--bundle", (dir / "a").string(), "--mode", "bogus"}).code == 2);

  SUBCASE("missing simulation section") {
    auto j = small_simulation();
    j.erase("simulation");
    const auto r = run({"simulate", "--config", write_config(dir, j).string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("simulation") != std::string::npos);
  }
  SUBCASE("bundle without a tone") {
    auto j = small_simulation();
    j.erase("tone");
    REQUIRE(run({"simulate", "--config", write_config(dir, j).string(), "--out", (dir / "e").string()}).code == 0);
    const auto r = run({"calibrate", "--bundle", (dir / "e").string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("tone not found") != std::string::npos);
  }
  SUBCASE("background-only bundle") {
    fs::copy_file(dir / "a" / "background.csv", dir / "a" / "raw.csv", fs::copy_options::overwrite_existing);
    const auto r = run({"calibrate", "--bundle", (dir / "a").string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("tone not found") != std::string::npos);
  }
}

TEST_CASE("budget") {
  const auto dir = scratch("budget");
  const auto infeasible = run({"budget", "--config", (kConfigs / "budget_ghz_resonator.json").string(), "--out",
                         dir.string(), "--sweep-power"});
  REQUIRE(infeasible.code == 0);
  const auto report = read_json(dir / "report.json");
  CHECK(json::parse(infeasible.out) == report);
  CHECK(report["feasible"] == false);
  CHECK(report["s_ww_threshold_rad2_hz"].get<double>() == doctest::Approx(4.17e5).epsilon(0.01));
  CHECK(report["n_f_min"].get<double>() > 5.0);
  CHECK(report["n_f_min"].get<double>() < 8.0);
  CHECK(read_json(dir / "manifest.json")["files"]["power_sweep"] == "power_sweep.csv");

  // n_f(P): falls, then rises, one minimum
  std::ifstream csv(dir / "power_sweep.csv");
  std::string line;
  std::getline(csv, line);
  CHECK(line == "power_w,n_f");
  std::vector<double> n;
  while (std::getline(csv, line)) n.push_back(std::stod(line.substr(line.find(',') + 1)));
  REQUIRE(n.size() == 121);
  int turns = 0;
  for (std::size_t i = 1; i + 1 < n.size(); ++i) {
    if ((n[i] - n[i - 1]) * (n[i + 1] - n[i]) < 0) ++turns;
  }
  CHECK(turns == 1);
  CHECK(n.front() > n[60]);
  CHECK(n.back() > n[60]);

  const auto quiet = run({"budget", "--config", (kConfigs / "budget_quiet.json").string(), "--out",
                          (dir / "q").string()});
  REQUIRE(quiet.code == 0);
  CHECK(json::parse(quiet.out)["feasible"] == true);
  CHECK_FALSE(fs::exists(dir / "q" / "power_sweep.csv"));

  auto j = json::parse(slurp(kConfigs / "budget_quiet.json"));
  j["cavity"]["kappa_hz"] = 5e9;
  const auto unresolved = run({"budget", "--config", write_config(dir, j).string(), "--out", (dir / "u").string()});
  CHECK(unresolved.code == 0);
  CHECK(unresolved.err.find("warning") != std::string::npos);

  j.erase("mechanics");
  CHECK(run({"budget", "--config", write_config(dir, j).string()}).code == 2);
}

TEST_CASE("exit code for an internal inconsistency") {
  CHECK(cli::kInconsistent == 3);
  CHECK(cli::kConfigError == 2);
}
