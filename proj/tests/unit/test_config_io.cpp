#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "phasenoise/config.hpp"
#include "phasenoise/io.hpp"

using namespace phasenoise;
using nlohmann::json;

namespace {

json minimal() {
  return json::parse(R"({
    "laser": {"components": [{"type": "white", "level_rad2_hz": 5.0}]},
    "cavity": {"kappa_hz": 2e6, "eta": 0.5, "wavelength_m": 1.55e-6, "power_w": 1e-3, "detuning_hz": -1e6}
  })");
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("phasenoise_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("hash helpers") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(hex64(fnv1a64("a")) == "af63dc4c8601ec8c");
  CHECK(hex64(1) == "0000000000000001");
}

TEST_CASE("config: Hz keys become rad/s") {
  auto j = minimal();
  j["mechanics"] = {{"omega_m_hz", 3.68e9}, {"q_m", 5e4}, {"temperature_k", 30.0}, {"g0_hz", 0.91e6}};
  const auto cfg = parse_config(j);
  REQUIRE(cfg.cavity);
  CHECK(cfg.cavity->cavity.kappa == doctest::Approx(angular(2e6)));
  CHECK(*cfg.cavity->detuning == doctest::Approx(angular(-1e6)));
  CHECK(cfg.cavity->cavity.optical_omega == doctest::Approx(1215259075683131.0));
  CHECK(cfg.mechanics->omega_m() == doctest::Approx(angular(3.68e9)));
  CHECK(cfg.mechanics->q_m() == doctest::Approx(5e4));
  CHECK_FALSE(cfg.simulation);
  CHECK(cfg.hash.size() == 16);
  CHECK(parse_config(j).hash == cfg.hash);
  j["cavity"]["eta"] = 0.4;
  CHECK(parse_config(j).hash != cfg.hash);
}

TEST_CASE("config: rejects bad input") {
  auto unknown = minimal();
  unknown["cavity"]["kappa"] = 1.0;
  CHECK_THROWS_AS(parse_config(unknown), ConfigError);

  auto top = minimal();
  top["extra"] = 1;
  CHECK_THROWS_AS(parse_config(top), ConfigError);

  auto eta = minimal();
  eta["cavity"]["eta"] = 1.5;
  CHECK_THROWS_AS(parse_config(eta), ConfigError);

  auto both = minimal();
  both["cavity"]["optical_frequency_hz"] = 1.9e14;
  CHECK_THROWS_AS(parse_config(both), ConfigError);

  auto model = minimal();
  model["laser"]["components"][0]["type"] = "pink";
  CHECK_THROWS_AS(parse_config(model), ConfigError);

  auto empty = minimal();
  empty["laser"]["components"] = json::array();
  CHECK_THROWS_AS(parse_config(empty), ConfigError);

  auto sim = minimal();
  sim["simulation"] = {{"sample_rate_hz", 1e6}, {"n_samples", 1000}};
  CHECK_THROWS_AS(parse_config(sim), ConfigError);

  auto budget = minimal();
  budget["budget"] = {{"power_w", "max"}};
  CHECK_THROWS_AS(parse_config(budget), ConfigError);

  auto mech = minimal();
  mech["mechanics"] = {{"omega_m_hz", 3.68e9}, {"q_m", 5e4}, {"temperature_k", 30.0}};
  CHECK_THROWS_AS(parse_config(mech), ConfigError);

  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("config: tone, budget, tabulated laser") {
  auto j = minimal();
  j["tone"] = {{"frequency_hz", 3.5e6}, {"v_pi_v", 5.0}, {"v_drive_v", 0.159}};
  j["budget"] = {{"power_w", "optimize"}, {"include_backaction", false}};
  j["laser"]["components"].push_back({{"type", "tabulated"}, {"file", "tabulated_laser.csv"}});
  const auto cfg = parse_config(j, PHASENOISE_TEST_DATA);
  CHECK(cfg.tone->delta_phi == doctest::Approx(0.09990264638415543));
  CHECK(cfg.tone->omega_mod == doctest::Approx(angular(3.5e6)));
  CHECK_FALSE(cfg.budget->power);
  CHECK_FALSE(cfg.budget->include_backaction);
  CHECK(cfg.laser->components().size() == 2);
  CHECK(eval_model(*cfg.laser, 1e6) == doctest::Approx(2005.0));
  CHECK_THROWS_AS(parse_config(j, "/nonexistent"), ConfigError);
}

TEST_CASE("bundle round trip") {
  const auto dir = scratch("bundle");
  const FrequencyGrid g = FrequencyGrid::linear(0.0, 100.0, 11);
  ExperimentBundle bundle{SpectrumTrace(g, Eigen::ArrayXd::LinSpaced(11, 1.0, 2.0), Unit::current_noise, 1.5),
                          SpectrumTrace(g, Eigen::ArrayXd::Constant(11, 0.5), Unit::current_noise, 1.5),
                          ToneDescriptor(0.1, 50.0, 1.5), 1e-3};
  SimConfig sim;
  sim.sample_rate = 1e3;
  sim.n_samples = 1024;
  sim.seed = 42;
  const CavityParams c(10.0, 0.5, 1e15);
  write_bundle(dir, bundle, {c, DriveParams(1e-3, -5.0), sim}, base_manifest("simulate", "abc", 42));
  for (const char* f : {"raw.csv", "background.csv", "manifest.json"}) CHECK(std::filesystem::exists(dir / f));

  const auto loaded = read_bundle(dir);
  CHECK((loaded.raw.values() - bundle.raw.values()).abs().maxCoeff() < 1e-8);
  CHECK(loaded.raw.grid().size() == 11);
  CHECK(*loaded.raw.rbw_hz() == doctest::Approx(1.5));
  REQUIRE(loaded.tone);
  CHECK(loaded.tone->omega_mod == 50.0);
  CHECK(loaded.cavity->kappa == 10.0);
  CHECK(*loaded.detuning == -5.0);
  CHECK(loaded.manifest["seed"] == 42);
  CHECK(loaded.manifest["tool"] == "phasenoise");
  CHECK(loaded.manifest["version"] == "0.1.0");

  bundle.tone.reset();
  write_bundle(dir, bundle, {c, DriveParams(1e-3, -5.0), sim}, base_manifest("simulate", "abc", 42));
  CHECK_FALSE(read_bundle(dir).tone);

  CHECK_THROWS_AS(read_bundle(dir / "missing"), IoError);
  std::ofstream(dir / "manifest.json") << "{\"files\": {}}";
  CHECK_THROWS_AS(read_bundle(dir), IoError);
}

TEST_CASE("report json keys") {
  CoolingBudgetReport r;
  r.power = 1e-3;
  r.n_f = 2.0;
  const auto j = to_json(r);
  CHECK(j["power_w"] == 1e-3);
  CHECK(j["p_opt_w"].is_null());
  CHECK(j["n_f"] == 2.0);
  for (const char* key : {"feasible", "n_th", "s_ww_threshold_rad2_hz", "n_f_min", "n_f_backaction", "n_p",
                          "gamma_cool_rad_per_s", "s_ff_l_n2_per_hz", "n_l", "resolved_sideband"}) {
    CHECK(j.contains(key));
  }
}
