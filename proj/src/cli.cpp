#include "phasenoise/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>

#include "phasenoise/calibration.hpp"
#include "phasenoise/config.hpp"
#include "phasenoise/cooling.hpp"
#include "phasenoise/io.hpp"
#include "phasenoise/timedomain.hpp"

namespace phasenoise::cli {

namespace {

using nlohmann::json;

template <typename T>
const T& require(const std::optional<T>& section, const char* name, const std::string& command) {
  if (!section) throw ConfigError(command + " needs a '" + name + "' section");
  return *section;
}

RunConfig load(const Options& options) {
  if (!options.config) throw ConfigError(options.command + " needs --config <file>");
  return load_config(*options.config);
}

std::filesystem::path output_dir(const Options& options, const RunConfig* config, const std::filesystem::path& fallback) {
  if (options.out) return *options.out;
  if (config && config->output_dir) return *config->output_dir;
  return fallback;
}

int transduce(const Options& options, std::ostream& out) {
  const auto config = load(options);
  const auto& laser = require(config.laser, "laser", options.command);
  const auto& cav = require(config.cavity, "cavity", options.command);
  const auto& t = require(config.transduce, "transduce", options.command);
  if (!cav.power) throw ConfigError("transduce needs cavity.power_w");
  if (!cav.detuning) throw ConfigError("transduce needs cavity.detuning_hz for the fixed-detuning spectrum");

  const double s_ww = t.s_ww.value_or(eval_model(laser, t.analysis_omega));
  const Eigen::ArrayXd detunings = Eigen::ArrayXd::LinSpaced(t.detuning_points, t.detuning_min, t.detuning_max);
  const auto sweep = detuning_sweep(cav.cavity, *cav.power, t.analysis_omega, s_ww, detunings);

  const FrequencyGrid grid = t.spectrum_kind == GridKind::logarithmic
                                 ? FrequencyGrid::logarithmic(t.spectrum_min, t.spectrum_max, t.spectrum_points)
                                 : FrequencyGrid::linear(t.spectrum_min, t.spectrum_max, t.spectrum_points);
  const auto spectrum = transduced_power_psd(cav.cavity, DriveParams(*cav.power, *cav.detuning), eval_model(laser, grid));

  const auto dir = output_dir(options, &config, "transduce_out");
  std::filesystem::create_directories(dir);
  write_csv(dir / "detuning_sweep.csv", to_csv_curve(sweep));
  write_trace_csv(dir / "spectrum.csv", spectrum);

  auto manifest = base_manifest("transduce", config.hash, std::nullopt);
  manifest["files"] = {{"detuning_sweep", "detuning_sweep.csv"}, {"spectrum", "spectrum.csv"}};
  manifest["analysis_omega_rad_per_s"] = t.analysis_omega;
  manifest["s_ww_rad2_hz"] = s_ww;
  manifest["sweep_maxima_rad_per_s"] = sweep.maxima;
  manifest["sweep_global_min_rad_per_s"] = sweep.global_min_detuning;
  manifest["spectrum_detuning_rad_per_s"] = *cav.detuning;
  write_json(dir / "manifest.json", manifest);
  out << "wrote " << dir.string() << '\n';
  return kSuccess;
}

int simulate(const Options& options, std::ostream& out) {
  const auto config = load(options);
  const auto& laser = require(config.laser, "laser", options.command);
  const auto& cav = require(config.cavity, "cavity", options.command);
  auto sim = require(config.simulation, "simulation", options.command);
  const auto& detector = require(config.detector, "detector", options.command);
  if (!cav.power || !cav.detuning) throw ConfigError("simulate needs cavity.power_w and cavity.detuning_hz");
  if (options.seed) sim.seed = *options.seed;

  std::optional<CalibrationTone> tone;
  if (config.tone) tone = CalibrationTone{config.tone->delta_phi, config.tone->omega_mod};
  const DriveParams drive(*cav.power, *cav.detuning);
  const auto bundle = run_experiment(laser, cav.cavity, drive, detector, sim, tone);

  const auto dir = output_dir(options, &config, "simulate_out");
  write_bundle(dir, bundle, {cav.cavity, drive, sim}, base_manifest("simulate", config.hash, sim.seed));
  out << "wrote " << dir.string() << '\n';
  return kSuccess;
}

int calibrate(const Options& options, std::ostream& out) {
  std::optional<RunConfig> config;
  if (options.config) config = load_config(*options.config);
  if (!options.bundle) throw ConfigError("calibrate needs --bundle <dir>");
  const auto bundle = read_bundle(*options.bundle);
  if (!bundle.tone) throw ToneNotFoundError("tone not found: bundle manifest has no calibration tone");

  CalibrationOptions cal;
  if (config && config->calibration) {
    cal.mode = config->calibration->mode;
    cal.cluster_half_width = config->calibration->cluster_half_width;
    cal.fit_half_width = config->calibration->fit_half_width;
  }
  if (options.mode) cal.mode = parse_mode(*options.mode);
  cal.cavity = bundle.cavity;
  cal.detuning = bundle.detuning;

  const auto result = calibrate_spectrum(bundle.raw, bundle.background, *bundle.tone, cal);

  const auto dir = output_dir(options, config ? &*config : nullptr, *options.bundle / "calibrated");
  std::filesystem::create_directories(dir);
  write_trace_csv(dir / "calibrated.csv", result.spectrum);

  const auto bundle_hash = bundle.manifest.value("config_hash", std::string());
  auto manifest = base_manifest("calibrate", config ? config->hash : bundle_hash,
                                bundle.manifest.contains("seed") && bundle.manifest["seed"].is_number_unsigned()
                                    ? std::optional<std::uint64_t>(bundle.manifest["seed"].get<std::uint64_t>())
                                    : std::nullopt);
  manifest["source_bundle"] = std::filesystem::absolute(*options.bundle).lexically_normal().string();
  manifest["method"] = mode_name(result.mode);
  manifest["validity"] = result.mode == CalibrationMode::ratio_at_tone ? "near tone frequency" : "full band";
  manifest["files"] = {{"calibrated", "calibrated.csv"}};
  manifest["s_ww_at_tone_rad2_hz"] = result.s_ww_at_tone;
  manifest["tone"] = {{"omega_mod_rad_per_s", bundle.tone->omega_mod},
                      {"delta_phi_rad", bundle.tone->delta_phi},
                      {"rbw_hz", bundle.tone->rbw_hz},
                      {"calibration_level_rad2_hz", calibration_tone_psd(*bundle.tone)},
                      {"measured_snr", result.tone.snr}};
  write_json(dir / "manifest.json", manifest);
  out << "S_ww at tone: " << result.s_ww_at_tone << " rad^2 Hz (" << mode_name(result.mode) << ")\n";
  out << "wrote " << dir.string() << '\n';
  return kSuccess;
}

int budget(const Options& options, std::ostream& out, std::ostream& err) {
  const auto config = load(options);
  const auto& mech = require(config.mechanics, "mechanics", options.command);
  const auto& cav = require(config.cavity, "cavity", options.command);
  const auto& laser = require(config.laser, "laser", options.command);
  const BudgetSection section = config.budget.value_or(BudgetSection{});

  const auto report = budget_report(mech, cav.cavity, laser, {section.power, section.include_backaction});
  if (!report.resolved_sideband) {
    err << "warning: kappa / Omega_m = " << cav.cavity.kappa / mech.omega_m()
        << " > 0.5, resolved-sideband formulas are outside their validity range\n";
  }

  const auto dir = output_dir(options, &config, "budget_out");
  std::filesystem::create_directories(dir);
  const auto report_json = to_json(report);
  write_json(dir / "report.json", report_json);

  auto manifest = base_manifest("budget", config.hash, std::nullopt);
  manifest["files"] = {{"report", "report.json"}};

  if (options.sweep_power) {
    double lo = section.sweep_min;
    double hi = section.sweep_max;
    if (!(lo > 0.0)) {
      const double center = report.optimal_power.value_or(1e-3);
      lo = center * 1e-3;
      hi = center * 1e3;
    }
    const Eigen::ArrayXd powers =
        Eigen::ArrayXd::LinSpaced(section.sweep_points, std::log(lo), std::log(hi)).exp();
    Eigen::ArrayXd n_f(powers.size());
    for (Eigen::Index i = 0; i < powers.size(); ++i) {
      n_f(i) = final_occupancy(mech, cav.cavity, powers(i), report.s_ww_at_omega_m,
                               {.include_backaction = section.include_backaction});
    }
    std::ofstream csv(dir / "power_sweep.csv", std::ios::binary);
    csv << "power_w,n_f\n";
    for (Eigen::Index i = 0; i < powers.size(); ++i) {
      std::array<char, 64> line{};
      std::snprintf(line.data(), line.size(), "%.8e,%.8e\n", powers(i), n_f(i));
      csv << line.data();
    }
    manifest["files"]["power_sweep"] = "power_sweep.csv";
  }
  write_json(dir / "manifest.json", manifest);
  out << report_json.dump(2) << '\n';
  return kSuccess;
}

}  // namespace

int run(const Options& options, std::ostream& out, std::ostream& err) {
  try {
    if (options.command == "transduce") return transduce(options, out);
    if (options.command == "simulate") return simulate(options, out);
    if (options.command == "calibrate") return calibrate(options, out);
    if (options.command == "budget") return budget(options, out, err);
    err << "error: unknown command '" << options.command << "'\n";
    return kConfigError;
  } catch (const InconsistencyError& e) {
    err << "internal inconsistency: " << e.what() << '\n';
    return kInconsistent;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
}

int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Laser frequency-noise transduction, calibration and sideband-cooling budget"};
  app.require_subcommand(1, 1);
  Options options;
  std::string config;
  std::string out_dir;
  std::string bundle;
  std::uint64_t seed = 0;
  std::string mode;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "run configuration (JSON)");
    sub->add_option("--out", out_dir, "output directory");
  };
  auto* transduce_cmd = app.add_subcommand("transduce", "cavity transduction: detuning sweep and fixed-detuning spectrum");
  add_common(transduce_cmd);
  auto* simulate_cmd = app.add_subcommand("simulate", "Monte-Carlo measurement chain, writes a bundle");
  add_common(simulate_cmd);
  simulate_cmd->add_option("--seed", seed, "override simulation.seed");
  auto* calibrate_cmd = app.add_subcommand("calibrate", "absolute S_ww from a bundle via the calibration tone");
  add_common(calibrate_cmd);
  calibrate_cmd->add_option("--bundle", bundle, "bundle directory written by simulate")->required();
  calibrate_cmd->add_option("--mode", mode, "ratio-at-tone | deconvolved");
  auto* budget_cmd = app.add_subcommand("budget", "sideband-cooling budget report");
  add_common(budget_cmd);
  budget_cmd->add_flag("--sweep-power", options.sweep_power, "also write n_f(P) to power_sweep.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }

  const auto* sub = app.get_subcommands().front();
  options.command = sub->get_name();
  if (!config.empty()) options.config = config;
  if (!out_dir.empty()) options.out = out_dir;
  if (!bundle.empty()) options.bundle = bundle;
  if (!mode.empty()) options.mode = mode;
  if (sub == simulate_cmd && simulate_cmd->count("--seed") > 0) options.seed = seed;
  return run(options, out, err);
}

}  // namespace phasenoise::cli
