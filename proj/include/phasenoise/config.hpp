#pragma once

// Run configuration for the command-line tool. JSON with SI-suffixed keys;
// every *_hz key is an ordinary frequency and is converted to rad/s here.

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "phasenoise/calibration.hpp"
#include "phasenoise/cavity.hpp"
#include "phasenoise/cooling.hpp"
#include "phasenoise/noise_models.hpp"
#include "phasenoise/timedomain.hpp"

namespace phasenoise {

struct CavitySection {
  CavityParams cavity;
  std::optional<double> power;     // W
  std::optional<double> detuning;  // rad/s
};

struct TransduceSection {
  double analysis_omega = 0.0;  // rad/s
  std::optional<double> s_ww;   // rad² Hz; defaults to the laser model at analysis_omega
  double detuning_min = 0.0;
  double detuning_max = 0.0;
  Eigen::Index detuning_points = 0;
  double spectrum_min = 0.0;
  double spectrum_max = 0.0;
  Eigen::Index spectrum_points = 0;
  GridKind spectrum_kind = GridKind::linear;
};

struct ToneSection {
  double omega_mod = 0.0;
  double delta_phi = 0.0;
};

struct BudgetSection {
  std::optional<double> power;  // absent: optimize
  bool include_backaction = true;
  double sweep_min = 0.0;  // W, 0: derived from P*
  double sweep_max = 0.0;
  Eigen::Index sweep_points = 121;
};

struct CalibrationSection {
  CalibrationMode mode = CalibrationMode::ratio_at_tone;
  Eigen::Index cluster_half_width = 3;
  Eigen::Index fit_half_width = 16;
};

struct RunConfig {
  std::optional<CompositeNoiseModel> laser;
  std::optional<CavitySection> cavity;
  std::optional<MechanicsParams> mechanics;
  std::optional<SimConfig> simulation;
  std::optional<DetectorParams> detector;
  std::optional<ToneSection> tone;
  std::optional<TransduceSection> transduce;
  std::optional<BudgetSection> budget;
  std::optional<CalibrationSection> calibration;
  std::optional<std::filesystem::path> output_dir;

  std::string hash;  // FNV-1a of the canonical JSON dump
};

/// Throws ConfigError on unknown keys, missing keys or invalid values.
RunConfig parse_config(const nlohmann::json& root, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

}  // namespace phasenoise
