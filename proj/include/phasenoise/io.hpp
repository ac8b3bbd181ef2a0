#pragma once

// On-disk formats: experiment bundles (CSV traces + JSON manifest) and the
// flat JSON cooling-budget report.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>

#include <json.hpp>

#include "phasenoise/calibration.hpp"
#include "phasenoise/cooling.hpp"
#include "phasenoise/timedomain.hpp"

namespace phasenoise {

inline constexpr std::string_view kToolName = "phasenoise";
inline constexpr std::string_view kToolVersion = "0.1.0";

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t value);

/// Manifest skeleton shared by every output directory.
nlohmann::json base_manifest(std::string_view command, std::string_view config_hash,
                             std::optional<std::uint64_t> seed);

void write_json(const std::filesystem::path& path, const nlohmann::json& value);
nlohmann::json read_json(const std::filesystem::path& path);

struct BundleContext {
  CavityParams cavity;
  DriveParams drive;
  SimConfig sim;
};

/// Writes raw.csv, background.csv and manifest.json into dir.
void write_bundle(const std::filesystem::path& dir, const ExperimentBundle& bundle, const BundleContext& context,
                  nlohmann::json manifest);

struct LoadedBundle {
  SpectrumTrace raw;
  SpectrumTrace background;
  std::optional<ToneDescriptor> tone;
  std::optional<CavityParams> cavity;
  std::optional<double> detuning;
  nlohmann::json manifest;
};

LoadedBundle read_bundle(const std::filesystem::path& dir);

nlohmann::json to_json(const CoolingBudgetReport& report);

}  // namespace phasenoise
