#include "phasenoise/io.hpp"

#include <array>
#include <cstdio>
#include <fstream>

namespace phasenoise {

namespace {

nlohmann::json optional_value(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string hex64(std::uint64_t value) {
  std::array<char, 17> buffer{};
  std::snprintf(buffer.data(), buffer.size(), "%016llx", static_cast<unsigned long long>(value));
  return buffer.data();
}

nlohmann::json base_manifest(std::string_view command, std::string_view config_hash,
                             std::optional<std::uint64_t> seed) {
  nlohmann::json m;
  m["tool"] = kToolName;
  m["version"] = kToolVersion;
  m["command"] = command;
  m["config_hash"] = config_hash;
  m["seed"] = seed ? nlohmann::json(*seed) : nlohmann::json(nullptr);
  return m;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& value) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << value.dump(2) << '\n';
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

void write_bundle(const std::filesystem::path& dir, const ExperimentBundle& bundle, const BundleContext& context,
                  nlohmann::json manifest) {
  std::filesystem::create_directories(dir);
  write_trace_csv(dir / "raw.csv", bundle.raw);
  write_trace_csv(dir / "background.csv", bundle.background);

  manifest["files"] = {{"raw", "raw.csv"}, {"background", "background.csv"}};
  manifest["units"] = unit_symbol(bundle.raw.unit());
  manifest["rbw_hz"] = optional_value(bundle.raw.rbw_hz());
  manifest["mean_photocurrent_a"] = bundle.mean_photocurrent;
  if (bundle.tone) {
    manifest["tone"] = {{"delta_phi_rad", bundle.tone->delta_phi},
                        {"omega_mod_rad_per_s", bundle.tone->omega_mod},
                        {"rbw_hz", bundle.tone->rbw_hz}};
  } else {
    manifest["tone"] = nullptr;
  }
  manifest["cavity"] = {{"kappa_rad_per_s", context.cavity.kappa},
                        {"eta", context.cavity.eta},
                        {"optical_omega_rad_per_s", context.cavity.optical_omega},
                        {"power_w", context.drive.power},
                        {"detuning_rad_per_s", context.drive.detuning}};
  manifest["simulation"] = {{"sample_rate_hz", context.sim.sample_rate},
                            {"n_samples", context.sim.n_samples},
                            {"seed", context.sim.seed},
                            {"segment_length", context.sim.welch.segment_length},
                            {"overlap", context.sim.welch.overlap},
                            {"window", "hann"}};
  write_json(dir / "manifest.json", manifest);
}

LoadedBundle read_bundle(const std::filesystem::path& dir) {
  const auto manifest = read_json(dir / "manifest.json");
  try {
    const auto& files = manifest.at("files");
    auto raw = read_trace_csv(dir / files.at("raw").get<std::string>());
    auto background = read_trace_csv(dir / files.at("background").get<std::string>());

    std::optional<ToneDescriptor> tone;
    if (manifest.contains("tone") && !manifest["tone"].is_null()) {
      const auto& t = manifest["tone"];
      tone.emplace(t.at("delta_phi_rad").get<double>(), t.at("omega_mod_rad_per_s").get<double>(),
                   t.at("rbw_hz").get<double>());
    }
    std::optional<CavityParams> cavity;
    std::optional<double> detuning;
    if (manifest.contains("cavity") && !manifest["cavity"].is_null()) {
      const auto& c = manifest["cavity"];
      cavity.emplace(c.at("kappa_rad_per_s").get<double>(), c.at("eta").get<double>(),
                     c.at("optical_omega_rad_per_s").get<double>());
      detuning = c.at("detuning_rad_per_s").get<double>();
    }
    return {std::move(raw), std::move(background), tone, cavity, detuning, manifest};
  } catch (const nlohmann::json::exception& e) {
    throw IoError((dir / "manifest.json").string() + ": " + e.what());
  }
}

nlohmann::json to_json(const CoolingBudgetReport& r) {
  nlohmann::json j;
  j["power_w"] = optional_value(r.power);
  j["power_optimized"] = r.optimized;
  j["backaction_included"] = r.backaction_included;
  j["resolved_sideband"] = r.resolved_sideband;
  j["n_th"] = r.n_th;
  j["gamma_m_rad_per_s"] = r.gamma_m;
  j["gamma_decoherence_rad_per_s"] = r.decoherence;
  j["s_ww_at_omega_m_rad2_hz"] = r.s_ww_at_omega_m;
  j["s_ww_threshold_rad2_hz"] = r.s_ww_threshold;
  j["feasible"] = r.feasible;
  j["n_p"] = optional_value(r.n_p);
  j["gamma_cool_rad_per_s"] = optional_value(r.gamma_cool);
  j["s_ff_l_n2_per_hz"] = optional_value(r.force_psd);
  j["n_l"] = optional_value(r.n_l);
  j["n_f_excess"] = optional_value(r.n_f_excess);
  j["n_f"] = optional_value(r.n_f);
  j["p_opt_w"] = optional_value(r.optimal_power);
  j["n_f_min"] = r.n_f_min;
  j["n_f_backaction"] = r.n_f_backaction;
  return j;
}

}  // namespace phasenoise
