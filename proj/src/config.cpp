#include "phasenoise/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "phasenoise/io.hpp"

namespace phasenoise {

namespace {

using nlohmann::json;

// Reads keys from one JSON object and rejects whatever was not read.
class Section {
 public:
  Section(const json& node, std::string name) : node_(node), name_(std::move(name)) {
    if (!node_.is_object()) throw ConfigError(name_ + ": expected an object");
  }

  bool has(const std::string& key) const { return node_.contains(key); }

  double number(const std::string& key) {
    const auto& v = fetch(key);
    if (!v.is_number()) throw ConfigError(path(key) + ": expected a number");
    return v.get<double>();
  }

  std::optional<double> optional_number(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return number(key);
  }

  std::int64_t integer(const std::string& key) {
    const auto& v = fetch(key);
    if (!v.is_number_integer()) throw ConfigError(path(key) + ": expected an integer");
    return v.get<std::int64_t>();
  }

  std::uint64_t unsigned_integer(const std::string& key) {
    const auto& v = fetch(key);
    if (!v.is_number_unsigned()) throw ConfigError(path(key) + ": expected a non-negative integer");
    return v.get<std::uint64_t>();
  }

  std::string string(const std::string& key) {
    const auto& v = fetch(key);
    if (!v.is_string()) throw ConfigError(path(key) + ": expected a string");
    return v.get<std::string>();
  }

  bool boolean(const std::string& key) {
    const auto& v = fetch(key);
    if (!v.is_boolean()) throw ConfigError(path(key) + ": expected true or false");
    return v.get<bool>();
  }

  const json& raw(const std::string& key) { return fetch(key); }

  void finish() const {
    for (const auto& [key, unused] : node_.items()) {
      if (!used_.contains(key)) throw ConfigError(name_ + ": unknown key '" + key + "'");
    }
  }

  std::string path(const std::string& key) const { return name_ + "." + key; }

 private:
  const json& fetch(const std::string& key) {
    if (!node_.contains(key)) throw ConfigError(path(key) + ": missing");
    used_.insert(key);
    return node_.at(key);
  }

  const json& node_;
  std::string name_;
  std::set<std::string> used_;
};

// Wrap invariant violations from the domain constructors.
template <typename F>
auto checked(const std::string& where, F&& make) {
  try {
    return make();
  } catch (const DomainError& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

NoiseComponent parse_component(Section s, const std::filesystem::path& base_dir) {
  const auto type = s.string("type");
  NoiseComponent out = WhiteNoiseModel(0.0);
  if (type == "white") {
    out = checked(s.path("level_rad2_hz"), [&] { return WhiteNoiseModel(s.number("level_rad2_hz")); });
  } else if (type == "lowpass") {
    const double linewidth = angular(s.number("linewidth_hz"));
    const double correlation = angular(s.number("correlation_hz"));
    out = checked(s.path("lowpass"), [&] { return LowPassNoiseModel(linewidth, correlation); });
  } else if (type == "relaxation_peak") {
    const double peak = s.number("peak_rad2_hz");
    const double center = angular(s.number("center_hz"));
    const double fwhm = angular(s.number("fwhm_hz"));
    out = checked(s.path("relaxation_peak"), [&] { return RelaxationOscillationModel(peak, center, fwhm); });
  } else if (type == "tabulated") {
    auto file = std::filesystem::path(s.string("file"));
    if (file.is_relative()) file = base_dir / file;
    try {
      out = TabulatedNoiseModel(read_trace_csv(file));
    } catch (const std::exception& e) {
      throw ConfigError(s.path("file") + ": " + e.what());
    }
  } else {
    throw ConfigError(s.path("type") + ": unknown noise model '" + type + "'");
  }
  s.finish();
  return out;
}

CompositeNoiseModel parse_laser(Section s, const std::filesystem::path& base_dir) {
  const auto& list = s.raw("components");
  if (!list.is_array() || list.empty()) throw ConfigError("laser.components: expected a non-empty array");
  std::vector<NoiseComponent> components;
  for (std::size_t i = 0; i < list.size(); ++i) {
    components.push_back(parse_component(Section(list[i], "laser.components[" + std::to_string(i) + "]"), base_dir));
  }
  s.finish();
  return CompositeNoiseModel(std::move(components));
}

CavitySection parse_cavity(Section s) {
  const double kappa = angular(s.number("kappa_hz"));
  const double eta = s.number("eta");
  double optical = 0.0;
  if (s.has("wavelength_m") == s.has("optical_frequency_hz")) {
    throw ConfigError("cavity: give exactly one of wavelength_m or optical_frequency_hz");
  }
  if (s.has("wavelength_m")) {
    const double wavelength = s.number("wavelength_m");
    if (!(wavelength > 0.0)) throw ConfigError("cavity.wavelength_m: must be > 0");
    optical = optical_angular_frequency(wavelength);
  } else {
    optical = angular(s.number("optical_frequency_hz"));
  }
  auto section = checked("cavity", [&] { return CavitySection{CavityParams(kappa, eta, optical), {}, {}}; });
  section.power = s.optional_number("power_w");
  if (section.power && !(*section.power >= 0.0)) throw ConfigError("cavity.power_w: must be >= 0");
  if (const auto d = s.optional_number("detuning_hz")) section.detuning = angular(*d);
  s.finish();
  return section;
}

MechanicsParams parse_mechanics(Section s) {
  const double omega_m = angular(s.number("omega_m_hz"));
  if (s.has("q_m") == s.has("gamma_m_hz")) throw ConfigError("mechanics: give exactly one of q_m or gamma_m_hz");
  const double gamma_m = s.has("q_m") ? checked("mechanics.q_m", [&] {
    return gamma_from_quality_factor(omega_m, s.number("q_m"));
  })
                                      : angular(s.number("gamma_m_hz"));
  const double temperature = s.number("temperature_k");
  const auto m_eff = s.optional_number("m_eff_kg");
  const auto g0 = s.optional_number("g0_hz");
  const auto pull = s.optional_number("g_hz_per_m");
  s.finish();
  return checked("mechanics", [&] {
    if (g0 && pull) {
      if (!m_eff) throw DomainError("g0_hz and g_hz_per_m together need m_eff_kg");
      return MechanicsParams::from_both(omega_m, gamma_m, temperature, angular(*g0), angular(*pull), *m_eff);
    }
    if (g0) return MechanicsParams::from_g0(omega_m, gamma_m, temperature, angular(*g0), m_eff);
    if (pull) {
      if (!m_eff) throw DomainError("g_hz_per_m needs m_eff_kg");
      return MechanicsParams::from_frequency_pull(omega_m, gamma_m, temperature, angular(*pull), *m_eff);
    }
    throw DomainError("one of g0_hz or g_hz_per_m is required");
  });
}

SimConfig parse_simulation(Section s) {
  SimConfig cfg;
  cfg.sample_rate = s.number("sample_rate_hz");
  cfg.n_samples = static_cast<Eigen::Index>(s.unsigned_integer("n_samples"));
  cfg.seed = s.has("seed") ? s.unsigned_integer("seed") : 0;
  if (s.has("segment_length")) cfg.welch.segment_length = static_cast<Eigen::Index>(s.unsigned_integer("segment_length"));
  if (s.has("overlap")) cfg.welch.overlap = s.number("overlap");
  cfg.analysis_max_hz = s.optional_number("analysis_max_hz");
  s.finish();
  checked("simulation", [&] {
    cfg.validate();
    return 0;
  });
  return cfg;
}

DetectorParams parse_detector(Section s) {
  const double nep = s.number("nep_w_per_rthz");
  const double responsivity = s.has("responsivity_a_per_w") ? s.number("responsivity_a_per_w") : 1.0;
  s.finish();
  return checked("detector", [&] { return DetectorParams(nep, responsivity); });
}

ToneSection parse_tone(Section s) {
  ToneSection t;
  t.omega_mod = angular(s.number("frequency_hz"));
  if (s.has("delta_phi_rad") == s.has("v_pi_v")) {
    throw ConfigError("tone: give exactly one of delta_phi_rad or v_pi_v (+ v_drive_v)");
  }
  if (s.has("delta_phi_rad")) {
    t.delta_phi = s.number("delta_phi_rad");
  } else {
    const double v_pi = s.number("v_pi_v");
    const double v_drive = s.number("v_drive_v");
    const double tol = s.has("v_pi_tolerance") ? s.number("v_pi_tolerance") : 0.10;
    t.delta_phi = checked("tone", [&] { return modulation_index(ModulatorSpec(v_pi, tol), v_drive).value; });
  }
  if (!(t.delta_phi > 0.0)) throw ConfigError("tone: modulation index must be > 0");
  if (!(t.omega_mod > 0.0)) throw ConfigError("tone.frequency_hz: must be > 0");
  s.finish();
  return t;
}

TransduceSection parse_transduce(Section s) {
  TransduceSection t;
  t.analysis_omega = angular(s.number("analysis_hz"));
  t.s_ww = s.optional_number("s_ww_rad2_hz");
  t.detuning_min = angular(s.number("detuning_min_hz"));
  t.detuning_max = angular(s.number("detuning_max_hz"));
  t.detuning_points = s.integer("detuning_points");
  t.spectrum_min = angular(s.number("spectrum_min_hz"));
  t.spectrum_max = angular(s.number("spectrum_max_hz"));
  t.spectrum_points = s.integer("spectrum_points");
  if (s.has("spectrum_grid")) {
    const auto kind = s.string("spectrum_grid");
    if (kind == "linear") {
      t.spectrum_kind = GridKind::linear;
    } else if (kind == "logarithmic") {
      t.spectrum_kind = GridKind::logarithmic;
    } else {
      throw ConfigError("transduce.spectrum_grid: expected linear or logarithmic");
    }
  }
  s.finish();
  if (t.detuning_points < 1) throw ConfigError("transduce.detuning_points: must be >= 1");
  if (t.detuning_points > 1 && !(t.detuning_max > t.detuning_min)) {
    throw ConfigError("transduce: detuning_max_hz must exceed detuning_min_hz");
  }
  if (t.s_ww && *t.s_ww < 0.0) throw ConfigError("transduce.s_ww_rad2_hz: must be >= 0");
  return t;
}

BudgetSection parse_budget(Section s) {
  BudgetSection b;
  if (s.has("power_w")) {
    const auto& p = s.raw("power_w");
    if (p.is_string() && p.get<std::string>() == "optimize") {
      b.power.reset();
    } else if (p.is_number() && p.get<double>() > 0.0) {
      b.power = p.get<double>();
    } else {
      throw ConfigError("budget.power_w: expected a positive number or \"optimize\"");
    }
  }
  if (s.has("include_backaction")) b.include_backaction = s.boolean("include_backaction");
  if (s.has("sweep_min_w")) b.sweep_min = s.number("sweep_min_w");
  if (s.has("sweep_max_w")) b.sweep_max = s.number("sweep_max_w");
  if (s.has("sweep_points")) b.sweep_points = s.integer("sweep_points");
  s.finish();
  if (b.sweep_points < 2) throw ConfigError("budget.sweep_points: must be >= 2");
  if ((b.sweep_min > 0.0) != (b.sweep_max > 0.0) || b.sweep_min > b.sweep_max) {
    throw ConfigError("budget: sweep_min_w and sweep_max_w must both be set with min < max");
  }
  return b;
}

CalibrationSection parse_calibration(Section s) {
  CalibrationSection c;
  if (s.has("mode")) {
    c.mode = checked("calibration.mode", [&] { return parse_mode(s.string("mode")); });
  }
  if (s.has("cluster_half_width_bins")) c.cluster_half_width = s.integer("cluster_half_width_bins");
  if (s.has("fit_half_width_bins")) c.fit_half_width = s.integer("fit_half_width_bins");
  s.finish();
  if (c.cluster_half_width < 0 || c.fit_half_width <= c.cluster_half_width + 2) {
    throw ConfigError("calibration: need fit_half_width_bins > cluster_half_width_bins + 2");
  }
  return c;
}

}  // namespace

RunConfig parse_config(const nlohmann::json& root, const std::filesystem::path& base_dir) {
  Section top(root, "config");
  RunConfig cfg;
  cfg.hash = hex64(fnv1a64(root.dump()));
  if (top.has("laser")) cfg.laser = parse_laser(Section(top.raw("laser"), "laser"), base_dir);
  if (top.has("cavity")) cfg.cavity = parse_cavity(Section(top.raw("cavity"), "cavity"));
  if (top.has("mechanics")) cfg.mechanics = parse_mechanics(Section(top.raw("mechanics"), "mechanics"));
  if (top.has("simulation")) cfg.simulation = parse_simulation(Section(top.raw("simulation"), "simulation"));
  if (top.has("detector")) cfg.detector = parse_detector(Section(top.raw("detector"), "detector"));
  if (top.has("tone")) cfg.tone = parse_tone(Section(top.raw("tone"), "tone"));
  if (top.has("transduce")) cfg.transduce = parse_transduce(Section(top.raw("transduce"), "transduce"));
  if (top.has("budget")) cfg.budget = parse_budget(Section(top.raw("budget"), "budget"));
  if (top.has("calibration")) {
    cfg.calibration = parse_calibration(Section(top.raw("calibration"), "calibration"));
  }
  if (top.has("output_dir")) {
    auto dir = std::filesystem::path(top.string("output_dir"));
    cfg.output_dir = dir.is_relative() ? base_dir / dir : dir;
  }
  top.finish();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(root, path.parent_path());
}

}  // namespace phasenoise
