#include "phasenoise/calibration.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace phasenoise {

ModulatorSpec::ModulatorSpec(double half_wave_voltage, double fractional_tolerance)
    : v_pi(half_wave_voltage), tolerance(fractional_tolerance) {
  if (!(v_pi > 0.0)) throw DomainError("V_pi must be > 0");
  if (!(tolerance >= 0.0)) throw DomainError("modulator tolerance must be >= 0");
}

ModulationIndex modulation_index(const ModulatorSpec& spec, double v_drive) {
  if (!(v_drive >= 0.0)) throw DomainError("drive voltage must be >= 0");
  const double value = pi * v_drive / spec.v_pi;
  return {value, value * spec.tolerance};
}

std::string_view mode_name(CalibrationMode mode) {
  return mode == CalibrationMode::ratio_at_tone ? "ratio-at-tone" : "deconvolved";
}

CalibrationMode parse_mode(std::string_view name) {
  if (name == "ratio-at-tone" || name == "ratio") return CalibrationMode::ratio_at_tone;
  if (name == "deconvolved") return CalibrationMode::deconvolved;
  throw DomainError("unknown calibration mode '" + std::string(name) + "'");
}

SpectrumTrace subtract_background(const SpectrumTrace& raw, const SpectrumTrace& background) {
  if (!(raw.grid() == background.grid())) throw GridMismatchError("raw and background traces use different grids");
  if (raw.unit() != background.unit()) throw UnitMismatchError("raw and background traces differ in unit");
  return {raw.grid(), (raw.values() - background.values()).max(0.0), raw.unit(), raw.rbw_hz()};
}

namespace {

struct BaselineFit {
  Eigen::Vector3d coefficients = Eigen::Vector3d::Zero();  // in x = (Ω − Ω_peak) / bin spacing
  double at(double x) const { return coefficients(0) + x * (coefficients(1) + x * coefficients(2)); }
};

BaselineFit fit_baseline(const SpectrumTrace& noise, Eigen::Index peak, const CalibrationOptions& options) {
  const auto& omega = noise.omega();
  const double spacing = omega(1) - omega(0);
  std::vector<Eigen::Index> bins;
  for (Eigen::Index k = peak - options.fit_half_width; k <= peak + options.fit_half_width; ++k) {
    if (k < 1 || k >= noise.size()) continue;
    if (std::abs(k - peak) <= options.cluster_half_width) continue;
    bins.push_back(k);
  }
  if (bins.size() < 6) throw ToneNotFoundError("not enough bins around the tone for a baseline fit");

  Eigen::MatrixXd design(static_cast<Eigen::Index>(bins.size()), 3);
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(bins.size()));
  for (std::size_t i = 0; i < bins.size(); ++i) {
    const double x = (omega(bins[i]) - omega(peak)) / spacing;
    const auto row = static_cast<Eigen::Index>(i);
    design.row(row) << 1.0, x, x * x;
    rhs(row) = noise.values()(bins[i]);
  }
  return {design.colPivHouseholderQr().solve(rhs)};
}

}  // namespace

ToneMeasurement measure_tone(const SpectrumTrace& noise, const ToneDescriptor& tone,
                             const CalibrationOptions& options) {
  const auto& omega = noise.omega();
  if (tone.omega_mod < omega(0) || tone.omega_mod > omega(omega.size() - 1)) {
    throw ToneNotFoundError("tone not found: " + std::to_string(ordinary(tone.omega_mod)) +
                            " Hz lies outside the spectrum");
  }
  const double spacing = omega(1) - omega(0);
  const auto nominal = static_cast<Eigen::Index>(std::lround((tone.omega_mod - omega(0)) / spacing));

  Eigen::Index peak = nominal;
  for (Eigen::Index k = nominal - options.search_half_width; k <= nominal + options.search_half_width; ++k) {
    if (k >= 1 && k < noise.size() && noise.values()(k) > noise.values()(peak)) peak = k;
  }

  const auto fit = fit_baseline(noise, peak, options);
  ToneMeasurement m;
  m.peak_bin = peak;
  m.baseline = std::max(fit.at(0.0), 0.0);
  const double height = noise.values()(peak);
  m.snr = m.baseline > 0.0 ? height / m.baseline : (height > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
  if (!(m.snr > options.min_snr)) {
    throw ToneNotFoundError("tone not found at " + std::to_string(ordinary(tone.omega_mod)) +
                            " Hz (SNR " + std::to_string(m.snr) + ")");
  }

  const double bin_hz = ordinary(spacing);
  for (Eigen::Index k = peak - options.cluster_half_width; k <= peak + options.cluster_half_width; ++k) {
    if (k < 0 || k >= noise.size()) continue;
    const double x = (omega(k) - omega(peak)) / spacing;
    m.area += (noise.values()(k) - std::max(fit.at(x), 0.0)) * bin_hz;
  }
  if (!(m.area > 0.0)) throw ToneNotFoundError("tone not found: no power above the baseline");
  return m;
}

CalibrationResult calibrate_spectrum(const SpectrumTrace& raw, const SpectrumTrace& background,
                                     const ToneDescriptor& tone, const CalibrationOptions& options) {
  if (raw.grid().kind() == GridKind::logarithmic) throw DomainError("calibration needs a linear bin grid");
  SpectrumTrace noise = subtract_background(raw, background);
  const auto measured = measure_tone(noise, tone, options);

  // Noise under the tone cluster is replaced by the fitted baseline.
  Eigen::ArrayXd cleaned = noise.values();
  {
    const auto fit = fit_baseline(noise, measured.peak_bin, options);
    const double spacing = noise.omega()(1) - noise.omega()(0);
    for (Eigen::Index k = measured.peak_bin - options.cluster_half_width;
         k <= measured.peak_bin + options.cluster_half_width; ++k) {
      if (k < 0 || k >= cleaned.size()) continue;
      cleaned(k) = std::max(fit.at((noise.omega()(k) - noise.omega()(measured.peak_bin)) / spacing), 0.0);
    }
  }

  // Drop the Ω = 0 bin.
  const Eigen::Index first = noise.omega()(0) > 0.0 ? 0 : 1;
  const Eigen::Index count = noise.size() - first;
  const Eigen::ArrayXd omega = noise.omega().segment(first, count);
  const Eigen::ArrayXd level = cleaned.segment(first, count);

  Eigen::ArrayXd s_ww;
  double at_tone = 0.0;
  const double tone_omega = noise.omega()(measured.peak_bin);
  if (options.mode == CalibrationMode::ratio_at_tone) {
    // [noise / tone height] x tone calibration level, heights taken at the tone's rbw.
    const double tone_height = measured.area / tone.rbw_hz;
    const double scale = calibration_tone_psd(tone) / tone_height;
    s_ww = level * scale;
    at_tone = measured.baseline * scale;
  } else {
    if (!options.cavity || !options.detuning) {
      throw DomainError("deconvolved calibration needs cavity parameters and detuning");
    }
    const auto& cavity = *options.cavity;
    const double detuning = *options.detuning;
    const double gain_at_tone = transduction_gain(cavity, detuning, tone_omega);
    if (!(gain_at_tone > 0.0)) throw DomainError("cavity transduction vanishes at the tone (detuning = 0?)");
    const double tone_area_ww = tone_omega * tone_omega * tone.delta_phi * tone.delta_phi / 4.0;
    const double scale = gain_at_tone * tone_area_ww / measured.area;
    const Eigen::ArrayXd gain = transduction_gain(cavity, detuning, omega);
    if ((gain <= 0.0).any()) throw DomainError("cavity transduction vanishes inside the band");
    s_ww = level / gain * scale;
    at_tone = measured.baseline * scale / gain_at_tone;
  }

  return {SpectrumTrace(FrequencyGrid(omega, noise.grid().kind()), std::move(s_ww), Unit::frequency_noise,
                        raw.rbw_hz()),
          options.mode, measured, at_tone};
}

}  // namespace phasenoise
