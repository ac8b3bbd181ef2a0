#pragma once

// Conversion of detected-power spectra into absolute frequency-noise spectra
// using a phase-modulation tone of known index.

#include <optional>
#include <string_view>

#include "phasenoise/cavity.hpp"
#include "phasenoise/spectra.hpp"
#include "phasenoise/tone.hpp"

namespace phasenoise {

struct ModulatorSpec {
  double v_pi = 0.0;        // V
  double tolerance = 0.10;  // fractional

  explicit ModulatorSpec(double half_wave_voltage, double fractional_tolerance = 0.10);
};

struct ModulationIndex {
  double value = 0.0;        // rad
  double uncertainty = 0.0;  // rad, value x tolerance
};

/// δφ = π V_drive / V_π
ModulationIndex modulation_index(const ModulatorSpec& spec, double v_drive);

/// Apparent S_ωω height of the tone in a spectrum of resolution bandwidth
/// rbw: Ω_mod² δφ² / (4 rbw).
template <typename Scalar>
Scalar calibration_tone_psd(Scalar delta_phi, Scalar omega_mod, Scalar rbw_hz) {
  return omega_mod * omega_mod * delta_phi * delta_phi / (Scalar(4) * rbw_hz);
}

inline double calibration_tone_psd(const ToneDescriptor& tone) {
  return calibration_tone_psd(tone.delta_phi, tone.omega_mod, tone.rbw_hz);
}

enum class CalibrationMode {
  ratio_at_tone,  // valid near Ω_mod only
  deconvolved,    // divides out the cavity transduction across the band
};

std::string_view mode_name(CalibrationMode mode);
CalibrationMode parse_mode(std::string_view name);

struct CalibrationOptions {
  CalibrationMode mode = CalibrationMode::ratio_at_tone;
  Eigen::Index cluster_half_width = 3;   // bins integrated around the tone peak
  Eigen::Index fit_half_width = 16;      // outer edge of the baseline fit window, bins
  Eigen::Index search_half_width = 2;    // peak search around the nominal tone bin
  double min_snr = 10.0;
  std::optional<CavityParams> cavity;    // required for deconvolved mode
  std::optional<double> detuning;        // rad/s, required for deconvolved mode
};

struct ToneMeasurement {
  Eigen::Index peak_bin = 0;
  double area = 0.0;      // detector units (e.g. A²), baseline removed
  double baseline = 0.0;  // noise PSD under the peak bin, detector units per Hz
  double snr = 0.0;       // peak bin over baseline
};

/// raw − background, clamped at zero.
SpectrumTrace subtract_background(const SpectrumTrace& raw, const SpectrumTrace& background);

/// Locate the tone and integrate it over the peak cluster. The noise under
/// the cluster comes from a quadratic fit to the neighboring bins.
/// Throws ToneNotFoundError when the peak is missing or below min_snr.
ToneMeasurement measure_tone(const SpectrumTrace& noise, const ToneDescriptor& tone,
                             const CalibrationOptions& options = {});

struct CalibrationResult {
  SpectrumTrace spectrum;  // rad² Hz on the input bins with Ω > 0
  CalibrationMode mode;
  ToneMeasurement tone;
  double s_ww_at_tone = 0.0;  // rad² Hz, noise under the tone
};

CalibrationResult calibrate_spectrum(const SpectrumTrace& raw, const SpectrumTrace& background,
                                     const ToneDescriptor& tone, const CalibrationOptions& options = {});

}  // namespace phasenoise
