#pragma once

// Monte-Carlo model of the measurement chain: phase-noisy laser field in the
// rotating frame of the carrier, cavity in transmission, photodetector with a
// white noise floor, Welch PSD estimate.

#include <Eigen/Dense>

#include <cstdint>
#include <optional>

#include "phasenoise/cavity.hpp"
#include "phasenoise/noise_models.hpp"
#include "phasenoise/spectra.hpp"
#include "phasenoise/tone.hpp"

namespace phasenoise {

struct WelchParams {
  Eigen::Index segment_length = 4096;
  double overlap = 0.5;  // Hann window, periodic form
};

struct SimConfig {
  double sample_rate = 0.0;  // Hz
  Eigen::Index n_samples = 0;  // power of two
  std::uint64_t seed = 0;
  WelchParams welch;
  std::optional<double> analysis_max_hz;  // defaults to sample_rate / 4

  /// Throws DomainError/ResolutionError on a violated invariant.
  void validate() const;
  double analysis_limit_hz() const { return analysis_max_hz.value_or(sample_rate / 4.0); }
};

struct DetectorParams {
  double nep = 0.0;           // W/√Hz, double-sided white floor
  double responsivity = 1.0;  // A/W

  DetectorParams(double nep_w_per_rthz, double responsivity_a_per_w);
};

/// Complex baseband field, |s|² in W.
struct FieldSeries {
  Eigen::ArrayXcd samples;
  double sample_rate = 0.0;
};

/// Stateless counter-based normal variates: the value depends only on
/// (seed, stream, index), so draws can be made in any order.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  double uniform(std::uint64_t stream, std::uint64_t counter) const;  // in (0, 1)
  /// Two independent standard normals from one Box-Muller pair.
  std::pair<double, double> normal_pair(std::uint64_t stream, std::uint64_t pair_index) const;
  double normal(std::uint64_t stream, std::uint64_t index) const;

 private:
  std::uint64_t seed_;
};

enum RngStream : std::uint64_t {
  kPhaseStream = 1,
  kDetectorStream = 2,
  kBackgroundStream = 3,
};

/// Gaussian φ(t) with double-sided PSD S_ωω(Ω)/Ω², built by coloring
/// Hermitian-symmetric complex Gaussian bins. DC bin is zero.
Eigen::ArrayXd synthesize_phase_noise(const CompositeNoiseModel& model, const SimConfig& cfg);

/// φ(t) + δφ cos(Ω_mod t), t = n / sample_rate.
Eigen::ArrayXd add_calibration_tone(const Eigen::ArrayXd& phase, double sample_rate, double delta_phi,
                                    double omega_mod);

/// √P e^{iφ(t)}
FieldSeries make_field(const Eigen::ArrayXd& phase, double power_w, double sample_rate);

/// Transmitted field of the single-pole cavity. The ODE is integrated exactly
/// for an input that is linear between samples; the intracavity amplitude
/// starts in the steady state of the first sample.
FieldSeries cavity_filter(const FieldSeries& input, const CavityParams& cavity, double detuning);

/// Welch estimate of the double-sided PSD of a real series on the bins
/// Ω_k = 2π k f_s / L, k = 0..L/2. rbw is the equivalent noise bandwidth.
SpectrumTrace welch_psd(const Eigen::ArrayXd& series, double sample_rate, const WelchParams& welch, Unit unit);

struct Detection {
  Eigen::ArrayXd photocurrent;  // A
  SpectrumTrace psd;            // A²/Hz
};

Detection detect(const FieldSeries& output, const DetectorParams& detector, const SimConfig& cfg,
                 std::uint64_t noise_stream = kDetectorStream);

struct CalibrationTone {
  double delta_phi = 0.0;  // rad
  double omega_mod = 0.0;  // rad/s
};

struct ExperimentBundle {
  SpectrumTrace raw;
  SpectrumTrace background;
  std::optional<ToneDescriptor> tone;
  double mean_photocurrent = 0.0;  // A
};

/// Full chain. The background is the same detector with the laser blocked.
ExperimentBundle run_experiment(const CompositeNoiseModel& laser, const CavityParams& cavity,
                                const DriveParams& drive, const DetectorParams& detector, const SimConfig& cfg,
                                std::optional<CalibrationTone> tone = std::nullopt);

}  // namespace phasenoise
