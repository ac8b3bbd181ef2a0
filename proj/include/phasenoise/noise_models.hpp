#pragma once

// Laser frequency-noise models S_ωω(Ω) in rad² Hz.

#include <Eigen/Dense>

#include <concepts>
#include <variant>
#include <vector>

#include "phasenoise/spectra.hpp"

namespace phasenoise {

/// Frequency-independent S_ωω.
struct WhiteNoiseModel {
  double level = 0.0;  // rad^2 Hz

  explicit WhiteNoiseModel(double level_rad2_hz);
};

/// Exponentially correlated frequency noise, S_ωω = 2Γ_L γ_c² / (Ω² + γ_c²).
/// Becomes white (2Γ_L) as γ_c → ∞.
struct LowPassNoiseModel {
  double linewidth = 0.0;    // Γ_L, rad/s
  double correlation = 0.0;  // γ_c, rad/s

  LowPassNoiseModel(double linewidth_rad_per_s, double correlation_rad_per_s);
};

/// Lorentzian excess-noise peak standing in for the relaxation-oscillation
/// resonance of a diode laser. Parameterized by peak level, center and FWHM.
struct RelaxationOscillationModel {
  double peak = 0.0;    // rad^2 Hz
  double center = 0.0;  // rad/s
  double fwhm = 0.0;    // rad/s

  RelaxationOscillationModel(double peak_rad2_hz, double center_rad_per_s, double fwhm_rad_per_s);
};

/// Measured spectrum, interpolated linearly in log-log coordinates. Queries
/// outside the tabulated range throw OutOfRangeError.
class TabulatedNoiseModel {
 public:
  explicit TabulatedNoiseModel(SpectrumTrace trace);

  double operator()(double omega) const;
  const SpectrumTrace& trace() const { return trace_; }

 private:
  SpectrumTrace trace_;
};

using NoiseComponent =
    std::variant<WhiteNoiseModel, LowPassNoiseModel, RelaxationOscillationModel, TabulatedNoiseModel>;

/// Sum of independent noise mechanisms.
class CompositeNoiseModel {
 public:
  explicit CompositeNoiseModel(std::vector<NoiseComponent> components);
  CompositeNoiseModel(NoiseComponent single);  // NOLINT(google-explicit-constructor)

  const std::vector<NoiseComponent>& components() const { return components_; }

 private:
  std::vector<NoiseComponent> components_;
};

// Point and array evaluation. The array overloads take any Eigen array
// expression of angular frequencies and return an expression where possible.

template <std::floating_point Scalar>
Scalar eval_lowpass(const LowPassNoiseModel& m, Scalar omega) {
  const Scalar gc = Scalar(m.correlation);
  return Scalar(2) * Scalar(m.linewidth) * gc * gc / (omega * omega + gc * gc);
}

template <typename Derived>
auto eval_lowpass(const LowPassNoiseModel& m, const Eigen::ArrayBase<Derived>& omega) {
  using Scalar = typename Derived::Scalar;
  const Scalar gc2 = Scalar(m.correlation) * Scalar(m.correlation);
  return (Scalar(2) * Scalar(m.linewidth) * gc2) / (omega.square() + gc2);
}

template <std::floating_point Scalar>
Scalar eval_relaxation_peak(const RelaxationOscillationModel& m, Scalar omega) {
  const Scalar half = Scalar(m.fwhm) / Scalar(2);
  const Scalar offset = omega - Scalar(m.center);
  return Scalar(m.peak) * half * half / (offset * offset + half * half);
}

template <typename Derived>
auto eval_relaxation_peak(const RelaxationOscillationModel& m, const Eigen::ArrayBase<Derived>& omega) {
  using Scalar = typename Derived::Scalar;
  const Scalar half2 = Scalar(m.fwhm) * Scalar(m.fwhm) / Scalar(4);
  return (Scalar(m.peak) * half2) / ((omega - Scalar(m.center)).square() + half2);
}

double eval_model(const NoiseComponent& model, double omega);
double eval_model(const CompositeNoiseModel& model, double omega);

Eigen::ArrayXd eval_model(const NoiseComponent& model, const Eigen::ArrayXd& omega);
Eigen::ArrayXd eval_model(const CompositeNoiseModel& model, const Eigen::ArrayXd& omega);

SpectrumTrace eval_model(const CompositeNoiseModel& model, const FrequencyGrid& grid);

}  // namespace phasenoise
