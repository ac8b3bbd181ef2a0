#pragma once

// Frequency-domain response of a single-mode cavity probed in transmission
// (add-through coupling), and the conversion of laser frequency noise into
// detected power noise.
//
// Conventions: rotating frame at the laser, carrier e^{-iωt}, detuning
// Δ = ω_laser − ω_cavity, intracavity amplitude a obeys
//   da/dt = (iΔ − κ/2) a + √(ηκ) s_in,   s_out = s_in − √(ηκ) a.

#include <Eigen/Dense>

#include <complex>
#include <concepts>
#include <vector>

#include "phasenoise/constants.hpp"
#include "phasenoise/errors.hpp"
#include "phasenoise/spectra.hpp"

namespace phasenoise {

struct CavityParams {
  double kappa = 0.0;          // total energy decay rate, rad/s
  double eta = 0.0;            // κ_ex / κ
  double optical_omega = 0.0;  // carrier angular frequency, rad/s

  CavityParams(double kappa_rad_per_s, double coupling_ratio, double optical_omega_rad_per_s);
};

struct DriveParams {
  double power = 0.0;     // launched power, W
  double detuning = 0.0;  // Δ, rad/s

  DriveParams(double power_w, double detuning_rad_per_s);
};

/// Intracavity response a / (√(ηκ) s_in) = 1 / (−i(Δ+Ω) + κ/2) for an input
/// component offset by Ω from the laser.
template <std::floating_point Scalar>
std::complex<Scalar> intracavity_amplitude(const CavityParams& cavity, Scalar detuning, Scalar omega) {
  return Scalar(1) / std::complex<Scalar>(Scalar(cavity.kappa) / Scalar(2), -(detuning + omega));
}

/// Field transmission s_out / s_in at detuning x.
template <std::floating_point Scalar>
std::complex<Scalar> field_transmission(const CavityParams& cavity, Scalar x) {
  return Scalar(1) - Scalar(cavity.eta * cavity.kappa) * intracavity_amplitude(cavity, x, Scalar(0));
}

/// Power-noise transfer per unit P² and per unit S_ωω:
///   4η²Δ²κ²((1−η)²κ² + Ω²) / [(Δ² + κ²/4)² ((Δ−Ω)² + κ²/4) ((Δ+Ω)² + κ²/4)]
/// in s². Multiply by P² S_ωω(Ω) to get W²/Hz.
template <std::floating_point Scalar>
Scalar transduction_gain(const CavityParams& cavity, Scalar detuning, Scalar omega) {
  const Scalar k = Scalar(cavity.kappa);
  const Scalar eta = Scalar(cavity.eta);
  const Scalar q = k * k / Scalar(4);
  const Scalar carrier = detuning * detuning + q;
  const Scalar lower = (detuning - omega) * (detuning - omega) + q;
  const Scalar upper = (detuning + omega) * (detuning + omega) + q;
  const Scalar one_minus = (Scalar(1) - eta) * k;
  const Scalar num = Scalar(4) * eta * eta * detuning * detuning * k * k * (one_minus * one_minus + omega * omega);
  return num / (carrier * carrier * lower * upper);
}

template <typename Derived>
auto transduction_gain(const CavityParams& cavity, typename Derived::Scalar detuning,
                       const Eigen::ArrayBase<Derived>& omega) {
  using Scalar = typename Derived::Scalar;
  const Scalar k = Scalar(cavity.kappa);
  const Scalar eta = Scalar(cavity.eta);
  const Scalar q = k * k / Scalar(4);
  const Scalar carrier = detuning * detuning + q;
  const Scalar one_minus = (Scalar(1) - eta) * k;
  const Scalar prefactor = Scalar(4) * eta * eta * detuning * detuning * k * k / (carrier * carrier);
  return prefactor * (one_minus * one_minus + omega.square()) /
         (((detuning - omega).square() + q) * ((detuning + omega).square() + q));
}

/// Detected power PSD (W²/Hz) produced by laser frequency noise S_ωω at
/// analysis frequency Ω. Linear in S_ωω, quadratic in P, even in Δ, zero at Δ = 0.
template <std::floating_point Scalar>
Scalar transduced_power_psd(const CavityParams& cavity, const DriveParams& drive, Scalar omega, Scalar s_ww) {
  if (s_ww < Scalar(0)) throw DomainError("S_ww must be >= 0");
  const Scalar p = Scalar(drive.power);
  return p * p * transduction_gain(cavity, Scalar(drive.detuning), omega) * s_ww;
}

template <typename DerivedOmega, typename DerivedS>
auto transduced_power_psd(const CavityParams& cavity, const DriveParams& drive,
                          const Eigen::ArrayBase<DerivedOmega>& omega, const Eigen::ArrayBase<DerivedS>& s_ww) {
  using Scalar = typename DerivedOmega::Scalar;
  const Scalar p2 = Scalar(drive.power) * Scalar(drive.power);
  return p2 * transduction_gain(cavity, Scalar(drive.detuning), omega) * s_ww;
}

SpectrumTrace transduced_power_psd(const CavityParams& cavity, const DriveParams& drive,
                                   const SpectrumTrace& frequency_noise);

struct DetuningSweep {
  Eigen::ArrayXd detuning;  // rad/s
  Eigen::ArrayXd values;    // W^2/Hz
  std::vector<double> maxima;  // detunings of interior local maxima, ascending
  double global_min_detuning = 0.0;
};

/// Transduced power PSD at fixed analysis frequency versus detuning.
DetuningSweep detuning_sweep(const CavityParams& cavity, double power_w, double omega_fixed, double s_ww,
                             const Eigen::ArrayXd& detuning_grid);

CsvCurve to_csv_curve(const DetuningSweep& sweep);

}  // namespace phasenoise
