#pragma once

#include <numbers>

namespace phasenoise {

/// CODATA 2018 values. hbar and k_B are exact in the 2019 SI redefinition
/// except for the truncation of hbar = h/2π below.
struct PhysicalConstants {
  static constexpr double hbar = 1.054571817e-34;    // J s
  static constexpr double k_boltzmann = 1.380649e-23; // J/K
  static constexpr double speed_of_light = 299792458.0; // m/s
};

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Hz -> rad/s
template <typename Scalar>
constexpr Scalar angular(Scalar hz) {
  return Scalar(two_pi) * hz;
}

/// rad/s -> Hz
template <typename Scalar>
constexpr Scalar ordinary(Scalar rad_per_s) {
  return rad_per_s / Scalar(two_pi);
}

/// Optical angular frequency 2πc/λ.
template <typename Scalar>
constexpr Scalar optical_angular_frequency(Scalar wavelength_m) {
  return Scalar(two_pi * PhysicalConstants::speed_of_light) / wavelength_m;
}

}  // namespace phasenoise
