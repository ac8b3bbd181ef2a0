#pragma once

#include "phasenoise/errors.hpp"

namespace phasenoise {

/// Coherent phase modulation δφ cos(Ω_mod t) imprinted for calibration,
/// together with the resolution bandwidth of the spectrum it was recorded in.
struct ToneDescriptor {
  double delta_phi = 0.0;  // rad
  double omega_mod = 0.0;  // rad/s
  double rbw_hz = 0.0;

  ToneDescriptor(double delta_phi_rad, double omega_mod_rad_per_s, double rbw)
      : delta_phi(delta_phi_rad), omega_mod(omega_mod_rad_per_s), rbw_hz(rbw) {
    if (!(delta_phi > 0.0)) throw DomainError("tone modulation index must be > 0");
    if (!(omega_mod > 0.0)) throw DomainError("tone frequency must be > 0");
    if (!(rbw_hz > 0.0)) throw DomainError("tone rbw must be > 0");
  }
};

}  // namespace phasenoise
