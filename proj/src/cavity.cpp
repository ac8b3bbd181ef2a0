#include "phasenoise/cavity.hpp"

#include <cmath>

namespace phasenoise {

CavityParams::CavityParams(double kappa_rad_per_s, double coupling_ratio, double optical_omega_rad_per_s)
    : kappa(kappa_rad_per_s), eta(coupling_ratio), optical_omega(optical_omega_rad_per_s) {
  if (!(kappa > 0.0)) throw DomainError("cavity kappa must be > 0");
  if (!(eta > 0.0 && eta <= 1.0)) throw DomainError("coupling ratio eta must lie in (0, 1]");
  if (!(optical_omega > 0.0)) throw DomainError("optical frequency must be > 0");
}

DriveParams::DriveParams(double power_w, double detuning_rad_per_s) : power(power_w), detuning(detuning_rad_per_s) {
  if (!(power >= 0.0)) throw DomainError("drive power must be >= 0");
  if (!std::isfinite(detuning)) throw DomainError("detuning must be finite");
}

SpectrumTrace transduced_power_psd(const CavityParams& cavity, const DriveParams& drive,
                                   const SpectrumTrace& frequency_noise) {
  if (frequency_noise.unit() != Unit::frequency_noise) {
    throw UnitMismatchError("transduction needs a rad^2*Hz input trace");
  }
  Eigen::ArrayXd out = transduced_power_psd(cavity, drive, frequency_noise.omega(), frequency_noise.values());
  return {frequency_noise.grid(), std::move(out), Unit::power_noise, frequency_noise.rbw_hz()};
}

DetuningSweep detuning_sweep(const CavityParams& cavity, double power_w, double omega_fixed, double s_ww,
                             const Eigen::ArrayXd& detuning_grid) {
  if (detuning_grid.size() == 0) throw DomainError("detuning grid is empty");
  if (s_ww < 0.0) throw DomainError("S_ww must be >= 0");

  DetuningSweep sweep;
  sweep.detuning = detuning_grid;
  sweep.values.resize(detuning_grid.size());
  for (Eigen::Index i = 0; i < detuning_grid.size(); ++i) {
    sweep.values(i) = transduced_power_psd(cavity, DriveParams(power_w, detuning_grid(i)), omega_fixed, s_ww);
  }

  for (Eigen::Index i = 1; i + 1 < sweep.values.size(); ++i) {
    if (sweep.values(i) > sweep.values(i - 1) && sweep.values(i) >= sweep.values(i + 1)) {
      sweep.maxima.push_back(detuning_grid(i));
    }
  }
  Eigen::Index argmin = 0;
  sweep.values.minCoeff(&argmin);
  sweep.global_min_detuning = detuning_grid(argmin);
  return sweep;
}

CsvCurve to_csv_curve(const DetuningSweep& sweep) {
  return {"delta_rad_per_s", sweep.detuning, sweep.values, Unit::power_noise, std::nullopt};
}

}  // namespace phasenoise
