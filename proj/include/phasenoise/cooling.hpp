#pragma once

// Resolved-sideband cooling budget under laser frequency noise.

#include <cmath>
#include <optional>

#include "phasenoise/cavity.hpp"
#include "phasenoise/constants.hpp"
#include "phasenoise/errors.hpp"
#include "phasenoise/noise_models.hpp"

namespace phasenoise {

/// Mechanical mode. g₀ and G = ∂ω_c/∂x are tied by g₀ = G √(ħ / 2 m_eff Ω_m);
/// whichever one is given, the other is derived when m_eff is known.
class MechanicsParams {
 public:
  static MechanicsParams from_g0(double omega_m, double gamma_m, double temperature, double g0,
                                 std::optional<double> m_eff = std::nullopt);
  static MechanicsParams from_frequency_pull(double omega_m, double gamma_m, double temperature, double pull,
                                             double m_eff);
  /// Both couplings supplied; throws unless they agree to 1e-9 relative.
  static MechanicsParams from_both(double omega_m, double gamma_m, double temperature, double g0, double pull,
                                   double m_eff);

  double omega_m() const { return omega_m_; }
  double gamma_m() const { return gamma_m_; }
  double q_m() const { return omega_m_ / gamma_m_; }
  double temperature() const { return temperature_; }
  double g0() const { return g0_; }
  std::optional<double> m_eff() const { return m_eff_; }
  std::optional<double> frequency_pull() const { return pull_; }

  /// G; throws DomainError without m_eff.
  double require_frequency_pull() const;
  double require_m_eff() const;

 private:
  MechanicsParams(double omega_m, double gamma_m, double temperature, double g0, std::optional<double> m_eff,
                  std::optional<double> pull);

  double omega_m_;
  double gamma_m_;
  double temperature_;
  double g0_;
  std::optional<double> m_eff_;
  std::optional<double> pull_;
};

inline double gamma_from_quality_factor(double omega_m, double q_m) {
  if (!(q_m > 0.0)) throw DomainError("Q_m must be > 0");
  return omega_m / q_m;
}

/// √(ħ / 2 m_eff Ω_m)
template <typename Scalar>
Scalar zero_point_fluctuation(Scalar m_eff, Scalar omega_m) {
  return std::sqrt(Scalar(PhysicalConstants::hbar) / (Scalar(2) * m_eff * omega_m));
}

template <typename Scalar>
Scalar thermal_occupancy(Scalar temperature, Scalar omega_m) {
  if (temperature < Scalar(0)) throw DomainError("temperature must be >= 0");
  if (!(omega_m > Scalar(0))) throw DomainError("mechanical frequency must be > 0");
  return Scalar(PhysicalConstants::k_boltzmann) * temperature / (Scalar(PhysicalConstants::hbar) * omega_m);
}

/// Quantum-backaction floor κ²/16Ω_m² of resolved-sideband cooling.
template <typename Scalar>
Scalar backaction_limit(Scalar kappa, Scalar omega_m) {
  return kappa * kappa / (Scalar(16) * omega_m * omega_m);
}

/// The resolved-sideband formulas below are trusted for κ/Ω_m ≤ 0.5.
inline bool is_resolved_sideband(double kappa, double omega_m) { return kappa / omega_m <= 0.5; }

/// n̄_p ≈ ηκP / (ħωΩ_m²), intracavity photons at the lower-sideband drive.
template <typename Scalar>
Scalar intracavity_photons(Scalar eta, Scalar kappa, Scalar power, Scalar optical_omega, Scalar omega_m) {
  if (power < Scalar(0)) throw DomainError("power must be >= 0");
  return eta * kappa * power / (Scalar(PhysicalConstants::hbar) * optical_omega * omega_m * omega_m);
}

/// n̄_f^excess ≈ n̄_p S_ωω(Ω_m) / κ
template <typename Scalar>
Scalar excess_occupancy(Scalar photons, Scalar kappa, Scalar s_ww) {
  if (photons < Scalar(0) || kappa < Scalar(0) || s_ww < Scalar(0)) {
    throw DomainError("excess_occupancy inputs must be >= 0");
  }
  return photons * s_ww / kappa;
}

/// Radiation-pressure force PSD from frequency noise (N²/Hz),
/// 4η²G²P²/(ω²Ω²) · S_ωω/Ω². Needs G, hence m_eff.
double force_noise_psd(const MechanicsParams& mech, double eta, double power, double optical_omega, double omega,
                       double s_ww);

/// Γ_cool ≈ 2ηG²P/(m_eff Ω_m³ ω), evaluated through g₀ so m_eff is not needed.
double cooling_rate(const MechanicsParams& mech, double eta, double power, double optical_omega);

/// n̄_L = S_FF / (2 m_eff Γ_m ħ Ω_m), the occupancy of the laser-noise bath.
double laser_bath_occupancy(const MechanicsParams& mech, double force_psd);

/// Excess occupancy along the force-noise route: n̄_L Γ_m / Γ_cool.
double excess_occupancy_via_force_noise(const MechanicsParams& mech, const CavityParams& cavity, double power,
                                        double s_ww);

struct OccupancyOptions {
  bool include_backaction = true;
};

/// n_f(P) = n̄_th Γ_m/Γ_cool + n̄_p S_ωω/κ (+ κ²/16Ω_m²).
double final_occupancy(const MechanicsParams& mech, const CavityParams& cavity, double power, double s_ww,
                       OccupancyOptions options = {});

struct OptimalPower {
  double power = 0.0;             // analytic balance point P*, W
  double n_f_min = 0.0;           // closed form √(n̄_th Γ_m S_ωω / g₀²), backaction excluded
  double power_numeric = 0.0;     // golden-section minimizer
  double n_f_min_numeric = 0.0;   // n_f at power_numeric, backaction excluded
};

/// Throws InconsistencyError if the closed form and the numeric minimum
/// disagree by more than 1e-3 relative.
OptimalPower optimal_power(const MechanicsParams& mech, const CavityParams& cavity, double s_ww);

struct GroundStateCondition {
  double s_ww_threshold = 0.0;  // g₀²/γ, rad² Hz
  double decoherence = 0.0;     // γ = k_B T/(ħ Q_m), rad/s
};

GroundStateCondition ground_state_condition(const MechanicsParams& mech);

struct CoolingBudgetReport {
  std::optional<double> power;  // W; absent when optimizing a noiseless laser (P* → ∞)
  bool optimized = false;
  bool backaction_included = true;
  bool resolved_sideband = true;

  double n_th = 0.0;
  double gamma_m = 0.0;
  double decoherence = 0.0;
  double s_ww_at_omega_m = 0.0;
  double s_ww_threshold = 0.0;
  bool feasible = false;

  std::optional<double> n_p;
  std::optional<double> gamma_cool;
  std::optional<double> force_psd;  // needs m_eff
  std::optional<double> n_l;        // needs m_eff
  std::optional<double> n_f_excess;
  std::optional<double> n_f;
  std::optional<double> optimal_power;
  double n_f_min = 0.0;
  double n_f_backaction = 0.0;
};

struct BudgetRequest {
  std::optional<double> power;  // absent: optimize
  bool include_backaction = true;
};

CoolingBudgetReport budget_report(const MechanicsParams& mech, const CavityParams& cavity,
                                  const CompositeNoiseModel& laser, BudgetRequest request = {});

/// Minimize a unimodal function on [lo, hi].
template <typename F>
double golden_section_minimize(F&& f, double lo, double hi, double tolerance) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  while (hi - lo > tolerance) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace phasenoise
