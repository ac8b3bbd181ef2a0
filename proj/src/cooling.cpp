#include "phasenoise/cooling.hpp"

#include <cmath>
#include <string>

namespace phasenoise {

namespace {

constexpr double kCouplingTolerance = 1e-9;
constexpr double kOptimumTolerance = 1e-3;

void check_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) throw DomainError(std::string(name) + " must be > 0");
}

double pull_from_g0(double g0, double m_eff, double omega_m) { return g0 / zero_point_fluctuation(m_eff, omega_m); }

}  // namespace

MechanicsParams::MechanicsParams(double omega_m, double gamma_m, double temperature, double g0,
                                 std::optional<double> m_eff, std::optional<double> pull)
    : omega_m_(omega_m), gamma_m_(gamma_m), temperature_(temperature), g0_(g0), m_eff_(m_eff), pull_(pull) {
  check_positive(omega_m_, "Omega_m");
  check_positive(gamma_m_, "Gamma_m");
  check_positive(temperature_, "temperature");
  check_positive(g0_, "g0");
  if (m_eff_) check_positive(*m_eff_, "m_eff");
}

MechanicsParams MechanicsParams::from_g0(double omega_m, double gamma_m, double temperature, double g0,
                                         std::optional<double> m_eff) {
  std::optional<double> pull;
  if (m_eff) {
    check_positive(*m_eff, "m_eff");
    check_positive(omega_m, "Omega_m");
    pull = pull_from_g0(g0, *m_eff, omega_m);
  }
  return {omega_m, gamma_m, temperature, g0, m_eff, pull};
}

MechanicsParams MechanicsParams::from_frequency_pull(double omega_m, double gamma_m, double temperature, double pull,
                                                     double m_eff) {
  check_positive(pull, "G");
  check_positive(m_eff, "m_eff");
  check_positive(omega_m, "Omega_m");
  return {omega_m, gamma_m, temperature, pull * zero_point_fluctuation(m_eff, omega_m), m_eff, pull};
}

MechanicsParams MechanicsParams::from_both(double omega_m, double gamma_m, double temperature, double g0,
                                           double pull, double m_eff) {
  auto derived = from_frequency_pull(omega_m, gamma_m, temperature, pull, m_eff);
  if (std::abs(derived.g0() - g0) > kCouplingTolerance * std::abs(g0)) {
    throw DomainError("g0 and G are inconsistent: G sqrt(hbar/2 m_eff Omega_m) = " + std::to_string(derived.g0()) +
                      " vs g0 = " + std::to_string(g0));
  }
  return {omega_m, gamma_m, temperature, g0, m_eff, pull};
}

double MechanicsParams::require_frequency_pull() const {
  if (!pull_) throw DomainError("G (frequency pull) needs m_eff");
  return *pull_;
}

double MechanicsParams::require_m_eff() const {
  if (!m_eff_) throw DomainError("m_eff is required for force-noise quantities");
  return *m_eff_;
}

double force_noise_psd(const MechanicsParams& mech, double eta, double power, double optical_omega, double omega,
                       double s_ww) {
  if (omega == 0.0) throw DomainError("force noise PSD is undefined at Omega = 0");
  const double g = mech.require_frequency_pull();
  const double omega2 = omega * omega;
  return 4.0 * eta * eta * g * g * power * power / (optical_omega * optical_omega * omega2) * s_ww / omega2;
}

double cooling_rate(const MechanicsParams& mech, double eta, double power, double optical_omega) {
  if (power < 0.0) throw DomainError("power must be >= 0");
  // 2ηG²P/(m Ω³ ω) with G² = 2 m Ω g₀²/ħ
  const double wm = mech.omega_m();
  return 4.0 * eta * mech.g0() * mech.g0() * power / (PhysicalConstants::hbar * optical_omega * wm * wm);
}

double laser_bath_occupancy(const MechanicsParams& mech, double force_psd) {
  return force_psd / (2.0 * mech.require_m_eff() * mech.gamma_m() * PhysicalConstants::hbar * mech.omega_m());
}

double excess_occupancy_via_force_noise(const MechanicsParams& mech, const CavityParams& cavity, double power,
                                        double s_ww) {
  const double sff = force_noise_psd(mech, cavity.eta, power, cavity.optical_omega, mech.omega_m(), s_ww);
  return laser_bath_occupancy(mech, sff) * mech.gamma_m() / cooling_rate(mech, cavity.eta, power, cavity.optical_omega);
}

double final_occupancy(const MechanicsParams& mech, const CavityParams& cavity, double power, double s_ww,
                       OccupancyOptions options) {
  if (!(power > 0.0)) throw DomainError("final occupancy needs P > 0 (no cooling at P = 0)");
  const double n_th = thermal_occupancy(mech.temperature(), mech.omega_m());
  const double gamma_cool = cooling_rate(mech, cavity.eta, power, cavity.optical_omega);
  const double n_p = intracavity_photons(cavity.eta, cavity.kappa, power, cavity.optical_omega, mech.omega_m());
  double n_f = n_th * mech.gamma_m() / gamma_cool + excess_occupancy(n_p, cavity.kappa, s_ww);
  if (options.include_backaction) n_f += backaction_limit(cavity.kappa, mech.omega_m());
  return n_f;
}

OptimalPower optimal_power(const MechanicsParams& mech, const CavityParams& cavity, double s_ww) {
  if (!(s_ww > 0.0)) throw DomainError("optimal power needs S_ww > 0");
  const double n_th = thermal_occupancy(mech.temperature(), mech.omega_m());
  const double g0 = mech.g0();
  const double wm = mech.omega_m();

  // Thermal and noise terms balance at n̄_p* = κ √(n̄_th Γ_m / (4 g₀² S_ωω)).
  const double photons = cavity.kappa * std::sqrt(n_th * mech.gamma_m() / (4.0 * g0 * g0 * s_ww));
  OptimalPower out;
  out.power = photons * PhysicalConstants::hbar * cavity.optical_omega * wm * wm / (cavity.eta * cavity.kappa);
  out.n_f_min = std::sqrt(n_th * mech.gamma_m() * s_ww / (g0 * g0));

  const auto n_f_of_log_power = [&](double log_p) {
    return final_occupancy(mech, cavity, std::exp(log_p), s_ww, {.include_backaction = false});
  };
  const double center = std::log(out.power);
  const double span = std::log(1e3);
  const double best = golden_section_minimize(n_f_of_log_power, center - span, center + span, 1e-9);
  out.power_numeric = std::exp(best);
  out.n_f_min_numeric = n_f_of_log_power(best);

  const double rel = std::abs(out.n_f_min_numeric - out.n_f_min) / out.n_f_min;
  if (!(rel <= kOptimumTolerance)) {
    throw InconsistencyError("closed-form and numeric minimum occupancy disagree (relative " + std::to_string(rel) +
                             ")");
  }
  return out;
}

GroundStateCondition ground_state_condition(const MechanicsParams& mech) {
  const double decoherence =
      PhysicalConstants::k_boltzmann * mech.temperature() / (PhysicalConstants::hbar * mech.q_m());
  return {mech.g0() * mech.g0() / decoherence, decoherence};
}

CoolingBudgetReport budget_report(const MechanicsParams& mech, const CavityParams& cavity,
                                  const CompositeNoiseModel& laser, BudgetRequest request) {
  CoolingBudgetReport r;
  const double wm = mech.omega_m();
  r.backaction_included = request.include_backaction;
  r.resolved_sideband = is_resolved_sideband(cavity.kappa, wm);
  r.n_th = thermal_occupancy(mech.temperature(), wm);
  r.gamma_m = mech.gamma_m();
  const auto condition = ground_state_condition(mech);
  r.decoherence = condition.decoherence;
  r.s_ww_threshold = condition.s_ww_threshold;
  r.s_ww_at_omega_m = eval_model(laser, wm);
  r.feasible = r.s_ww_at_omega_m < r.s_ww_threshold;
  r.n_f_backaction = backaction_limit(cavity.kappa, wm);
  const double backaction = request.include_backaction ? r.n_f_backaction : 0.0;

  if (r.s_ww_at_omega_m > 0.0) {
    const auto opt = optimal_power(mech, cavity, r.s_ww_at_omega_m);
    r.optimal_power = opt.power;
    r.n_f_min = opt.n_f_min + backaction;
  } else {
    // Noiseless laser: n_f decreases monotonically towards the backaction floor.
    r.n_f_min = backaction;
  }

  if (request.power) {
    r.power = *request.power;
  } else {
    r.optimized = true;
    r.power = r.optimal_power;
  }

  if (r.power) {
    const double p = *r.power;
    r.n_p = intracavity_photons(cavity.eta, cavity.kappa, p, cavity.optical_omega, wm);
    r.gamma_cool = cooling_rate(mech, cavity.eta, p, cavity.optical_omega);
    r.n_f_excess = excess_occupancy(*r.n_p, cavity.kappa, r.s_ww_at_omega_m);
    if (p > 0.0) {
      r.n_f = final_occupancy(mech, cavity, p, r.s_ww_at_omega_m, {.include_backaction = request.include_backaction});
    }
    if (mech.m_eff()) {
      r.force_psd = force_noise_psd(mech, cavity.eta, p, cavity.optical_omega, wm, r.s_ww_at_omega_m);
      r.n_l = laser_bath_occupancy(mech, *r.force_psd);
    }
  } else {
    r.n_f = r.n_f_min;
  }
  return r;
}

}  // namespace phasenoise
