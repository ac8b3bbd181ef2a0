#include "phasenoise/noise_models.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace phasenoise {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

WhiteNoiseModel::WhiteNoiseModel(double level_rad2_hz) : level(level_rad2_hz) {
  if (!(level >= 0.0) || !std::isfinite(level)) throw DomainError("white noise level must be >= 0");
}

LowPassNoiseModel::LowPassNoiseModel(double linewidth_rad_per_s, double correlation_rad_per_s)
    : linewidth(linewidth_rad_per_s), correlation(correlation_rad_per_s) {
  if (!(linewidth >= 0.0)) throw DomainError("linewidth must be >= 0");
  if (!(correlation > 0.0)) throw DomainError("correlation rate must be > 0");
}

RelaxationOscillationModel::RelaxationOscillationModel(double peak_rad2_hz, double center_rad_per_s,
                                                       double fwhm_rad_per_s)
    : peak(peak_rad2_hz), center(center_rad_per_s), fwhm(fwhm_rad_per_s) {
  if (!(peak > 0.0) || !(center > 0.0) || !(fwhm > 0.0)) {
    throw DomainError("relaxation-oscillation peak, center and width must be > 0");
  }
}

TabulatedNoiseModel::TabulatedNoiseModel(SpectrumTrace trace) : trace_(std::move(trace)) {
  if (trace_.unit() != Unit::frequency_noise) {
    throw UnitMismatchError("tabulated noise model needs a rad^2*Hz trace");
  }
}

double TabulatedNoiseModel::operator()(double omega) const {
  const auto& x = trace_.omega();
  const auto& y = trace_.values();
  if (omega < x(0) || omega > x(x.size() - 1)) {
    throw OutOfRangeError("tabulated model queried at " + std::to_string(omega) + " rad/s, outside [" +
                          std::to_string(x(0)) + ", " + std::to_string(x(x.size() - 1)) + "]");
  }
  const auto* begin = x.data();
  const auto* end = x.data() + x.size();
  const auto* upper = std::lower_bound(begin, end, omega);
  const auto hi = static_cast<Eigen::Index>(upper - begin);
  if (x(hi) == omega) return y(hi);
  const auto lo = hi - 1;

  // Log-log interpolation needs positive knots; fall back to linear when a
  // knot is zero (or the lower knot sits at Ω = 0).
  if (x(lo) > 0.0 && y(lo) > 0.0 && y(hi) > 0.0) {
    const double t = std::log(omega / x(lo)) / std::log(x(hi) / x(lo));
    return std::exp(std::log(y(lo)) + t * std::log(y(hi) / y(lo)));
  }
  const double t = (omega - x(lo)) / (x(hi) - x(lo));
  return y(lo) + t * (y(hi) - y(lo));
}

CompositeNoiseModel::CompositeNoiseModel(std::vector<NoiseComponent> components)
    : components_(std::move(components)) {
  if (components_.empty()) throw DomainError("composite noise model needs at least one component");
}

CompositeNoiseModel::CompositeNoiseModel(NoiseComponent single) : components_{std::move(single)} {}

double eval_model(const NoiseComponent& model, double omega) {
  if (omega < 0.0) throw DomainError("noise models are evaluated at Omega >= 0");
  return std::visit(Overloaded{
                        [](const WhiteNoiseModel& m) { return m.level; },
                        [&](const LowPassNoiseModel& m) { return eval_lowpass(m, omega); },
                        [&](const RelaxationOscillationModel& m) { return eval_relaxation_peak(m, omega); },
                        [&](const TabulatedNoiseModel& m) { return m(omega); },
                    },
                    model);
}

double eval_model(const CompositeNoiseModel& model, double omega) {
  double total = 0.0;
  for (const auto& c : model.components()) total += eval_model(c, omega);
  return total;
}

Eigen::ArrayXd eval_model(const NoiseComponent& model, const Eigen::ArrayXd& omega) {
  if (omega.size() > 0 && omega.minCoeff() < 0.0) throw DomainError("noise models are evaluated at Omega >= 0");
  return std::visit(Overloaded{
                        [&](const WhiteNoiseModel& m) -> Eigen::ArrayXd {
                          return Eigen::ArrayXd::Constant(omega.size(), m.level);
                        },
                        [&](const LowPassNoiseModel& m) -> Eigen::ArrayXd { return eval_lowpass(m, omega); },
                        [&](const RelaxationOscillationModel& m) -> Eigen::ArrayXd {
                          return eval_relaxation_peak(m, omega);
                        },
                        [&](const TabulatedNoiseModel& m) -> Eigen::ArrayXd {
                          return omega.unaryExpr([&](double w) { return m(w); });
                        },
                    },
                    model);
}

Eigen::ArrayXd eval_model(const CompositeNoiseModel& model, const Eigen::ArrayXd& omega) {
  Eigen::ArrayXd total = Eigen::ArrayXd::Zero(omega.size());
  for (const auto& c : model.components()) total += eval_model(c, omega);
  return total;
}

SpectrumTrace eval_model(const CompositeNoiseModel& model, const FrequencyGrid& grid) {
  return {grid, eval_model(model, grid.values()), Unit::frequency_noise};
}

}  // namespace phasenoise
