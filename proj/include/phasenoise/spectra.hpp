#pragma once

// Frequency grids, PSD traces and the unit bookkeeping shared by every other
// module. All PSDs are symmetrized and double-sided per ordinary Hz, sampled
// at angular frequencies (rad/s).

#include <Eigen/Dense>

#include <cmath>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "phasenoise/constants.hpp"
#include "phasenoise/errors.hpp"

namespace phasenoise {

enum class GridKind { linear, logarithmic, irregular };

enum class Unit {
  frequency_noise,  // rad^2 Hz   (S_ωω)
  phase_noise,      // rad^2 / Hz (S_φφ)
  power_noise,      // W^2 / Hz
  current_noise,    // A^2 / Hz
};

std::string_view unit_symbol(Unit unit);
Unit parse_unit(std::string_view symbol);

template <typename Scalar>
class BasicFrequencyGrid {
 public:
  using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  BasicFrequencyGrid(Array omega, GridKind kind) : values_(std::move(omega)), kind_(kind) {
    if (values_.size() < 2) throw DomainError("frequency grid needs at least 2 points");
    if (!values_.allFinite()) throw DomainError("frequency grid has non-finite values");
    if (values_(0) < Scalar(0)) throw DomainError("frequency grid has negative frequencies");
    for (Eigen::Index i = 1; i < values_.size(); ++i) {
      if (!(values_(i) > values_(i - 1))) {
        throw DomainError("frequency grid must be strictly increasing");
      }
    }
  }

  static BasicFrequencyGrid linear(Scalar omega_min, Scalar omega_max, Eigen::Index n) {
    if (n < 2) throw DomainError("frequency grid needs at least 2 points");
    return {Array::LinSpaced(n, omega_min, omega_max), GridKind::linear};
  }

  static BasicFrequencyGrid logarithmic(Scalar omega_min, Scalar omega_max, Eigen::Index n) {
    if (!(omega_min > Scalar(0))) throw DomainError("logarithmic grid needs omega_min > 0");
    if (n < 2) throw DomainError("frequency grid needs at least 2 points");
    Array exponents = Array::LinSpaced(n, std::log(omega_min), std::log(omega_max));
    Array omega = exponents.exp();
    // pin the end points exactly
    omega(0) = omega_min;
    omega(n - 1) = omega_max;
    return {std::move(omega), GridKind::logarithmic};
  }

  static BasicFrequencyGrid irregular(Array omega) { return {std::move(omega), GridKind::irregular}; }

  const Array& values() const { return values_; }
  Scalar operator[](Eigen::Index i) const { return values_(i); }
  Eigen::Index size() const { return values_.size(); }
  GridKind kind() const { return kind_; }
  Scalar front() const { return values_(0); }
  Scalar back() const { return values_(values_.size() - 1); }

  friend bool operator==(const BasicFrequencyGrid& a, const BasicFrequencyGrid& b) {
    return a.values_.size() == b.values_.size() && (a.values_ == b.values_).all();
  }

 private:
  Array values_;
  GridKind kind_;
};

template <typename Scalar>
class BasicSpectrumTrace {
 public:
  using Grid = BasicFrequencyGrid<Scalar>;
  using Array = typename Grid::Array;

  BasicSpectrumTrace(Grid grid, Array values, Unit unit, std::optional<Scalar> rbw_hz = std::nullopt)
      : grid_(std::move(grid)), values_(std::move(values)), unit_(unit), rbw_hz_(rbw_hz) {
    if (values_.size() != grid_.size()) throw DomainError("trace length differs from grid length");
    if (!values_.allFinite()) throw DomainError("trace has non-finite values");
    if ((values_ < Scalar(0)).any()) throw DomainError("PSD values must be non-negative");
    if (rbw_hz_ && !(*rbw_hz_ > Scalar(0))) throw DomainError("rbw must be positive");
  }

  const Grid& grid() const { return grid_; }
  const Array& omega() const { return grid_.values(); }
  const Array& values() const { return values_; }
  Unit unit() const { return unit_; }
  std::optional<Scalar> rbw_hz() const { return rbw_hz_; }
  Eigen::Index size() const { return values_.size(); }

 private:
  Grid grid_;
  Array values_;
  Unit unit_;
  std::optional<Scalar> rbw_hz_;
};

using FrequencyGrid = BasicFrequencyGrid<double>;
using SpectrumTrace = BasicSpectrumTrace<double>;

// Conversions between S_φφ and S_ωω = Ω² S_φφ. Grid is carried over unchanged.

template <typename Scalar>
BasicSpectrumTrace<Scalar> phase_to_frequency_psd(const BasicSpectrumTrace<Scalar>& trace) {
  if (trace.unit() != Unit::phase_noise) throw UnitMismatchError("expected a phase-noise trace (rad^2/Hz)");
  return {trace.grid(), trace.values() * trace.omega().square(), Unit::frequency_noise, trace.rbw_hz()};
}

template <typename Scalar>
BasicSpectrumTrace<Scalar> frequency_to_phase_psd(const BasicSpectrumTrace<Scalar>& trace) {
  if (trace.unit() != Unit::frequency_noise) {
    throw UnitMismatchError("expected a frequency-noise trace (rad^2 Hz)");
  }
  if (trace.grid().front() == Scalar(0)) throw DomainError("cannot convert the Omega = 0 bin to phase noise");
  return {trace.grid(), trace.values() / trace.omega().square(), Unit::phase_noise, trace.rbw_hz()};
}

/// Shot-noise-limited phase PSD ħω/(4P) of a coherent beam, rad²/Hz.
template <typename Scalar>
Scalar quantum_limit_phase_psd(Scalar power_w, Scalar optical_omega) {
  if (!(power_w > Scalar(0))) throw DomainError("optical power must be positive");
  if (!(optical_omega > Scalar(0))) throw DomainError("optical frequency must be positive");
  return Scalar(PhysicalConstants::hbar) * optical_omega / (Scalar(4) * power_w);
}

/// Level of a frequency-noise value above the phase quantum limit, in dB.
template <typename Scalar>
Scalar db_above_quantum_limit(Scalar s_ww, Scalar omega, Scalar power_w, Scalar optical_omega) {
  if (!(s_ww > Scalar(0)) || !(omega > Scalar(0))) {
    throw DomainError("db_above_quantum_limit needs positive noise level and frequency");
  }
  const Scalar s_phiphi = s_ww / (omega * omega);
  return Scalar(10) * std::log10(s_phiphi / quantum_limit_phase_psd(power_w, optical_omega));
}

// CSV serialization. Header: `<axis>,value,<unit>[,rbw_hz=<rbw>]`, rows are
// `<axis value>,<psd value>` in %.8e (9 significant digits).

struct CsvCurve {
  std::string axis_name;
  Eigen::ArrayXd axis;
  Eigen::ArrayXd values;
  Unit unit;
  std::optional<double> rbw_hz;
};

void write_csv(const std::filesystem::path& path, const CsvCurve& curve);
CsvCurve read_csv(const std::filesystem::path& path);

void write_trace_csv(const std::filesystem::path& path, const SpectrumTrace& trace);
SpectrumTrace read_trace_csv(const std::filesystem::path& path);

}  // namespace phasenoise
