#include "phasenoise/timedomain.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <string>
#include <vector>

namespace phasenoise {

namespace {

constexpr double kMaxKappaStep = 0.1;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

bool is_power_of_two(Eigen::Index n) { return n > 0 && (n & (n - 1)) == 0; }

Eigen::ArrayXd periodic_hann(Eigen::Index length) {
  const Eigen::ArrayXd n = Eigen::ArrayXd::LinSpaced(length, 0.0, static_cast<double>(length - 1));
  return 0.5 - 0.5 * (two_pi * n / static_cast<double>(length)).cos();
}

}  // namespace

void SimConfig::validate() const {
  if (!(sample_rate > 0.0)) throw DomainError("sample_rate must be > 0");
  if (!is_power_of_two(n_samples)) throw DomainError("n_samples must be a power of two");
  if (welch.segment_length < 8 || welch.segment_length % 2 != 0) {
    throw DomainError("Welch segment length must be even and >= 8");
  }
  if (n_samples < 4 * welch.segment_length) throw DomainError("n_samples must be >= 4 x segment length");
  if (!(welch.overlap >= 0.0 && welch.overlap < 1.0)) throw DomainError("Welch overlap must lie in [0, 1)");
  if (analysis_max_hz && 4.0 * *analysis_max_hz > sample_rate) {
    throw ResolutionError("sample_rate must be >= 4 x the highest analysis frequency");
  }
}

DetectorParams::DetectorParams(double nep_w_per_rthz, double responsivity_a_per_w)
    : nep(nep_w_per_rthz), responsivity(responsivity_a_per_w) {
  if (!(nep >= 0.0)) throw DomainError("NEP must be >= 0");
  if (!(responsivity > 0.0)) throw DomainError("responsivity must be > 0");
}

double CounterRng::uniform(std::uint64_t stream, std::uint64_t counter) const {
  std::uint64_t z = mix64(seed_ ^ mix64(stream * 0x9E3779B97F4A7C15ULL + 0x632BE59BD9B4E019ULL));
  z = mix64(z + (counter + 1) * 0x9E3779B97F4A7C15ULL);
  return (static_cast<double>(z >> 11) + 0.5) * 0x1.0p-53;
}

std::pair<double, double> CounterRng::normal_pair(std::uint64_t stream, std::uint64_t pair_index) const {
  const double u1 = uniform(stream, 2 * pair_index);
  const double u2 = uniform(stream, 2 * pair_index + 1);
  const double r = std::sqrt(-2.0 * std::log(u1));
  return {r * std::cos(two_pi * u2), r * std::sin(two_pi * u2)};
}

double CounterRng::normal(std::uint64_t stream, std::uint64_t index) const {
  const auto [a, b] = normal_pair(stream, index / 2);
  return index % 2 == 0 ? a : b;
}

Eigen::ArrayXd synthesize_phase_noise(const CompositeNoiseModel& model, const SimConfig& cfg) {
  cfg.validate();
  const Eigen::Index n = cfg.n_samples;
  const Eigen::Index half = n / 2;
  const double fs = cfg.sample_rate;

  const Eigen::ArrayXd bins = Eigen::ArrayXd::LinSpaced(half, 1.0, static_cast<double>(half));
  const Eigen::ArrayXd omega = bins * (two_pi * fs / static_cast<double>(n));
  const Eigen::ArrayXd s_phiphi = eval_model(model, omega) / omega.square();

  // E|X_k|² = N f_s S_φφ(Ω_k) gives Var φ = Σ_k S_φφ f_s/N over all N bins.
  const CounterRng rng(cfg.seed);
  std::vector<std::complex<double>> spectrum(static_cast<std::size_t>(n), {0.0, 0.0});
  const double norm = static_cast<double>(n) * fs;
  for (Eigen::Index k = 1; k < half; ++k) {
    const auto [g1, g2] = rng.normal_pair(kPhaseStream, static_cast<std::uint64_t>(k));
    const double amp = std::sqrt(norm * s_phiphi(k - 1) / 2.0);
    spectrum[static_cast<std::size_t>(k)] = {amp * g1, amp * g2};
    spectrum[static_cast<std::size_t>(n - k)] = {amp * g1, -amp * g2};
  }
  const auto [nyq, unused] = rng.normal_pair(kPhaseStream, static_cast<std::uint64_t>(half));
  spectrum[static_cast<std::size_t>(half)] = {std::sqrt(norm * s_phiphi(half - 1)) * nyq, 0.0};

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> series;
  fft.inv(series, spectrum);
  Eigen::ArrayXd phase(n);
  for (Eigen::Index i = 0; i < n; ++i) phase(i) = series[static_cast<std::size_t>(i)].real();
  return phase;
}

Eigen::ArrayXd add_calibration_tone(const Eigen::ArrayXd& phase, double sample_rate, double delta_phi,
                                    double omega_mod) {
  if (!(omega_mod >= 0.0) || omega_mod >= pi * sample_rate) {
    throw AliasingError("calibration tone at " + std::to_string(ordinary(omega_mod)) +
                        " Hz is not below Nyquist");
  }
  const Eigen::ArrayXd n = Eigen::ArrayXd::LinSpaced(phase.size(), 0.0, static_cast<double>(phase.size() - 1));
  return phase + delta_phi * (omega_mod / sample_rate * n).cos();
}

FieldSeries make_field(const Eigen::ArrayXd& phase, double power_w, double sample_rate) {
  if (!(power_w >= 0.0)) throw DomainError("optical power must be >= 0");
  const double amplitude = std::sqrt(power_w);
  FieldSeries field{Eigen::ArrayXcd(phase.size()), sample_rate};
  for (Eigen::Index i = 0; i < phase.size(); ++i) field.samples(i) = std::polar(amplitude, phase(i));
  return field;
}

FieldSeries cavity_filter(const FieldSeries& input, const CavityParams& cavity, double detuning) {
  const double step = 1.0 / input.sample_rate;
  if (cavity.kappa * step >= kMaxKappaStep) {
    throw ResolutionError("sample rate too low for the cavity: kappa / sample_rate = " +
                          std::to_string(cavity.kappa * step) + " (must be < 0.1)");
  }
  const auto& s = input.samples;
  FieldSeries out{Eigen::ArrayXcd(s.size()), input.sample_rate};
  if (s.size() == 0) return out;

  // a' = λa + c s(t), λ = iΔ − κ/2, integrated exactly over one step with s
  // linear between samples: a₊ = p a + c (w0 s_n + w1 s_{n+1}).
  const std::complex<double> lambda(-cavity.kappa / 2.0, detuning);
  const std::complex<double> p = std::exp(lambda * step);
  const std::complex<double> i0 = (p - 1.0) / lambda;
  const std::complex<double> i1 = i0 - p / lambda + (p - 1.0) / (lambda * lambda * step);
  const double coupling = std::sqrt(cavity.eta * cavity.kappa);
  const std::complex<double> w0 = coupling * (i0 - i1);
  const std::complex<double> w1 = coupling * i1;

  std::complex<double> a = -coupling * s(0) / lambda;
  out.samples(0) = s(0) - coupling * a;
  for (Eigen::Index n = 1; n < s.size(); ++n) {
    a = p * a + w0 * s(n - 1) + w1 * s(n);
    out.samples(n) = s(n) - coupling * a;
  }
  return out;
}

SpectrumTrace welch_psd(const Eigen::ArrayXd& series, double sample_rate, const WelchParams& welch, Unit unit) {
  const Eigen::Index length = welch.segment_length;
  if (length < 8 || length % 2 != 0) throw DomainError("Welch segment length must be even and >= 8");
  if (series.size() < length) throw DomainError("series shorter than one Welch segment");
  const auto hop = std::max<Eigen::Index>(1, static_cast<Eigen::Index>(std::lround(length * (1.0 - welch.overlap))));
  const Eigen::Index segments = (series.size() - length) / hop + 1;

  const Eigen::ArrayXd window = periodic_hann(length);
  const double window_power = window.square().sum();
  const double window_sum = window.sum();

  Eigen::FFT<double> fft;
  std::vector<double> segment(static_cast<std::size_t>(length));
  std::vector<std::complex<double>> bins;
  const Eigen::Index half = length / 2;
  Eigen::ArrayXd accum = Eigen::ArrayXd::Zero(half + 1);
  for (Eigen::Index seg = 0; seg < segments; ++seg) {
    const Eigen::Index start = seg * hop;
    for (Eigen::Index i = 0; i < length; ++i) {
      segment[static_cast<std::size_t>(i)] = series(start + i) * window(i);
    }
    fft.fwd(bins, segment);
    for (Eigen::Index k = 0; k <= half; ++k) accum(k) += std::norm(bins[static_cast<std::size_t>(k)]);
  }

  Eigen::ArrayXd psd = accum / (static_cast<double>(segments) * sample_rate * window_power);
  const Eigen::ArrayXd omega =
      Eigen::ArrayXd::LinSpaced(half + 1, 0.0, static_cast<double>(half)) * (two_pi * sample_rate / length);
  const double enbw = sample_rate * window_power / (window_sum * window_sum);
  return {FrequencyGrid(omega, GridKind::linear), std::move(psd), unit, enbw};
}

Detection detect(const FieldSeries& output, const DetectorParams& detector, const SimConfig& cfg,
                 std::uint64_t noise_stream) {
  const CounterRng rng(cfg.seed);
  const double sigma = detector.responsivity * detector.nep * std::sqrt(output.sample_rate);
  Eigen::ArrayXd current = detector.responsivity * output.samples.abs2();
  if (sigma > 0.0) {
    for (Eigen::Index i = 0; i < current.size(); ++i) {
      current(i) += sigma * rng.normal(noise_stream, static_cast<std::uint64_t>(i));
    }
  }
  auto psd = welch_psd(current, output.sample_rate, cfg.welch, Unit::current_noise);
  return {std::move(current), std::move(psd)};
}

ExperimentBundle run_experiment(const CompositeNoiseModel& laser, const CavityParams& cavity,
                                const DriveParams& drive, const DetectorParams& detector, const SimConfig& cfg,
                                std::optional<CalibrationTone> tone) {
  cfg.validate();
  if (tone && ordinary(tone->omega_mod) > cfg.analysis_limit_hz()) {
    throw ResolutionError("calibration tone above the analysis band (sample_rate / 4)");
  }

  Eigen::ArrayXd phase = synthesize_phase_noise(laser, cfg);
  if (tone) phase = add_calibration_tone(phase, cfg.sample_rate, tone->delta_phi, tone->omega_mod);
  const auto transmitted =
      cavity_filter(make_field(phase, drive.power, cfg.sample_rate), cavity, drive.detuning);
  auto raw = detect(transmitted, detector, cfg, kDetectorStream);

  const FieldSeries blocked{Eigen::ArrayXcd::Zero(cfg.n_samples), cfg.sample_rate};
  auto background = detect(blocked, detector, cfg, kBackgroundStream);

  std::optional<ToneDescriptor> descriptor;
  if (tone) descriptor.emplace(tone->delta_phi, tone->omega_mod, *raw.psd.rbw_hz());
  const double mean = raw.photocurrent.mean();
  return {std::move(raw.psd), std::move(background.psd), descriptor, mean};
}

}  // namespace phasenoise
