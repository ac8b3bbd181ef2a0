#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "phasenoise/spectra.hpp"

using namespace phasenoise;

TEST_CASE("frequency grid invariants") {
  CHECK_THROWS_AS(FrequencyGrid::irregular(Eigen::ArrayXd::Constant(1, 1.0)), DomainError);
  Eigen::ArrayXd bad(3);
  bad << 0.0, 2.0, 1.0;
  CHECK_THROWS_AS(FrequencyGrid::irregular(bad), DomainError);
  bad << -1.0, 0.0, 1.0;
  CHECK_THROWS_AS(FrequencyGrid::irregular(bad), DomainError);
  bad << 0.0, 1.0, 1.0;
  CHECK_THROWS_AS(FrequencyGrid::irregular(bad), DomainError);

  const auto log_grid = FrequencyGrid::logarithmic(1e3, 1e9, 61);
  CHECK(log_grid.front() == 1e3);
  CHECK(log_grid.back() == 1e9);
  CHECK(log_grid.kind() == GridKind::logarithmic);
  CHECK_THROWS_AS(FrequencyGrid::logarithmic(0.0, 1.0, 4), DomainError);
}

TEST_CASE("trace invariants") {
  const auto grid = FrequencyGrid::linear(0.0, 3.0, 4);
  CHECK_THROWS_AS(SpectrumTrace(grid, Eigen::ArrayXd::Ones(3), Unit::phase_noise), DomainError);
  CHECK_THROWS_AS(SpectrumTrace(grid, Eigen::ArrayXd::Constant(4, -1.0), Unit::phase_noise), DomainError);
  CHECK_THROWS_AS(SpectrumTrace(grid, Eigen::ArrayXd::Ones(4), Unit::phase_noise, 0.0), DomainError);
}

TEST_CASE("phase to frequency conversion") {
  SUBCASE("zero stays zero") {
    const SpectrumTrace zero(FrequencyGrid::linear(0.0, 10.0, 11), Eigen::ArrayXd::Zero(11), Unit::phase_noise);
    CHECK((phase_to_frequency_psd(zero).values() == 0.0).all());
  }
  SUBCASE("unit scaling at 1 rad/s") {
    Eigen::ArrayXd w(2);
    w << 1.0, 2.0;
    const SpectrumTrace t(FrequencyGrid::irregular(w), Eigen::ArrayXd::Ones(2), Unit::phase_noise);
    const auto f = phase_to_frequency_psd(t);
    CHECK(f.values()(0) == 1.0);
    CHECK(f.values()(1) == 4.0);
    CHECK(f.unit() == Unit::frequency_noise);
    CHECK(f.grid() == t.grid());
  }
  SUBCASE("measured peak level in phase units") {
    Eigen::ArrayXd w(2);
    w << angular(3.5e9), angular(3.6e9);
    const SpectrumTrace t(FrequencyGrid::irregular(w), Eigen::ArrayXd::Constant(2, 1.6e7), Unit::frequency_noise);
    // 1.6e7 / (2π 3.5e9)², hand evaluated
    CHECK(frequency_to_phase_psd(t).values()(0) == doctest::Approx(3.30844681281103e-14).epsilon(1e-12));
  }
  SUBCASE("unit mismatch and the Omega = 0 bin") {
    const SpectrumTrace t(FrequencyGrid::linear(0.0, 1.0, 3), Eigen::ArrayXd::Ones(3), Unit::frequency_noise);
    CHECK_THROWS_AS(phase_to_frequency_psd(t), UnitMismatchError);
    CHECK_THROWS_AS(frequency_to_phase_psd(t), DomainError);
  }
}

TEST_CASE("round trip phase -> frequency -> phase is the identity") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> level(0.0, 1e3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto grid = FrequencyGrid::logarithmic(1e-2, 1e11, 200);
    Eigen::ArrayXd v(200);
    for (auto& x : v) x = level(rng);
    const SpectrumTrace t(grid, v, Unit::phase_noise);
    const auto back = frequency_to_phase_psd(phase_to_frequency_psd(t));
    CHECK(back.grid() == grid);
    CHECK(((back.values() - v).abs() <= 4e-16 * v.abs()).all());
  }
}

TEST_CASE("quantum limit") {
  const double omega = optical_angular_frequency(1550e-9);
  CHECK(omega == doctest::Approx(1.215259075683131e15).epsilon(1e-12));
  CHECK(quantum_limit_phase_psd(1e-3, omega) == doctest::Approx(3.20394492892225e-17).epsilon(1e-12));
  CHECK(quantum_limit_phase_psd(2e-3, omega) == doctest::Approx(quantum_limit_phase_psd(1e-3, omega) / 2));
  CHECK(quantum_limit_phase_psd(1e300, omega) < 1e-300);
  CHECK(quantum_limit_phase_psd(1e-3, 2 * omega) > quantum_limit_phase_psd(1e-3, omega));
  CHECK_THROWS_AS(quantum_limit_phase_psd(0.0, omega), DomainError);
  CHECK_THROWS_AS(quantum_limit_phase_psd(-1.0, omega), DomainError);
}

TEST_CASE("dB above the quantum limit") {
  const double omega = optical_angular_frequency(1550e-9);
  const double w = angular(3.5e9);
  // independent evaluation in tests/oracles/golden_values.py
  CHECK(db_above_quantum_limit(1.6e7, w, 1e-3, omega) == doctest::Approx(30.13939114643026).epsilon(1e-10));
  const double at_limit = w * w * quantum_limit_phase_psd(1e-3, omega);
  CHECK(db_above_quantum_limit(at_limit, w, 1e-3, omega) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(db_above_quantum_limit(1.6e8, w, 1e-3, omega) - db_above_quantum_limit(1.6e7, w, 1e-3, omega) ==
        doctest::Approx(10.0));
  CHECK_THROWS_AS(db_above_quantum_limit(0.0, w, 1e-3, omega), DomainError);
  CHECK_THROWS_AS(db_above_quantum_limit(1.0, -w, 1e-3, omega), DomainError);
}

TEST_CASE("CSV format") {
  const auto dir = std::filesystem::temp_directory_path() / "phasenoise_test_spectra";
  std::filesystem::create_directories(dir);
  Eigen::ArrayXd w(3);
  w << 0.0, 6.283185307179586e6, 1.2566370614359172e7;
  Eigen::ArrayXd v(3);
  v << 1.0, 2.5e-17, 123456789.123;
  const SpectrumTrace t(FrequencyGrid::irregular(w), v, Unit::current_noise, 1500.0);
  write_trace_csv(dir / "t.csv", t);

  std::ifstream in(dir / "t.csv");
  std::string header, first, second;
  std::getline(in, header);
  std::getline(in, first);
  std::getline(in, second);
  CHECK(header == "omega_rad_per_s,value,A^2/Hz,rbw_hz=1.50000000e+03");
  CHECK(first == "0.00000000e+00,1.00000000e+00");
  CHECK(second == "6.28318531e+06,2.50000000e-17");

  const auto back = read_trace_csv(dir / "t.csv");
  CHECK(back.unit() == Unit::current_noise);
  CHECK(*back.rbw_hz() == 1500.0);
  CHECK(back.values()(2) == doctest::Approx(123456789.123).epsilon(1e-8));

  std::ofstream(dir / "bad.csv") << "omega_rad_per_s,value,furlongs\n1,2\n";
  CHECK_THROWS_AS(read_trace_csv(dir / "bad.csv"), UnitMismatchError);
  std::ofstream(dir / "bad2.csv") << "omega_rad_per_s,value,W^2/Hz\n1,abc\n";
  CHECK_THROWS_AS(read_trace_csv(dir / "bad2.csv"), IoError);
}
