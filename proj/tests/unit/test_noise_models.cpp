#include <doctest.h>

#include <cmath>
#include <random>

#include "phasenoise/noise_models.hpp"

using namespace phasenoise;

TEST_CASE("low-pass model") {
  const LowPassNoiseModel m(angular(300e3), 1e6);
  CHECK(eval_lowpass(m, 0.0) == doctest::Approx(2 * angular(300e3)));
  CHECK(eval_lowpass(m, 1e6) == doctest::Approx(angular(300e3)));
  const LowPassNoiseModel wide(angular(300e3), 1e15);
  CHECK(eval_lowpass(wide, 1e6) == doctest::Approx(2 * angular(300e3)).epsilon(1e-12));

  const Eigen::ArrayXd w = Eigen::ArrayXd::LinSpaced(1000, 0.0, 1e8);
  const Eigen::ArrayXd s = eval_lowpass(m, w);
  for (Eigen::Index i = 1; i < s.size(); ++i) CHECK(s(i) <= s(i - 1));
  CHECK((s >= 0.0).all());
  CHECK(s(500) == doctest::Approx(eval_lowpass(m, w(500))));

  CHECK_THROWS_AS(LowPassNoiseModel(-1.0, 1.0), DomainError);
  CHECK_THROWS_AS(LowPassNoiseModel(1.0, 0.0), DomainError);
}

TEST_CASE("relaxation-oscillation peak") {
  const RelaxationOscillationModel m(1.6e7, angular(3.5e9), angular(1e9));
  CHECK(eval_relaxation_peak(m, angular(3.5e9)) == doctest::Approx(1.6e7));
  CHECK(eval_relaxation_peak(m, angular(3.0e9)) == doctest::Approx(0.8e7));
  CHECK(eval_relaxation_peak(m, angular(4.0e9)) == doctest::Approx(0.8e7));
  CHECK(eval_relaxation_peak(m, 0.0) > 0.0);
  CHECK_THROWS_AS(RelaxationOscillationModel(0.0, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(RelaxationOscillationModel(1.0, 1.0, -1.0), DomainError);
}

TEST_CASE("tabulated model") {
  Eigen::ArrayXd w(3);
  w << 1e3, 1e5, 1e7;
  Eigen::ArrayXd s(3);
  s << 4.0, 1e2, 9.0;
  const TabulatedNoiseModel m(SpectrumTrace(FrequencyGrid::irregular(w), s, Unit::frequency_noise));
  CHECK(m(1e3) == 4.0);
  CHECK(m(1e5) == 1e2);
  CHECK(m(1e7) == 9.0);
  // geometric midpoint gives the geometric mean
  CHECK(m(1e4) == doctest::Approx(std::sqrt(4.0 * 1e2)).epsilon(1e-12));
  CHECK(m(1e6) == doctest::Approx(std::sqrt(9.0 * 1e2)).epsilon(1e-12));
  // power-law segment is preserved exactly
  CHECK(m(10.0 * 1e3) / m(1e3) == doctest::Approx(std::pow(25.0, 0.5)).epsilon(1e-12));
  CHECK_THROWS_AS(m(999.0), OutOfRangeError);
  CHECK_THROWS_AS(m(1.0001e7), OutOfRangeError);

  CHECK_THROWS_AS(TabulatedNoiseModel(SpectrumTrace(FrequencyGrid::irregular(w), s, Unit::phase_noise)),
                  UnitMismatchError);

  // zero knots fall back to linear interpolation
  Eigen::ArrayXd z(2);
  z << 0.0, 2.0;
  const TabulatedNoiseModel lin(SpectrumTrace(FrequencyGrid::linear(1.0, 3.0, 2), z, Unit::frequency_noise));
  CHECK(lin(2.0) == doctest::Approx(1.0));
}

TEST_CASE("composite model is linear") {
  const CompositeNoiseModel twice({WhiteNoiseModel(3.0), WhiteNoiseModel(3.0)});
  CHECK(eval_model(twice, 123.0) == 6.0);

  const LowPassNoiseModel lp(1e3, 1e6);
  const RelaxationOscillationModel peak(1e4, 2e7, 5e6);
  const CompositeNoiseModel sum({lp, peak, WhiteNoiseModel(10.0)});
  const auto grid = FrequencyGrid::linear(0.0, 5e7, 501);
  const auto trace = eval_model(sum, grid);
  const Eigen::ArrayXd expected =
      eval_model(NoiseComponent(lp), grid.values()) + eval_model(NoiseComponent(peak), grid.values()) + 10.0;
  CHECK(((trace.values() - expected).abs() == 0.0).all());
  CHECK(trace.unit() == Unit::frequency_noise);

  CHECK_THROWS_AS(CompositeNoiseModel(std::vector<NoiseComponent>{}), DomainError);
  CHECK_THROWS_AS(eval_model(sum, -1.0), DomainError);
}

TEST_CASE("tabulated out-of-range query through the composite") {
  const TabulatedNoiseModel m(
      SpectrumTrace(FrequencyGrid::linear(1.0, 2.0, 2), Eigen::ArrayXd::Ones(2), Unit::frequency_noise));
  const CompositeNoiseModel c({m, WhiteNoiseModel(1.0)});
  CHECK_THROWS_AS(eval_model(c, FrequencyGrid::linear(0.5, 2.0, 4)), OutOfRangeError);
}

TEST_CASE("all model outputs are non-negative") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> log_u(-3.0, 12.0);
  for (int i = 0; i < 200; ++i) {
    const LowPassNoiseModel lp(std::pow(10.0, log_u(rng)), std::pow(10.0, log_u(rng)));
    const RelaxationOscillationModel peak(std::pow(10.0, log_u(rng)), std::pow(10.0, log_u(rng)),
                                          std::pow(10.0, log_u(rng)));
    const double w = std::pow(10.0, log_u(rng));
    CHECK(eval_lowpass(lp, w) >= 0.0);
    CHECK(eval_relaxation_peak(peak, w) >= 0.0);
  }
}
