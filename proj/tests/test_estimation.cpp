#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "risim/channel.hpp"
#include "risim/estimation.hpp"
#include "risim/loads.hpp"
#include "risim/random.hpp"
#include "risim/scenario.hpp"

using namespace risim;

TEST_CASE("pilot fraction policy") {
  EstimationPolicy policy;
  CHECK(pilot_fraction(policy, 0) == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(pilot_fraction(policy, 99) == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(pilot_fraction(policy, 200) == doctest::Approx(0.01).epsilon(1e-15));

  EstimationPolicy tight;
  tight.coherence_symbols = 1000.0;
  CHECK(pilot_fraction(tight, 99) == doctest::Approx(0.10).epsilon(1e-12));
  CHECK(pilot_fraction(tight, 199) == doctest::Approx(0.11).epsilon(1e-12));

  EstimationPolicy bad;
  bad.alpha_min = 0.0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = {};
  bad.alpha_max = bad.alpha_min / 2.0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
}

TEST_CASE("mmse error variance") {
  SUBCASE("no signal means no information") {
    CHECK(mmse_variance(0.0, 0.01, 2.4e6, 99) == 1.0);
  }

  SUBCASE("pinned reference point") {
    CHECK(mmse_variance(10.0, 0.01, 2.4e6, 99) == doctest::Approx(4.165e-4).epsilon(1e-3));
  }

  SUBCASE("bounded and monotone") {
    const double base = mmse_variance(10.0, 0.01, 2.4e6, 99);
    CHECK(base > 0.0);
    CHECK(base <= 1.0);
    CHECK(mmse_variance(20.0, 0.01, 2.4e6, 99) < base);
    CHECK(mmse_variance(10.0, 0.02, 2.4e6, 99) < base);
    CHECK(mmse_variance(10.0, 0.01, 4.8e6, 99) < base);
    CHECK(mmse_variance(10.0, 0.01, 2.4e6, 199) > base);
  }

  SUBCASE("pilot budget must cover the unknowns") {
    CHECK_THROWS_AS(mmse_variance(10.0, 0.01, 1000.0, 99), std::invalid_argument);
    CHECK_NOTHROW(mmse_variance(10.0, 0.1, 1000.0, 99));
    CHECK_THROWS_AS(mmse_variance(-1.0, 0.01, 2.4e6, 99), std::invalid_argument);
    CHECK_THROWS_AS(mmse_variance(10.0, 1.0, 2.4e6, 99), std::invalid_argument);
  }
}

TEST_CASE("mmse profile uses the per-link signal-to-noise ratio") {
  ScenarioConfig cfg = csi_study_defaults();
  cfg.elements = 4;
  const SceneGeometry geo = build_geometry(cfg);
  const SceneGains gains = scene_gains(cfg, geo, 1.0);
  const double alpha = 0.01;
  const std::vector<double> profile =
      mmse_profile(cfg, gains.direct, gains.elements, alpha, 2.4e6);

  REQUIRE(profile.size() == 5);
  const double n0b = noise_power(cfg.noise);
  const double snr0 = 2.0 * cfg.power_w * gains.direct / n0b;
  CHECK(profile[0] == doctest::Approx(mmse_variance(snr0, alpha, 2.4e6, 4)).epsilon(1e-12));
  for (std::size_t m = 0; m < 4; ++m) {
    const double snr = 2.0 * cfg.power_w * gains.elements[m] / n0b;
    CHECK(profile[1 + m] == doctest::Approx(mmse_variance(snr, alpha, 2.4e6, 4)).epsilon(1e-12));
    CHECK(profile[1 + m] > profile[0]);
  }
}

TEST_CASE("estimated channel sets") {
  RandomStream rng(3001);
  const ChannelSet truth = draw_channel_set(3, 0.0, 0.0, 0.0, rng);

  SUBCASE("zero variance reproduces the truth exactly") {
    const std::vector<double> mmse(4, 0.0);
    const ChannelSet est = sample_estimated_channels(truth, mmse, rng);
    CHECK(est.direct == truth.direct);
    for (std::size_t m = 0; m < 3; ++m) CHECK(est.cascade[m] == truth.cascade[m]);
  }

  SUBCASE("estimates keep the hop-product invariant") {
    const std::vector<double> mmse = {0.2, 0.3, 0.4, 0.5};
    const ChannelSet est = sample_estimated_channels(truth, mmse, rng);
    CHECK_NOTHROW(validate(est));
    for (std::size_t m = 0; m < 3; ++m) {
      CHECK(est.tag_dest[m] == std::complex<double>{1.0, 0.0});
    }
  }

  SUBCASE("error power matches the requested variance") {
    const std::vector<double> mmse = {0.25, 0.1, 0.5, 1.0};
    std::vector<double> sums(4, 0.0);
    const int draws = 100000;
    RandomStream stream(3003);
    for (int i = 0; i < draws; ++i) {
      const ChannelSet est = sample_estimated_channels(truth, mmse, stream);
      sums[0] += std::norm(truth.direct - est.direct);
      for (std::size_t m = 0; m < 3; ++m) sums[1 + m] += std::norm(truth.cascade[m] - est.cascade[m]);
    }
    CHECK(sums[0] / draws == doctest::Approx(0.25).epsilon(0.02));
    CHECK(sums[1] / draws == doctest::Approx(0.1).epsilon(0.02));
    CHECK(sums[2] / draws == doctest::Approx(0.5).epsilon(0.02));
    CHECK(sums[3] / draws == doctest::Approx(1.0).epsilon(0.02));
  }

  SUBCASE("rejects malformed variance vectors") {
    std::vector<double> mmse(3, 0.1);
    CHECK_THROWS_AS(sample_estimated_channels(truth, mmse, rng), std::invalid_argument);
    mmse = {0.1, 0.1, 0.1, 1.5};
    CHECK_THROWS_AS(sample_estimated_channels(truth, mmse, rng), std::invalid_argument);
    mmse = {0.1, 0.1, -0.1, 0.1};
    CHECK_THROWS_AS(sample_estimated_channels(truth, mmse, rng), std::invalid_argument);
  }
}

TEST_CASE("gain under estimation error") {
  ScenarioConfig cfg = csi_study_defaults();
  cfg.elements = 12;
  cfg.trials = 400;
  const ModulationAlphabet alphabet = modulation_alphabet(binary_load_set());
  EstimationPolicy policy;

  const CsiGains gains = gain_under_estimation(cfg, alphabet, policy, RandomStream(55));
  CHECK(gains.est_csi_db <= gains.true_csi_db);
  CHECK(gains.true_csi_db > 0.0);
  CHECK(gains.alpha == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(gains.mmse_direct > 0.0);
  CHECK(gains.mmse_direct <= 1.0);
  CHECK(gains.mmse_element_mean > gains.mmse_direct);

  const CsiGains again = gain_under_estimation(cfg, alphabet, policy, RandomStream(55));
  CHECK(again.true_csi_db == gains.true_csi_db);
  CHECK(again.est_csi_db == gains.est_csi_db);
}

TEST_CASE("estimation policy from config text") {
  IniData data;
  data["estimation"]["alpha_min"] = "0.02";
  data["estimation"]["alpha_max"] = "0.2";
  data["estimation"]["coherence_symbols"] = "1.2e6";
  const EstimationPolicy policy = estimation_policy_from_ini(data);
  CHECK(policy.alpha_min == doctest::Approx(0.02).epsilon(1e-15));
  CHECK(policy.alpha_max == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(policy.coherence_symbols == doctest::Approx(1.2e6).epsilon(1e-15));

  IniData inverted;
  inverted["estimation"]["alpha_min"] = "0.5";
  inverted["estimation"]["alpha_max"] = "0.1";
  CHECK_THROWS_AS(estimation_policy_from_ini(inverted), std::invalid_argument);
}
