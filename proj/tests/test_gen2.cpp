#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "risim/gen2.hpp"
#include "risim/optimizer.hpp"
#include "risim/random.hpp"
#include "risim/units.hpp"

using namespace risim;
using cplx = std::complex<double>;

namespace {

ElementTerms binary_terms(cplx direct, const std::vector<cplx>& asserted,
                          const std::vector<cplx>& deasserted) {
  ElementTerms terms;
  terms.direct = direct;
  terms.elements = asserted.size();
  terms.loads = 2;
  for (std::size_t m = 0; m < asserted.size(); ++m) {
    terms.terms.push_back(asserted[m]);
    terms.terms.push_back(deasserted[m]);
  }
  return terms;
}

TagRecord tag_with_epc(std::initializer_list<std::uint8_t> bits, std::size_t index) {
  TagRecord tag;
  tag.epc.assign(bits);
  tag.element_index = index;
  return tag;
}

}  // namespace

TEST_CASE("timing defaults scale with the link frequency") {
  const Gen2Timing fast = default_timing(640e3);
  CHECK(fast.t_select_s == doctest::Approx(61.0 / 640e3).epsilon(1e-12));
  CHECK(fast.t_pu_s == doctest::Approx(184.0 / 640e3).epsilon(1e-12));
  CHECK(fast.t4_s == doctest::Approx(0.15e-3).epsilon(1e-12));
  CHECK(fast.t_delay_s == doctest::Approx(30e-3).epsilon(1e-12));

  CHECK_THROWS_AS(validate(default_timing(30e3)), std::invalid_argument);
  CHECK_THROWS_AS(validate(default_timing(700e3)), std::invalid_argument);

  Gen2Timing broken = default_timing(40e3);
  broken.t_delay_s = 0.0;
  CHECK_THROWS_AS(validate(broken), std::invalid_argument);
}

TEST_CASE("configuration switch time") {
  SUBCASE("endpoint values") {
    CHECK(config_switch_time(50, default_timing(640e3)) ==
          doctest::Approx(42.80e-3).epsilon(1e-3));
    CHECK(config_switch_time(50, default_timing(40e3)) ==
          doctest::Approx(120.0e-3).epsilon(1e-3));
    CHECK(config_switch_time(1, default_timing(640e3)) ==
          doctest::Approx(30.8e-3).epsilon(1e-3));
  }

  SUBCASE("monotone in both arguments") {
    double previous = config_switch_time(1, default_timing(640e3));
    for (std::size_t mu = 2; mu <= 64; mu *= 2) {
      const double t = config_switch_time(mu, default_timing(640e3));
      CHECK(t > previous);
      previous = t;
    }
    previous = config_switch_time(50, default_timing(40e3));
    for (double blf = 80e3; blf <= 640e3; blf *= 2.0) {
      const double t = config_switch_time(50, default_timing(blf));
      CHECK(t < previous);
      previous = t;
    }
  }

  SUBCASE("a configuration selects at least one tag") {
    CHECK_THROWS_AS(config_switch_time(0, default_timing(640e3)), std::invalid_argument);
  }
}

TEST_CASE("timing from config text") {
  IniData data;
  data["gen2"]["blf_hz"] = "640e3";
  data["gen2"]["t_delay_s"] = "0.02";
  const Gen2Timing timing = timing_from_ini(data);
  CHECK(timing.blf_hz == doctest::Approx(640e3).epsilon(1e-12));
  CHECK(timing.t_select_s == doctest::Approx(61.0 / 640e3).epsilon(1e-12));
  CHECK(timing.t_delay_s == doctest::Approx(0.02).epsilon(1e-12));
}

TEST_CASE("select matching") {
  const TagRecord tag = tag_with_epc({1, 0, 1, 1, 0, 0, 1, 0}, 0);

  SelectCommand cmd;
  CHECK(select_matches(cmd, tag));

  cmd.mask = {1, 0, 1, 1, 0, 0, 1, 0};
  CHECK(select_matches(cmd, tag));

  cmd.mask = {1, 1};
  CHECK_FALSE(select_matches(cmd, tag));
  cmd.mask_offset = 2;
  CHECK(select_matches(cmd, tag));

  cmd.mask_offset = 7;
  CHECK_THROWS_AS(select_matches(cmd, tag), std::invalid_argument);
}

TEST_CASE("select application") {
  std::vector<TagRecord> population;
  population.push_back(tag_with_epc({0, 0}, 0));
  population.push_back(tag_with_epc({0, 1}, 1));
  population.push_back(tag_with_epc({1, 0}, 2));
  population.push_back(tag_with_epc({1, 1}, 3));

  SUBCASE("sequential asserts accumulate without touching the rest") {
    SelectCommand first;
    first.mask = {0, 1};
    SelectCommand second;
    second.mask = {1, 1};
    auto updated = apply_select(second, apply_select(first, population));
    CHECK_FALSE(updated[0].selected);
    CHECK(updated[1].selected);
    CHECK_FALSE(updated[2].selected);
    CHECK(updated[3].selected);

    auto swapped = apply_select(first, apply_select(second, population));
    for (std::size_t i = 0; i < population.size(); ++i) {
      CHECK(swapped[i].selected == updated[i].selected);
    }

    auto repeated = apply_select(first, updated);
    CHECK(repeated[1].selected);
  }

  SUBCASE("a broadcast deassert clears every flag") {
    for (auto& tag : population) tag.selected = true;
    SelectCommand reset;
    reset.action = SelectCommand::Action::deassert_matched;
    reset.broadcast = true;
    reset.mask = {1, 1, 1};  // longer than any EPC, irrelevant under broadcast
    const auto cleared = apply_select(reset, population);
    for (const auto& tag : cleared) CHECK_FALSE(tag.selected);
  }

  SUBCASE("a masked deassert clears only the matched tags") {
    for (auto& tag : population) tag.selected = true;
    SelectCommand drop;
    drop.action = SelectCommand::Action::deassert_matched;
    drop.mask = {1, 0};
    const auto updated = apply_select(drop, population);
    CHECK(updated[0].selected);
    CHECK(updated[1].selected);
    CHECK_FALSE(updated[2].selected);
    CHECK(updated[3].selected);
  }
}

TEST_CASE("population generation and parsing") {
  SUBCASE("generated tags carry their element index and bit-valued EPCs") {
    RandomStream rng(71);
    const auto population = generate_population(5, 96, rng);
    REQUIRE(population.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) {
      CHECK(population[i].element_index == i);
      CHECK(population[i].epc.size() == 96);
      for (const auto b : population[i].epc) CHECK(b <= 1);
    }
    RandomStream replay(71);
    const auto again = generate_population(5, 96, replay);
    CHECK(again[4].epc == population[4].epc);

    CHECK_THROWS_AS(generate_population(2, 0, rng), std::invalid_argument);
  }

  SUBCASE("hex lines decode most significant bit first") {
    std::istringstream in("# two tags\nA5\nF0\n");
    const auto population = parse_population(in);
    REQUIRE(population.size() == 2);
    const std::vector<std::uint8_t> first = {1, 0, 1, 0, 0, 1, 0, 1};
    const std::vector<std::uint8_t> second = {1, 1, 1, 1, 0, 0, 0, 0};
    CHECK(population[0].epc == first);
    CHECK(population[1].epc == second);
    CHECK(population[1].element_index == 1);
  }

  SUBCASE("rejects ragged or malformed files") {
    std::istringstream ragged("A5\nF\n");
    CHECK_THROWS_AS(parse_population(ragged), std::invalid_argument);
    std::istringstream junk("A5\nG0\n");
    CHECK_THROWS_AS(parse_population(junk), std::invalid_argument);
    CHECK_THROWS_AS(load_population("/nonexistent/tags.txt"), std::runtime_error);
  }
}

TEST_CASE("inventory power trace") {
  const Gen2Timing timing = default_timing(640e3);
  const double power = 2e-3;
  RandomStream rng(83);

  SUBCASE("an empty selection is a constant carrier") {
    const ElementTerms terms = binary_terms({0.8, -0.6}, {}, {});
    const ConfigurationTrace trace = inventory_power_trace({}, terms, power, timing, nullptr, rng);
    REQUIRE(trace.events.size() == 25);
    const double cw = 2.0 * power * std::norm(terms.direct);
    for (const auto& event : trace.events) CHECK(event.power_w == doctest::Approx(cw).epsilon(1e-12));
    CHECK(trace.events.front().kind == TraceEvent::Kind::query);
    CHECK(trace.events.back().kind == TraceEvent::Kind::delay);
  }

  SUBCASE("timestamps strictly increase") {
    const ElementTerms terms = binary_terms({1.0, 0.0}, {{0.5, 0.0}, {0.2, 0.1}}, {{-0.5, 0.0}, {-0.2, 0.1}});
    const ConfigurationTrace trace =
        inventory_power_trace({0, 1}, terms, power, timing, nullptr, rng);
    REQUIRE(trace.events.size() == 27);
    for (std::size_t i = 1; i < trace.events.size(); ++i) {
      CHECK(trace.events[i].time_s > trace.events[i - 1].time_s);
    }
    CHECK(trace.events[0].kind == TraceEvent::Kind::select);
    CHECK(trace.events[1].kind == TraceEvent::Kind::select);
    CHECK(trace.events[2].kind == TraceEvent::Kind::query);
  }

  SUBCASE("one selected tag toggles between the two binary levels") {
    const ElementTerms terms = binary_terms({1.0, 0.0}, {{0.5, 0.0}}, {{-0.5, 0.0}});
    const std::vector<std::array<std::uint8_t, 16>> payload = {
        {{1, 1, 1, 1, 0, 0, 0, 0, 1, 0, 1, 0, 1, 1, 0, 0}}};
    const ConfigurationTrace trace =
        inventory_power_trace({0}, terms, power, timing, &payload, rng);
    const double level0 = 2.0 * power * std::norm(cplx{1.5, 0.0});
    const double level1 = 2.0 * power * std::norm(cplx{0.5, 0.0});

    // select, query, then 6 preamble and 16 payload symbols
    for (std::size_t s = 0; s < preamble_bits.size(); ++s) {
      const double expected = preamble_bits[s] == 0 ? level0 : level1;
      CHECK(trace.events[2 + s].power_w == doctest::Approx(expected).epsilon(1e-12));
    }
    for (std::size_t s = 0; s < 16; ++s) {
      const double expected = payload[0][s] == 0 ? level0 : level1;
      CHECK(trace.events[8 + s].power_w == doctest::Approx(expected).epsilon(1e-12));
    }
  }

  SUBCASE("tags replying identical payloads stay coherent") {
    const ElementTerms terms =
        binary_terms({1.0, 0.0}, {{0.4, 0.1}, {0.3, -0.2}}, {{-0.4, 0.1}, {-0.3, 0.2}});
    const std::array<std::uint8_t, 16> bits = {0, 1, 1, 0, 0, 1, 0, 1, 1, 1, 0, 0, 1, 0, 1, 0};
    const std::vector<std::array<std::uint8_t, 16>> payload = {bits, bits};
    const ConfigurationTrace trace =
        inventory_power_trace({0, 1}, terms, power, timing, &payload, rng);

    const auto coherent_level = [&](std::uint8_t bit) {
      return 2.0 * power * std::norm(terms.direct + terms.term(0, bit) + terms.term(1, bit));
    };
    for (std::size_t s = 0; s < 16; ++s) {
      CHECK(trace.events[9 + s].power_w == doctest::Approx(coherent_level(bits[s])).epsilon(1e-12));
    }
  }

  SUBCASE("rejects inconsistent requests") {
    const ElementTerms terms = binary_terms({1.0, 0.0}, {{0.5, 0.0}}, {{-0.5, 0.0}});
    const std::vector<std::array<std::uint8_t, 16>> payload;
    CHECK_THROWS_AS(inventory_power_trace({0}, terms, power, timing, &payload, rng),
                    std::invalid_argument);
    CHECK_THROWS_AS(inventory_power_trace({0, 0}, terms, power, timing, nullptr, rng),
                    std::invalid_argument);
    CHECK_THROWS_AS(inventory_power_trace({5}, terms, power, timing, nullptr, rng),
                    std::invalid_argument);
    CHECK_THROWS_AS(inventory_power_trace({0}, terms, 0.0, timing, nullptr, rng),
                    std::invalid_argument);
  }
}

TEST_CASE("trace export") {
  const Gen2Timing timing = default_timing(640e3);
  RandomStream rng(89);
  const ElementTerms terms = binary_terms({1.0, 0.0}, {{0.5, 0.0}}, {{-0.5, 0.0}});
  const ConfigurationTrace trace = inventory_power_trace({0}, terms, 2e-3, timing, nullptr, rng);

  std::ostringstream out;
  write_trace_csv(out, trace);
  std::istringstream lines(out.str());
  std::string line;
  REQUIRE(std::getline(lines, line));
  CHECK(line == "time_s,event,power_w,power_dbm");
  std::size_t rows = 0;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == trace.events.size());
}

TEST_CASE("random configuration search") {
  RandomStream channel_rng(97);
  const std::size_t elements = 6;
  std::vector<cplx> on(elements), off(elements);
  for (std::size_t m = 0; m < elements; ++m) {
    const cplx base = channel_rng.complex_gaussian(1.0);
    on[m] = base;
    off[m] = -base;
  }
  const ElementTerms terms = binary_terms({2.0, 1.0}, on, off);

  SUBCASE("series is a running maximum and repeatable") {
    RandomStream rng(201);
    const std::vector<double> series = random_search(terms, 3, 40, 3, rng);
    REQUIRE(series.size() == 40);
    for (std::size_t i = 1; i < series.size(); ++i) CHECK(series[i] >= series[i - 1]);

    RandomStream replay(201);
    CHECK(random_search(terms, 3, 40, 3, replay) == series);
  }

  SUBCASE("a long run reaches the best subset of the requested size") {
    cplx idle = terms.direct;
    for (std::size_t m = 0; m < elements; ++m) idle += terms.term(m, 1);
    const double baseline = std::norm(terms.direct);
    double best = linear_to_db(std::norm(idle) / baseline);
    for (std::size_t a = 0; a < elements; ++a) {
      for (std::size_t b = a + 1; b < elements; ++b) {
        for (std::size_t c = b + 1; c < elements; ++c) {
          cplx toggled = idle;
          for (const std::size_t m : {a, b, c}) {
            toggled += terms.term(m, 0) - terms.term(m, 1);
          }
          best = std::max(best, linear_to_db(std::norm(toggled) / baseline));
        }
      }
    }
    RandomStream rng(203);
    const std::vector<double> series = random_search(terms, 3, 1500, 3, rng);
    CHECK(series.back() == doctest::Approx(best).epsilon(1e-12));
  }

  SUBCASE("the exhaustive binary optimum bounds every sample") {
    const OptimizationResult optimum = brute_force(terms);
    const double bound =
        linear_to_db(optimum.amplitude * optimum.amplitude / std::norm(terms.direct));
    for (std::size_t mu = 1; mu <= elements; ++mu) {
      RandomStream rng(300 + mu);
      const std::vector<double> series = random_search(terms, mu, 200, 2, rng);
      for (const double value : series) CHECK(value <= bound + 1e-9);
    }
  }

  SUBCASE("an empty surface never improves on the carrier") {
    ElementTerms bare;
    bare.direct = {1.0, 0.0};
    bare.loads = 2;
    RandomStream rng(205);
    const std::vector<double> series = random_search(bare, 0, 10, 2, rng);
    for (const double value : series) CHECK(value == 0.0);
  }

  SUBCASE("rejects malformed requests") {
    RandomStream rng(207);
    CHECK_THROWS_AS(random_search(terms, 7, 10, 1, rng), std::invalid_argument);
    CHECK_THROWS_AS(random_search(terms, 3, 0, 1, rng), std::invalid_argument);
    CHECK_THROWS_AS(random_search(terms, 3, 10, 0, rng), std::invalid_argument);
    ElementTerms wide = terms;
    wide.loads = 3;
    wide.terms.resize(elements * 3, cplx{0.1, 0.0});
    CHECK_THROWS_AS(random_search(wide, 3, 10, 1, rng), std::invalid_argument);
  }
}

TEST_CASE("tag record validation") {
  TagRecord empty;
  CHECK_THROWS_AS(validate(empty), std::invalid_argument);
  TagRecord bad = tag_with_epc({1, 0, 1}, 0);
  bad.epc[1] = 2;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  CHECK_NOTHROW(validate(tag_with_epc({1, 0, 1}, 2)));
}
