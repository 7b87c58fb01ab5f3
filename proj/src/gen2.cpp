#include "risim/gen2.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "risim/stats.hpp"
#include "risim/units.hpp"

namespace risim {

void validate(const Gen2Timing& timing) {
  if (!(timing.blf_hz >= 40e3) || !(timing.blf_hz <= 640e3)) {
    throw std::invalid_argument("gen2: BLF must be within [40, 640] kHz");
  }
  if (!(timing.t_select_s > 0.0) || !(timing.t4_s > 0.0) || !(timing.t_delay_s > 0.0) ||
      !(timing.t_pu_s > 0.0)) {
    throw std::invalid_argument("gen2: timing durations must be positive");
  }
}

Gen2Timing default_timing(double blf_hz) {
  Gen2Timing timing;
  timing.blf_hz = blf_hz;
  timing.t_select_s = 61.0 / blf_hz;
  timing.t_pu_s = 184.0 / blf_hz;
  validate(timing);
  return timing;
}

Gen2Timing timing_from_ini(const IniData& data, Gen2Timing base) {
  Gen2Timing timing = base;
  if (data.count("gen2") && data.at("gen2").count("blf_hz")) {
    timing = default_timing(ini_get_double(data, "gen2", "blf_hz", timing.blf_hz));
  }
  timing.t_select_s = ini_get_double(data, "gen2", "t_select_s", timing.t_select_s);
  timing.t4_s = ini_get_double(data, "gen2", "t4_s", timing.t4_s);
  timing.t_delay_s = ini_get_double(data, "gen2", "t_delay_s", timing.t_delay_s);
  timing.t_pu_s = ini_get_double(data, "gen2", "t_pu_s", timing.t_pu_s);
  validate(timing);
  return timing;
}

double config_switch_time(std::size_t mu, const Gen2Timing& timing) {
  validate(timing);
  if (mu == 0) throw std::invalid_argument("gen2: a configuration selects at least one tag");
  return static_cast<double>(mu + 1) * (timing.t_select_s + timing.t4_s) + timing.t_delay_s +
         timing.t_pu_s;
}

void validate(const TagRecord& tag) {
  if (tag.epc.empty()) throw std::invalid_argument("gen2: tag EPC must be non-empty");
  for (const auto b : tag.epc) {
    if (b > 1) throw std::invalid_argument("gen2: EPC entries must be bits");
  }
}

bool select_matches(const SelectCommand& cmd, const TagRecord& tag) {
  validate(tag);
  if (cmd.mask_offset + cmd.mask.size() > tag.epc.size()) {
    throw std::invalid_argument("gen2: select mask exceeds the EPC length");
  }
  return std::equal(cmd.mask.begin(), cmd.mask.end(), tag.epc.begin() + cmd.mask_offset);
}

std::vector<TagRecord> apply_select(const SelectCommand& cmd, std::vector<TagRecord> population) {
  for (auto& tag : population) {
    if (cmd.action == SelectCommand::Action::deassert_matched && cmd.broadcast) {
      tag.selected = false;
      continue;
    }
    if (select_matches(cmd, tag)) {
      tag.selected = cmd.action == SelectCommand::Action::assert_matched;
    }
  }
  return population;
}

namespace {

std::vector<std::size_t> checked_selection(const std::vector<std::size_t>& selected,
                                           const ElementTerms& terms) {
  std::vector<std::size_t> sorted = selected;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("gen2: selected element listed twice");
  }
  if (!sorted.empty() && sorted.back() >= terms.elements) {
    throw std::invalid_argument("gen2: selected element out of range");
  }
  return sorted;
}

}  // namespace

ConfigurationTrace inventory_power_trace(const std::vector<std::size_t>& selected,
                                         const ElementTerms& terms, double power_w,
                                         const Gen2Timing& timing,
                                         const std::vector<std::array<std::uint8_t, 16>>* rn16_bits,
                                         RandomStream& rng) {
  validate(terms);
  validate(timing);
  if (terms.elements > 0 && terms.loads != 2) {
    throw std::invalid_argument("gen2: the power trace models binary modulation");
  }
  if (!(power_w > 0.0)) throw std::invalid_argument("gen2: transmit power must be positive");
  const std::vector<std::size_t> tags = checked_selection(selected, terms);
  if (rn16_bits && rn16_bits->size() != tags.size()) {
    throw std::invalid_argument("gen2: need one RN16 payload per selected tag");
  }
  std::vector<std::array<std::uint8_t, 16>> payload;
  if (rn16_bits) {
    payload = *rn16_bits;
    for (const auto& bits : payload) {
      for (const auto b : bits) {
        if (b > 1) throw std::invalid_argument("gen2: RN16 entries must be bits");
      }
    }
  } else {
    payload.resize(tags.size());
    for (auto& bits : payload) {
      for (auto& b : bits) b = static_cast<std::uint8_t>(rng.uniform_below(2));
    }
  }

  const double scale = 2.0 * power_w;
  const double cw_power = scale * std::norm(terms.direct);
  const auto symbol_power = [&](const auto& bit_of_tag) {
    std::complex<double> sum = terms.direct;
    for (std::size_t i = 0; i < tags.size(); ++i) {
      sum += terms.term(tags[i], bit_of_tag(i));
    }
    return scale * std::norm(sum);
  };

  ConfigurationTrace trace;
  const double symbol_s = 1.0 / timing.blf_hz;
  double t = 0.0;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    trace.events.push_back({t, TraceEvent::Kind::select, cw_power});
    t += timing.t_select_s + timing.t4_s;
  }
  trace.events.push_back({t, TraceEvent::Kind::query, cw_power});
  t += 22.0 * symbol_s;
  for (const std::uint8_t bit : preamble_bits) {
    trace.events.push_back({t, TraceEvent::Kind::rn16, symbol_power([bit](std::size_t) { return bit; })});
    t += symbol_s;
  }
  for (std::size_t s = 0; s < 16; ++s) {
    trace.events.push_back(
        {t, TraceEvent::Kind::rn16, symbol_power([&payload, s](std::size_t i) { return payload[i][s]; })});
    t += symbol_s;
  }
  trace.events.push_back({t, TraceEvent::Kind::ack, cw_power});
  t += 18.0 * symbol_s;
  trace.events.push_back({t, TraceEvent::Kind::delay, cw_power});
  return trace;
}

std::vector<double> random_search(const ElementTerms& terms, std::size_t mu, std::size_t n_configs,
                                  std::size_t repetitions, RandomStream& rng) {
  validate(terms);
  if (terms.loads != 2) throw std::invalid_argument("gen2: random search runs on binary tags");
  if (mu > terms.elements) {
    throw std::invalid_argument("gen2: subset size must not exceed the element count");
  }
  if (n_configs == 0) throw std::invalid_argument("gen2: need at least one configuration");
  if (repetitions == 0) throw std::invalid_argument("gen2: need at least one repetition");
  const double baseline = std::norm(terms.direct);
  if (!(baseline > 0.0)) throw std::invalid_argument("gen2: direct term must be nonzero");

  // All tags idle at the deasserted load; a tested configuration toggles the
  // selected subset through its asserted bit, and the measured peak is the
  // larger of the two preamble levels.
  std::complex<double> idle = terms.direct;
  for (std::size_t m = 0; m < terms.elements; ++m) idle += terms.term(m, 1);
  const double idle_power = std::norm(idle);

  std::vector<double> best(n_configs, -std::numeric_limits<double>::infinity());
  std::vector<std::size_t> indices(terms.elements);
  for (std::size_t rep = 0; rep < repetitions; ++rep) {
    RandomStream stream = rng.substream(rep);
    for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = i;
    double running = -std::numeric_limits<double>::infinity();
    for (std::size_t cfg = 0; cfg < n_configs; ++cfg) {
      for (std::size_t i = 0; i < mu; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(stream.uniform_below(indices.size() - i));
        std::swap(indices[i], indices[j]);
      }
      std::complex<double> toggled = idle;
      for (std::size_t i = 0; i < mu; ++i) {
        const std::size_t m = indices[i];
        toggled += terms.term(m, 0) - terms.term(m, 1);
      }
      const double peak = std::max(std::norm(toggled), idle_power);
      running = std::max(running, linear_to_db(peak / baseline));
      best[cfg] = std::max(best[cfg], running);
    }
  }
  return best;
}

std::vector<TagRecord> generate_population(std::size_t count, std::size_t epc_bits, RandomStream& rng) {
  if (epc_bits == 0) throw std::invalid_argument("gen2: EPC length must be positive");
  std::vector<TagRecord> population;
  population.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    TagRecord tag;
    tag.epc.resize(epc_bits);
    for (auto& b : tag.epc) b = static_cast<std::uint8_t>(rng.uniform_below(2));
    tag.element_index = i;
    population.push_back(std::move(tag));
  }
  return population;
}

std::vector<TagRecord> parse_population(std::istream& in) {
  std::vector<TagRecord> population;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream tokens(line);
    std::string hex;
    if (!(tokens >> hex)) continue;
    if (hex[0] == '#') continue;
    TagRecord tag;
    tag.epc.reserve(hex.size() * 4);
    for (const char ch : hex) {
      int nibble = 0;
      if (ch >= '0' && ch <= '9') {
        nibble = ch - '0';
      } else if (ch >= 'a' && ch <= 'f') {
        nibble = ch - 'a' + 10;
      } else if (ch >= 'A' && ch <= 'F') {
        nibble = ch - 'A' + 10;
      } else {
        throw std::invalid_argument("population line " + std::to_string(lineno) + ": invalid hex digit");
      }
      for (int bit = 3; bit >= 0; --bit) {
        tag.epc.push_back(static_cast<std::uint8_t>((nibble >> bit) & 1));
      }
    }
    tag.element_index = population.size();
    population.push_back(std::move(tag));
  }
  for (const auto& tag : population) {
    if (tag.epc.size() != population.front().epc.size()) {
      throw std::invalid_argument("population: all EPCs must have the same length");
    }
  }
  return population;
}

std::vector<TagRecord> load_population(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open population file: " + path);
  return parse_population(in);
}

namespace {

const char* kind_name(TraceEvent::Kind kind) {
  switch (kind) {
    case TraceEvent::Kind::select: return "select";
    case TraceEvent::Kind::query: return "query";
    case TraceEvent::Kind::rn16: return "rn16";
    case TraceEvent::Kind::ack: return "ack";
    case TraceEvent::Kind::delay: return "delay";
  }
  return "?";
}

}  // namespace

void write_trace_csv(std::ostream& out, const ConfigurationTrace& trace) {
  out << "time_s,event,power_w,power_dbm\n";
  for (const auto& event : trace.events) {
    out << format_sig6(event.time_s) << ',' << kind_name(event.kind) << ','
        << format_sig6(event.power_w) << ',' << format_sig6(watts_to_dbm(event.power_w)) << '\n';
  }
}

}  // namespace risim
