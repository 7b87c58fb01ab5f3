#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "risim/ini.hpp"
#include "risim/optimizer.hpp"
#include "risim/random.hpp"

namespace risim {

/// One tag in an inventory population. epc holds individual bits (0/1).
struct TagRecord {
  std::vector<std::uint8_t> epc;
  bool selected = false;  // SL flag
  std::size_t element_index = 0;
};

/// Select command: sets or clears the SL flag of tags whose EPC matches the
/// mask at mask_offset. broadcast makes a clearing command reach every tag
/// regardless of mask.
struct SelectCommand {
  enum class Action : std::uint8_t {
    assert_matched,    // 001
    deassert_matched,  // 000
  };
  Action action = Action::assert_matched;
  std::vector<std::uint8_t> mask;
  std::size_t mask_offset = 0;
  bool broadcast = false;
};

/// Link timing. t_select and t_pu scale with the backscatter link frequency;
/// the remaining terms are fixed overheads.
struct Gen2Timing {
  double blf_hz = 40e3;
  double t_select_s = 61.0 / 40e3;
  double t4_s = 0.15e-3;
  double t_delay_s = 30e-3;
  double t_pu_s = 184.0 / 40e3;
};

/// Timing with the rate-dependent terms derived from blf_hz.
Gen2Timing default_timing(double blf_hz);
Gen2Timing timing_from_ini(const IniData& data, Gen2Timing base = default_timing(40e3));
void validate(const Gen2Timing& timing);

/// Wall-clock cost of switching the surface to a new configuration of mu
/// selected tags: (mu + 1) select rounds plus the power-up delay.
double config_switch_time(std::size_t mu, const Gen2Timing& timing);

/// True when the tag's EPC equals the mask over [mask_offset, mask_offset +
/// mask length); an empty mask matches every tag.
bool select_matches(const SelectCommand& cmd, const TagRecord& tag);

/// Applies the select command to every tag and returns the updated population.
std::vector<TagRecord> apply_select(const SelectCommand& cmd, std::vector<TagRecord> population);

struct TraceEvent {
  enum class Kind : std::uint8_t { select, query, rn16, ack, delay };
  double time_s = 0.0;
  Kind kind = Kind::select;
  double power_w = 0.0;
};

/// Destination power timeline of one inventory round. Timestamps strictly
/// increase; power is piecewise constant from each event to the next.
struct ConfigurationTrace {
  std::vector<TraceEvent> events;
};

inline constexpr std::array<std::uint8_t, 6> preamble_bits = {1, 0, 1, 0, 1, 1};

/// Simulates one inventory round: select commands for the chosen tags, a
/// query, the superimposed tag reply (6 coherent preamble symbols, then 16
/// per-tag random RN16 symbols), an acknowledgement, and the configuration
/// delay. Selected tags modulate their bits through the K=2 term table;
/// everything static is carried by the direct term. rn16_bits, when given,
/// supplies each selected tag's payload; otherwise the bits are drawn from
/// rng.
ConfigurationTrace inventory_power_trace(const std::vector<std::size_t>& selected,
                                         const ElementTerms& terms, double power_w,
                                         const Gen2Timing& timing,
                                         const std::vector<std::array<std::uint8_t, 16>>* rn16_bits,
                                         RandomStream& rng);

/// Random configuration search over mu-element subsets. Each tested
/// configuration puts the selected tags in the asserted binary state and every
/// other tag in the deasserted state (load index 1), and measures the
/// coherent-preamble peak power against the direct-only baseline. Returns the
/// running maximum improvement in dB per configuration count, maximized over
/// `repetitions` independent runs.
std::vector<double> random_search(const ElementTerms& terms, std::size_t mu, std::size_t n_configs,
                                  std::size_t repetitions, RandomStream& rng);

/// EPC populations: random generation and hex-file I/O (one hex string per
/// line, all of equal length).
std::vector<TagRecord> generate_population(std::size_t count, std::size_t epc_bits, RandomStream& rng);
std::vector<TagRecord> parse_population(std::istream& in);
std::vector<TagRecord> load_population(const std::string& path);

/// Trace export: time_s, event, power_w, power_dbm.
void write_trace_csv(std::ostream& out, const ConfigurationTrace& trace);

void validate(const TagRecord& tag);

}  // namespace risim
