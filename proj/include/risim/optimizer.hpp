#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "risim/channel.hpp"
#include "risim/loads.hpp"

namespace risim {

/// Per-element received contributions: direct holds sqrt(g_0) * h_0, and row
/// m holds sqrt(g_m) * h_m * symbols[k] for each load k (row-major M x K).
struct ElementTerms {
  std::complex<double> direct{0.0, 0.0};
  std::size_t elements = 0;
  std::size_t loads = 0;
  std::vector<std::complex<double>> terms;

  std::complex<double> term(std::size_t m, std::size_t k) const { return terms[m * loads + k]; }
  std::span<const std::complex<double>> row(std::size_t m) const {
    return {terms.data() + m * loads, loads};
  }
};

/// One load index per element.
struct Configuration {
  std::vector<std::uint32_t> choice;
};

/// Sorted auxiliary-phase angles in [0, 2*pi).
struct BreakpointList {
  std::vector<double> angles;
};

struct OptimizationResult {
  Configuration config;
  double amplitude = 0.0;  // |y_0 + sum of chosen terms|
};

/// Builds the term table from one channel realization, the direct and
/// per-element gains, and the modulation alphabet.
ElementTerms element_terms(const ChannelSet& channels, double direct_gain,
                           std::span<const double> element_gains, const ModulationAlphabet& alphabet);

/// Binary decision at auxiliary phase phi: 0 iff
/// cos(phi - arg(term0 - term1)) >= 0 (ties resolve to 0), else 1.
/// Equal terms always yield 0.
std::uint32_t load_decision(double phi, std::complex<double> term0, std::complex<double> term1);

/// All binary decision-change angles, two per element with distinct terms,
/// sorted ascending (no deduplication).
BreakpointList breakpoints_k2(const ElementTerms& terms);

/// Angles where argmax_k Re{e^{-j phi} * row[k]} changes, computed from the
/// pairwise crossing angles and filtered to those the crossing pair attains
/// the maximum at. Sorted, deduplicated, at most 2*(K-1) entries.
std::vector<double> envelope_breakpoints(std::span<const std::complex<double>> row);

/// Exact K=2 optimum via the sorted-breakpoint sweep; O(M log M).
OptimizationResult optimal_config_k2(const ElementTerms& terms);

/// Exact optimum for any K >= 2 via the per-element envelope sweep.
OptimizationResult optimal_config_general(const ElementTerms& terms);

/// Exhaustive oracle; refuses instances with K^M > 10^7. Ties break toward
/// the lexicographically smallest configuration.
OptimizationResult brute_force(const ElementTerms& terms);

/// |direct + sum_m term(m, choice[m])|.
double received_amplitude(const ElementTerms& terms, const Configuration& config);

/// Instance dump: one "re im" line for the direct term, then one line of K
/// "re im" pairs per element. Full round-trip precision.
void write_instance(std::ostream& out, const ElementTerms& terms);
ElementTerms read_instance(std::istream& in);

void validate(const ElementTerms& terms);

}  // namespace risim
