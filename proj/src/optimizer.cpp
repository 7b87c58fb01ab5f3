#include "risim/optimizer.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "risim/units.hpp"

namespace risim {

namespace {

constexpr double angle_dedup_tol = 1e-12;

}  // namespace

void validate(const ElementTerms& terms) {
  if (terms.elements > 0 && terms.loads < 2) {
    throw std::invalid_argument("terms: need at least two loads per element");
  }
  if (terms.terms.size() != terms.elements * terms.loads) {
    throw std::invalid_argument("terms: table size does not match elements x loads");
  }
}

ElementTerms element_terms(const ChannelSet& channels, double direct_gain,
                           std::span<const double> element_gains, const ModulationAlphabet& alphabet) {
  validate(channels);
  if (element_gains.size() != channels.size()) {
    throw std::invalid_argument("terms: one gain per element required");
  }
  if (!(direct_gain > 0.0)) throw std::invalid_argument("terms: direct gain must be positive");
  if (channels.size() > 0 && alphabet.size() < 2) {
    throw std::invalid_argument("terms: alphabet needs at least two symbols");
  }
  ElementTerms out;
  out.elements = channels.size();
  out.loads = alphabet.size();
  out.direct = std::sqrt(direct_gain) * channels.direct;
  out.terms.reserve(out.elements * out.loads);
  for (std::size_t m = 0; m < out.elements; ++m) {
    if (!(element_gains[m] > 0.0)) throw std::invalid_argument("terms: element gains must be positive");
    const std::complex<double> base = std::sqrt(element_gains[m]) * channels.cascade[m];
    for (std::size_t k = 0; k < out.loads; ++k) {
      out.terms.push_back(base * alphabet.symbols[k]);
    }
  }
  return out;
}

std::uint32_t load_decision(double phi, std::complex<double> term0, std::complex<double> term1) {
  const std::complex<double> d = term0 - term1;
  if (d == std::complex<double>{0.0, 0.0}) return 0;
  // Same sign as cos(phi - arg(d)).
  const double r = d.real() * std::cos(phi) + d.imag() * std::sin(phi);
  return r >= 0.0 ? 0u : 1u;
}

BreakpointList breakpoints_k2(const ElementTerms& terms) {
  validate(terms);
  if (terms.elements > 0 && terms.loads != 2) {
    throw std::invalid_argument("breakpoints: binary sweep requires K = 2");
  }
  BreakpointList list;
  list.angles.reserve(2 * terms.elements);
  for (std::size_t m = 0; m < terms.elements; ++m) {
    const std::complex<double> d = terms.term(m, 0) - terms.term(m, 1);
    if (d == std::complex<double>{0.0, 0.0}) continue;
    const double a = std::arg(d);
    list.angles.push_back(wrap_angle(a + std::numbers::pi / 2.0));
    list.angles.push_back(wrap_angle(a - std::numbers::pi / 2.0));
  }
  std::sort(list.angles.begin(), list.angles.end());
  return list;
}

std::vector<double> envelope_breakpoints(std::span<const std::complex<double>> row) {
  const std::size_t k_count = row.size();
  if (k_count < 2) throw std::invalid_argument("envelope: need at least two terms");
  double scale = 0.0;
  for (const auto& t : row) scale = std::max(scale, std::abs(t));
  std::vector<double> angles;
  if (scale == 0.0) return angles;
  const double keep_tol = 1e-12 * scale;
  const double distinct_tol = 1e-14 * scale;
  for (std::size_t i = 0; i + 1 < k_count; ++i) {
    for (std::size_t j = i + 1; j < k_count; ++j) {
      const std::complex<double> d = row[i] - row[j];
      const double mag = std::abs(d);
      if (mag <= distinct_tol) continue;
      // The two crossing directions are the unit vectors orthogonal to d.
      double c = -d.imag() / mag;
      double s = d.real() / mag;
      for (int side = 0; side < 2; ++side) {
        if (side == 1) {
          c = -c;
          s = -s;
        }
        const double r = row[i].real() * c + row[i].imag() * s;
        bool on_envelope = true;
        for (std::size_t k = 0; k < k_count; ++k) {
          if (row[k].real() * c + row[k].imag() * s > r + keep_tol) {
            on_envelope = false;
            break;
          }
        }
        if (on_envelope) angles.push_back(wrap_angle(std::atan2(s, c)));
      }
    }
  }
  std::sort(angles.begin(), angles.end());
  std::vector<double> unique;
  unique.reserve(angles.size());
  for (const double a : angles) {
    if (unique.empty() || a - unique.back() > angle_dedup_tol) unique.push_back(a);
  }
  if (unique.size() > 1 && two_pi - unique.back() + unique.front() <= angle_dedup_tol) {
    unique.pop_back();
  }
  return unique;
}

namespace {

struct Crossing {
  double angle;
  std::uint32_t element;
};

std::uint32_t argmax_at(std::span<const std::complex<double>> row, double c, double s) {
  std::uint32_t best_k = 0;
  double best = row[0].real() * c + row[0].imag() * s;
  for (std::size_t k = 1; k < row.size(); ++k) {
    const double v = row[k].real() * c + row[k].imag() * s;
    if (v > best) {
      best = v;
      best_k = static_cast<std::uint32_t>(k);
    }
  }
  return best_k;
}

}  // namespace

OptimizationResult optimal_config_k2(const ElementTerms& in) {
  validate(in);
  if (in.elements > 0 && in.loads != 2) {
    throw std::invalid_argument("optimizer: binary sweep requires K = 2");
  }
  const std::size_t m_count = in.elements;

  std::vector<std::uint8_t> initial(m_count, 0);
  std::vector<Crossing> crossings;
  crossings.reserve(2 * m_count);
  std::complex<double> sum = in.direct;
  for (std::size_t m = 0; m < m_count; ++m) {
    const std::complex<double> d = in.term(m, 0) - in.term(m, 1);
    if (d != std::complex<double>{0.0, 0.0}) {
      const double a = std::arg(d);
      crossings.push_back({wrap_angle(a + std::numbers::pi / 2.0), static_cast<std::uint32_t>(m)});
      crossings.push_back({wrap_angle(a - std::numbers::pi / 2.0), static_cast<std::uint32_t>(m)});
      initial[m] = d.real() >= 0.0 ? 0 : 1;  // decision at phi = 0
    }
    sum += in.term(m, initial[m]);
  }
  std::sort(crossings.begin(), crossings.end(), [](const Crossing& a, const Crossing& b) {
    return a.angle != b.angle ? a.angle < b.angle : a.element < b.element;
  });

  // Walk the intervals between breakpoints: crossing one breakpoint flips
  // exactly that element, so the running sum tracks every interval's
  // configuration in O(1) per step. Coincident angles flip together.
  double best = std::norm(sum);
  std::size_t best_groups = 0;
  std::vector<std::uint8_t> state = initial;
  std::size_t i = 0, groups = 0;
  const std::size_t n = crossings.size();
  while (i < n) {
    const double base_angle = crossings[i].angle;
    std::size_t j = i;
    while (j < n && crossings[j].angle - base_angle <= angle_dedup_tol) {
      const std::uint32_t m = crossings[j].element;
      const std::uint8_t cur = state[m];
      sum += in.term(m, 1 - cur) - in.term(m, cur);
      state[m] = 1 - cur;
      ++j;
    }
    ++groups;
    const double a2 = std::norm(sum);
    if (a2 > best) {
      best = a2;
      best_groups = groups;
    }
    i = j;
  }

  // Replay the flips up to the best step to materialize its configuration.
  state = initial;
  i = 0;
  groups = 0;
  while (i < n && groups < best_groups) {
    const double base_angle = crossings[i].angle;
    std::size_t j = i;
    while (j < n && crossings[j].angle - base_angle <= angle_dedup_tol) {
      state[crossings[j].element] ^= 1;
      ++j;
    }
    ++groups;
    i = j;
  }

  OptimizationResult result;
  result.config.choice.assign(state.begin(), state.end());
  result.amplitude = std::sqrt(best);
  return result;
}

OptimizationResult optimal_config_general(const ElementTerms& in) {
  validate(in);
  const std::size_t m_count = in.elements;

  std::vector<Crossing> crossings;
  std::vector<std::uint32_t> initial(m_count, 0);
  std::complex<double> sum = in.direct;
  for (std::size_t m = 0; m < m_count; ++m) {
    for (const double a : envelope_breakpoints(in.row(m))) {
      crossings.push_back({a, static_cast<std::uint32_t>(m)});
    }
    initial[m] = argmax_at(in.row(m), 1.0, 0.0);  // phi = 0
    sum += in.term(m, initial[m]);
  }
  std::sort(crossings.begin(), crossings.end(), [](const Crossing& a, const Crossing& b) {
    return a.angle != b.angle ? a.angle < b.angle : a.element < b.element;
  });
  const std::size_t n = crossings.size();

  // Same interval walk as the binary sweep, except each affected element's
  // choice is re-evaluated at the midpoint of the interval being entered.
  const auto walk = [&](std::vector<std::uint32_t>& state, std::size_t stop_after,
                        auto&& on_interval) {
    std::size_t i = 0, groups = 0;
    while (i < n && groups < stop_after) {
      const double base_angle = crossings[i].angle;
      std::size_t j = i;
      while (j < n && crossings[j].angle - base_angle <= angle_dedup_tol) ++j;
      const double next_angle = j < n ? crossings[j].angle : two_pi;
      const double mid = 0.5 * (base_angle + next_angle);
      const double c = std::cos(mid), s = std::sin(mid);
      for (std::size_t jj = i; jj < j; ++jj) {
        const std::uint32_t m = crossings[jj].element;
        const std::uint32_t k_new = argmax_at(in.row(m), c, s);
        if (k_new != state[m]) {
          sum += in.term(m, k_new) - in.term(m, state[m]);
          state[m] = k_new;
        }
      }
      ++groups;
      on_interval(groups);
      i = j;
    }
  };

  double best = std::norm(sum);
  std::size_t best_groups = 0;
  std::vector<std::uint32_t> state = initial;
  walk(state, n, [&](std::size_t groups) {
    const double a2 = std::norm(sum);
    if (a2 > best) {
      best = a2;
      best_groups = groups;
    }
  });

  sum = in.direct;  // replay bookkeeping only needs the state
  state = initial;
  walk(state, best_groups, [](std::size_t) {});

  OptimizationResult result;
  result.config.choice = std::move(state);
  result.amplitude = std::sqrt(best);
  return result;
}

OptimizationResult brute_force(const ElementTerms& in) {
  validate(in);
  double combinations = 1.0;
  for (std::size_t m = 0; m < in.elements; ++m) {
    combinations *= static_cast<double>(in.loads);
    if (combinations > 1e7) {
      throw std::length_error("brute force: more than 10^7 configurations");
    }
  }
  std::vector<std::uint32_t> current(in.elements, 0);
  std::vector<std::uint32_t> best_config;
  double best = -1.0;
  // Depth-first enumeration in lexicographic order with prefix partial sums;
  // strict improvement keeps the first (smallest) maximizer.
  std::vector<std::complex<double>> partial(in.elements + 1);
  partial[0] = in.direct;
  const auto recurse = [&](auto&& self, std::size_t m) -> void {
    if (m == in.elements) {
      const double a2 = std::norm(partial[m]);
      if (a2 > best) {
        best = a2;
        best_config = current;
      }
      return;
    }
    for (std::uint32_t k = 0; k < in.loads; ++k) {
      current[m] = k;
      partial[m + 1] = partial[m] + in.term(m, k);
      self(self, m + 1);
    }
    current[m] = 0;
  };
  recurse(recurse, 0);
  OptimizationResult result;
  result.config.choice = std::move(best_config);
  result.amplitude = std::sqrt(best);
  return result;
}

double received_amplitude(const ElementTerms& terms, const Configuration& config) {
  validate(terms);
  if (config.choice.size() != terms.elements) {
    throw std::invalid_argument("amplitude: configuration length must equal element count");
  }
  std::complex<double> sum = terms.direct;
  for (std::size_t m = 0; m < terms.elements; ++m) {
    if (config.choice[m] >= terms.loads) {
      throw std::invalid_argument("amplitude: load index out of range");
    }
    sum += terms.term(m, config.choice[m]);
  }
  return std::abs(sum);
}

namespace {

std::string format_full(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

void write_instance(std::ostream& out, const ElementTerms& terms) {
  validate(terms);
  out << format_full(terms.direct.real()) << ' ' << format_full(terms.direct.imag()) << '\n';
  for (std::size_t m = 0; m < terms.elements; ++m) {
    for (std::size_t k = 0; k < terms.loads; ++k) {
      if (k > 0) out << ' ';
      const std::complex<double> t = terms.term(m, k);
      out << format_full(t.real()) << ' ' << format_full(t.imag());
    }
    out << '\n';
  }
}

ElementTerms read_instance(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream tokens(line);
    std::vector<double> values;
    std::string tok;
    while (tokens >> tok) {
      if (tok[0] == '#') break;
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
        throw std::invalid_argument("instance line " + std::to_string(lineno) + ": not a number: '" + tok + "'");
      }
      values.push_back(v);
    }
    if (!values.empty()) rows.push_back(std::move(values));
  }
  if (rows.empty()) throw std::invalid_argument("instance: missing direct-term line");
  if (rows[0].size() != 2) throw std::invalid_argument("instance: direct-term line must hold one re/im pair");
  ElementTerms terms;
  terms.direct = {rows[0][0], rows[0][1]};
  terms.elements = rows.size() - 1;
  if (terms.elements == 0) {
    terms.loads = 0;
    return terms;
  }
  const std::size_t width = rows[1].size();
  if (width < 4 || width % 2 != 0) {
    throw std::invalid_argument("instance: element lines need K >= 2 re/im pairs");
  }
  terms.loads = width / 2;
  terms.terms.reserve(terms.elements * terms.loads);
  for (std::size_t m = 1; m < rows.size(); ++m) {
    if (rows[m].size() != width) {
      throw std::invalid_argument("instance: ragged element line " + std::to_string(m));
    }
    for (std::size_t k = 0; k < terms.loads; ++k) {
      terms.terms.emplace_back(rows[m][2 * k], rows[m][2 * k + 1]);
    }
  }
  return terms;
}

}  // namespace risim
