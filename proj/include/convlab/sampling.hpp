#pragma once

// Statistics of symbol sequences: empirical symbol frequencies (the
// Birkhoff averages of cylinder indicators) and the greedy recurrence times
// at which the shifted sequence re-enters deeper and deeper cylinders of a
// target sequence.

#include <stdexcept>
#include <vector>

#include "numeric.hpp"
#include "sequence.hpp"

namespace convlab {

struct FrequencyReport {
  long n = 0;                  // symbols examined
  std::vector<long> counts;    // per symbol 1..alphabet
  std::vector<Rational> freq;  // counts / n, exact; sums to exactly 1
};

inline FrequencyReport birkhoff_frequencies(const SequenceModel& m, long n, int alphabet = 0) {
  if (n < 1) throw std::invalid_argument("birkhoff_frequencies: need n >= 1");
  if (m.kind == SequenceModel::Kind::explicit_prefix &&
      static_cast<std::size_t>(n) > m.word.size())
    throw std::invalid_argument("birkhoff_frequencies: n exceeds the explicit prefix");
  int size = alphabet > 0 ? alphabet : m.alphabet_size();
  FrequencyReport rep;
  rep.n = n;
  rep.counts.assign(static_cast<std::size_t>(size), 0);
  for (long k = 1; k <= n; ++k) {
    const int s = symbol_at(m, k);
    if (s > size) {
      size = s;
      rep.counts.resize(static_cast<std::size_t>(size), 0);
    }
    ++rep.counts[static_cast<std::size_t>(s - 1)];
  }
  rep.freq.reserve(rep.counts.size());
  for (long c : rep.counts) rep.freq.emplace_back(Rational(c, n));
  return rep;
}

struct RecurrenceReport {
  std::vector<long> times;  // k_1 < k_2 < ...: shift k_j matches the target to depth j
  long horizon = 0;
  bool exhausted = false;   // ran out of symbols/horizon before reaching full target depth
};

// Greedy recurrence times: k_j is the smallest shift greater than k_{j-1}
// (k_1 >= 0) at which the shifted sequence agrees with the target through
// depth j. The horizon bounds every symbol index consulted.
inline RecurrenceReport recurrence_times(const SequenceModel& omega,
                                         const std::vector<int>& target, long horizon) {
  if (target.empty()) throw std::invalid_argument("recurrence_times: empty target");
  if (horizon < 1) throw std::invalid_argument("recurrence_times: need a positive horizon");
  long available = horizon;
  if (omega.kind == SequenceModel::Kind::explicit_prefix)
    available = std::min(available, static_cast<long>(omega.word.size()));

  RecurrenceReport rep;
  rep.horizon = horizon;
  long k = 0;
  for (std::size_t depth = 1; depth <= target.size(); ++depth) {
    bool found = false;
    for (; k + static_cast<long>(depth) <= available; ++k) {
      bool match = true;
      for (std::size_t i = 0; i < depth; ++i)
        if (symbol_at(omega, k + static_cast<long>(i) + 1) != target[i]) {
          match = false;
          break;
        }
      if (match) {
        rep.times.push_back(k);
        ++k;  // the next time must be strictly larger
        found = true;
        break;
      }
    }
    if (!found) {
      rep.exhausted = true;
      break;
    }
  }
  return rep;
}

}  // namespace convlab
