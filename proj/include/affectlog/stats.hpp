#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "affectlog/corpus.hpp"

namespace affectlog {

// Granularity the statistics were collected at. A table built from stories
// must not be mixed with one built from sentences.
enum class UnitKind { Story, Sentence };

std::string_view to_string(UnitKind kind);
UnitKind unit_kind_from_string(std::string_view s);

// Class-conditional occurrence counts for one pattern key. Probabilities are
// derived, never stored, so they cannot drift from the counts.
struct PatternStats {
  std::uint64_t pos_count = 0;
  std::uint64_t neg_count = 0;

  std::uint64_t freq() const { return pos_count + neg_count; }
  double p_pos() const {
    return freq() == 0 ? 0.0
                       : static_cast<double>(pos_count) /
                             static_cast<double>(freq());
  }
  double p_neg() const {
    return freq() == 0 ? 0.0
                       : static_cast<double>(neg_count) /
                             static_cast<double>(freq());
  }

  friend bool operator==(const PatternStats&, const PatternStats&) = default;
};

// Selection thresholds for one class: minimum pattern frequency, minimum
// class-conditional probability, minimum qualifying hits per unit.
struct ThresholdParams {
  std::uint64_t theta_f = 1;
  double theta_p = 0.0;
  std::uint64_t theta_n = 1;

  // theta_f >= 1, theta_p in [0,1], theta_n >= 1.
  void validate() const;

  friend bool operator==(const ThresholdParams&,
                         const ThresholdParams&) = default;
};

struct StatsTable {
  UnitKind unit_kind = UnitKind::Story;
  // Ordered by key so iteration and serialization are deterministic.
  std::map<std::string, PatternStats, std::less<>> entries;

  // nullptr when the key was never observed.
  const PatternStats* find(std::string_view key) const;
};

// One labeled text unit reduced to its extracted pattern keys. Keys keep
// their multiplicity: a pattern occurring twice contributes two counts.
struct LabeledUnit {
  std::vector<std::string> keys;
  Polarity label = Polarity::Unlabeled;
};

// Tallies per-class occurrence counts over labeled units. Every unit must be
// labeled Pos or Neg; anything else throws std::invalid_argument.
StatsTable collect_stats(std::span<const LabeledUnit> units, UnitKind kind);

// Sums counts per key. Throws std::invalid_argument on unit_kind mismatch.
StatsTable merge_stats(const StatsTable& a, const StatsTable& b);

// Number of key occurrences (with multiplicity) whose stats satisfy
// freq >= theta_f and p_cls >= theta_p. cls must be Pos or Neg.
std::uint64_t qualifying_hits(std::span<const std::string> keys,
                              const StatsTable& table, Polarity cls,
                              const ThresholdParams& params);

// Pos when only the positive class reaches theta_n qualifying hits, Neg when
// only the negative class does, Neutral when both or neither fire.
Polarity classify_threshold(std::span<const std::string> keys,
                            const StatsTable& table,
                            const ThresholdParams& pos,
                            const ThresholdParams& neg);

// JSON Lines, one {key, freq, pos_count, neg_count} object per entry in key
// order. Probabilities are recomputed on load.
void save_stats_jsonl(const StatsTable& table, std::ostream& out);

// The serialized form does not carry the unit kind; the caller supplies it.
// Throws std::runtime_error on malformed lines, duplicate keys, or rows
// where freq != pos_count + neg_count.
StatsTable load_stats_jsonl(std::istream& in, UnitKind kind);

}  // namespace affectlog
