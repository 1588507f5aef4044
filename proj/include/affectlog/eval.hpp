#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "affectlog/stats.hpp"

namespace affectlog {

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Two-way gold scored against three-way predictions. A Neutral prediction
// retrieves neither class: it costs the gold class recall but no precision.
struct EvalReport {
  // counts[gold][pred]: gold in {Pos, Neg}, pred in {Pos, Neg, Neutral}.
  std::uint64_t counts[2][3] = {};
  ClassMetrics pos;
  ClassMetrics neg;
  double macro_f = 0.0;  // arithmetic mean of the two class F1s

  std::uint64_t count(Polarity gold, Polarity pred) const;
  std::uint64_t total() const;
};

// gold must be all Pos/Neg; pred may also be Neutral. F1 = 2PR/(P+R) with
// 0/0 -> 0. Throws std::invalid_argument on length mismatch or bad labels.
EvalReport evaluate(std::span<const Polarity> pred,
                    std::span<const Polarity> gold);

// Candidate threshold values for one class; the search takes their
// cross-product. Every list must be non-empty and every value valid.
struct ClassGrid {
  std::vector<std::uint64_t> theta_f;
  std::vector<double> theta_p;
  std::vector<std::uint64_t> theta_n;
};

struct TuneGrid {
  ClassGrid pos;
  ClassGrid neg;

  void validate() const;
};

struct TuneResult {
  ThresholdParams pos;
  ThresholdParams neg;
  EvalReport report;
};

// Exhaustive joint search over pos x neg candidates, maximizing macro F on
// the dev units. Ties prefer higher theta_p, then higher theta_f, then lower
// theta_n, comparing the positive class first, so the winner is independent
// of enumeration order. Dev units must be non-empty with both classes.
TuneResult tune_thresholds(std::span<const LabeledUnit> dev,
                           const StatsTable& table, const TuneGrid& grid);

// JSON {"pos": {"theta_f": [...], "theta_p": [...], "theta_n": [...]},
//       "neg": {...}}.
TuneGrid load_tune_grid(const std::filesystem::path& path);

struct NamedReport {
  std::string name;
  EvalReport report;
};

// {pos: {precision, recall, f1}, neg: {...}, macro_f, counts: {...}}.
void write_eval_report_json(const EvalReport& report, std::ostream& out);

// Aligned columns: classifier name, Pos F1, Neg F1, Macro F, two decimals.
void write_results_table(std::span<const NamedReport> rows,
                         std::ostream& out);

}  // namespace affectlog
