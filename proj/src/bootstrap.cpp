#include "affectlog/bootstrap.hpp"

#include <stdexcept>
#include <string>
#include <utility>

#include "affectlog/parallel.hpp"

namespace affectlog {

namespace {

void check_seed(std::span<const Document> seed) {
  if (seed.empty())
    throw std::invalid_argument("bootstrap seed is empty");
  bool has_pos = false;
  bool has_neg = false;
  for (const Document& d : seed) {
    if (d.label == Polarity::Pos) has_pos = true;
    else if (d.label == Polarity::Neg) has_neg = true;
    else
      throw std::invalid_argument("seed story '" + d.doc_id +
                                  "' is not labeled pos or neg");
  }
  if (!has_pos || !has_neg)
    throw std::invalid_argument(
        "bootstrap seed must contain both classes; class probabilities "
        "degenerate otherwise");
}

void check_unlabeled(std::span<const Document> unlabeled) {
  for (const Document& d : unlabeled)
    if (d.label != Polarity::Unlabeled)
      throw std::invalid_argument("story '" + d.doc_id +
                                  "' passed as unlabeled but carries a label");
}

// Frozen-table classification of every pending story, in parallel.
std::vector<Polarity> classify_pending(
    const std::vector<std::vector<std::string>>& pending_keys,
    const StatsTable& table, const ThresholdParams& pos,
    const ThresholdParams& neg) {
  std::vector<Polarity> verdicts(pending_keys.size(), Polarity::Neutral);
  parallel_for(pending_keys.size(), [&](std::size_t i) {
    verdicts[i] = classify_threshold(pending_keys[i], table, pos, neg);
  });
  return verdicts;
}

}  // namespace

BootstrapRoundResult bootstrap_round(std::span<const Document> seed,
                                     std::span<const Document> unlabeled,
                                     const ThresholdParams& pos,
                                     const ThresholdParams& neg,
                                     const ExtractOptions& opts) {
  pos.validate();
  neg.validate();
  check_seed(seed);
  check_unlabeled(unlabeled);

  std::vector<LabeledUnit> units;
  units.reserve(seed.size());
  for (const Document& d : seed)
    units.push_back(LabeledUnit{story_keys(d, opts), d.label});
  const StatsTable table = collect_stats(units, UnitKind::Story);

  std::vector<std::vector<std::string>> pending_keys(unlabeled.size());
  parallel_for(unlabeled.size(), [&](std::size_t i) {
    pending_keys[i] = story_keys(unlabeled[i], opts);
  });
  const std::vector<Polarity> verdicts =
      classify_pending(pending_keys, table, pos, neg);

  BootstrapRoundResult result;
  for (std::size_t i = 0; i < unlabeled.size(); ++i) {
    if (verdicts[i] == Polarity::Neutral) {
      result.still_unlabeled.push_back(unlabeled[i]);
    } else {
      Document d = unlabeled[i];
      d.label = verdicts[i];
      result.newly_labeled.push_back(std::move(d));
    }
  }
  return result;
}

BootstrapResult run_bootstrap(std::span<const Document> seed,
                              std::span<const Document> unlabeled,
                              const ThresholdParams& pos,
                              const ThresholdParams& neg,
                              std::size_t max_rounds,
                              const ExtractOptions& opts) {
  if (max_rounds < 1)
    throw std::invalid_argument("max_rounds must be >= 1");
  pos.validate();
  neg.validate();
  check_seed(seed);
  check_unlabeled(unlabeled);

  BootstrapResult result;
  result.labeled.assign(seed.begin(), seed.end());

  std::vector<LabeledUnit> units;
  units.reserve(seed.size());
  for (const Document& d : seed)
    units.push_back(LabeledUnit{story_keys(d, opts), d.label});

  // Keys are extracted once per story and reused across rounds.
  std::vector<Document> pending(unlabeled.begin(), unlabeled.end());
  std::vector<std::vector<std::string>> pending_keys(pending.size());
  parallel_for(pending.size(), [&](std::size_t i) {
    pending_keys[i] = story_keys(pending[i], opts);
  });

  for (std::size_t round = 0; round < max_rounds; ++round) {
    const StatsTable table = collect_stats(units, UnitKind::Story);
    const std::vector<Polarity> verdicts =
        classify_pending(pending_keys, table, pos, neg);
    ++result.rounds_run;

    std::vector<Document> next_pending;
    std::vector<std::vector<std::string>> next_keys;
    std::size_t labeled_this_round = 0;
    for (std::size_t i = 0; i < pending.size(); ++i) {
      if (verdicts[i] == Polarity::Neutral) {
        next_pending.push_back(std::move(pending[i]));
        next_keys.push_back(std::move(pending_keys[i]));
      } else {
        Document d = std::move(pending[i]);
        d.label = verdicts[i];
        units.push_back(LabeledUnit{std::move(pending_keys[i]), d.label});
        result.labeled.push_back(std::move(d));
        ++labeled_this_round;
      }
    }
    pending = std::move(next_pending);
    pending_keys = std::move(next_keys);
    if (labeled_this_round == 0) break;
  }
  result.unlabeled = std::move(pending);
  return result;
}

}  // namespace affectlog
