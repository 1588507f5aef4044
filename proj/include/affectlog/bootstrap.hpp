#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "affectlog/corpus.hpp"
#include "affectlog/patterns.hpp"
#include "affectlog/stats.hpp"

namespace affectlog {

// Expansion thresholds tuned for precision over recall: only stories with
// several strongly class-associated patterns get labeled.
inline constexpr ThresholdParams kBootstrapPosDefaults{10, 0.7, 3};
inline constexpr ThresholdParams kBootstrapNegDefaults{10, 0.85, 4};

struct BootstrapRoundResult {
  std::vector<Document> newly_labeled;
  std::vector<Document> still_unlabeled;
};

// One expansion pass: builds a story-level stats table from the seed, then
// classifies every unlabeled story against the frozen table. Stories
// classified Pos/Neg move to newly_labeled with that label; Neutral stories
// stay unlabeled. Throws std::invalid_argument when the seed is empty or
// single-class, when a seed story is unlabeled, or when an "unlabeled" story
// already carries a label.
BootstrapRoundResult bootstrap_round(
    std::span<const Document> seed, std::span<const Document> unlabeled,
    const ThresholdParams& pos = kBootstrapPosDefaults,
    const ThresholdParams& neg = kBootstrapNegDefaults,
    const ExtractOptions& opts = default_extract_options());

struct BootstrapResult {
  // Seed stories first (labels untouched), then newly labeled stories in
  // input order, round by round.
  std::vector<Document> labeled;
  std::vector<Document> unlabeled;
  std::size_t rounds_run = 0;
};

// Repeats bootstrap_round, folding each round's new labels into the seed,
// until a round labels nothing or max_rounds is reached. The default single
// round makes run_bootstrap equivalent to bootstrap_round.
BootstrapResult run_bootstrap(
    std::span<const Document> seed, std::span<const Document> unlabeled,
    const ThresholdParams& pos = kBootstrapPosDefaults,
    const ThresholdParams& neg = kBootstrapNegDefaults,
    std::size_t max_rounds = 1,
    const ExtractOptions& opts = default_extract_options());

}  // namespace affectlog
