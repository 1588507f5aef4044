#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "affectlog/corpus.hpp"

namespace affectlog {

// Lemma -> polarity score. A scored-word classifier that can abstain.
using Lexicon = std::map<std::string, double, std::less<>>;

// TSV `lemma<TAB>score`, one entry per line, '#' comment lines allowed.
// Throws std::runtime_error on malformed lines, non-finite scores, or
// duplicate lemmas.
Lexicon load_lexicon_tsv(std::istream& in);

// Sums lexicon scores over token lemmas; a token under a negated head chain
// (itself included) contributes its score negated. Returns Pos when the sum
// exceeds tau, Neg below -tau, Neutral inside the band. tau must be >= 0.
Polarity lexicon_classify(
    const Sentence& s, const Lexicon& lex, double tau,
    const DeprelAliases& aliases = default_deprel_aliases());

// Linear unigram classifier. Features are binary presence of lowercased
// lemmas; vocabulary is fixed at training time and sorted so training and
// serialization are reproducible.
struct LinearModel {
  double bias = 0.0;
  std::vector<std::string> vocab;    // sorted, unique
  std::vector<double> weights;       // parallel to vocab

  double score(const Sentence& s) const;
};

struct LinearTrainConfig {
  std::size_t epochs = 50;
  double learning_rate = 0.1;
  double reg = 0.0;
  std::uint64_t seed = 1;
};

// Hinge-loss stochastic subgradient descent with per-step truncated L2
// shrinkage on the weights (bias unregularized). The per-epoch example order
// is a seeded Fisher-Yates shuffle, so equal seeds give bit-identical
// models. Labels must be Pos or Neg with both classes present; otherwise
// std::invalid_argument. When epoch_avg_loss is non-null it receives the
// average hinge loss over the data after each epoch.
LinearModel train_linear(
    std::span<const std::pair<const Sentence*, Polarity>> data,
    const LinearTrainConfig& config = {},
    std::vector<double>* epoch_avg_loss = nullptr);

// Sign of the model score. Never abstains; an exact zero is Pos.
Polarity predict_linear(const LinearModel& m, const Sentence& s);

// JSON {bias, weights: {feature: weight}}.
void save_linear_json(const LinearModel& m, std::ostream& out);
LinearModel load_linear_json(std::istream& in);

}  // namespace affectlog
