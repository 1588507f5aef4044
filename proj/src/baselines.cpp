#include "affectlog/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace affectlog {

namespace {

// Negation scope: a token is negated when any node on its head path,
// including itself, carries a negation dependent.
bool under_negation(const Sentence& s, int token_index,
                    const DeprelAliases& aliases) {
  int idx = token_index;
  for (std::size_t steps = 0; steps <= s.tokens.size() && idx != 0; ++steps) {
    if (has_negation_dependent(s, idx, aliases)) return true;
    const Token* t = s.token_at(idx);
    if (t == nullptr) break;
    idx = t->head;
  }
  return false;
}

std::vector<std::string> unique_lemmas(const Sentence& s) {
  std::vector<std::string> lemmas;
  lemmas.reserve(s.tokens.size());
  for (const Token& t : s.tokens) lemmas.push_back(t.lemma);
  std::sort(lemmas.begin(), lemmas.end());
  lemmas.erase(std::unique(lemmas.begin(), lemmas.end()), lemmas.end());
  return lemmas;
}

}  // namespace

Lexicon load_lexicon_tsv(std::istream& in) {
  Lexicon lex;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 ||
        line.find('\t', tab + 1) != std::string::npos)
      throw std::runtime_error("lexicon line " + std::to_string(line_no) +
                               ": expected lemma<TAB>score");
    const std::string lemma = line.substr(0, tab);
    const std::string score_text = line.substr(tab + 1);
    double score = 0.0;
    std::size_t consumed = 0;
    try {
      score = std::stod(score_text, &consumed);
    } catch (const std::exception&) {
      consumed = 0;
    }
    if (consumed != score_text.size() || !std::isfinite(score))
      throw std::runtime_error("lexicon line " + std::to_string(line_no) +
                               ": bad score '" + score_text + "'");
    if (!lex.emplace(lemma, score).second)
      throw std::runtime_error("lexicon line " + std::to_string(line_no) +
                               ": duplicate lemma '" + lemma + "'");
  }
  return lex;
}

Polarity lexicon_classify(const Sentence& s, const Lexicon& lex, double tau,
                          const DeprelAliases& aliases) {
  if (!(tau >= 0.0))
    throw std::invalid_argument("tau must be >= 0");
  double score = 0.0;
  for (const Token& t : s.tokens) {
    auto it = lex.find(t.lemma);
    if (it == lex.end()) continue;
    score += under_negation(s, t.index, aliases) ? -it->second : it->second;
  }
  if (score > tau) return Polarity::Pos;
  if (score < -tau) return Polarity::Neg;
  return Polarity::Neutral;
}

double LinearModel::score(const Sentence& s) const {
  double total = bias;
  for (const std::string& lemma : unique_lemmas(s)) {
    auto it = std::lower_bound(vocab.begin(), vocab.end(), lemma);
    if (it != vocab.end() && *it == lemma)
      total += weights[static_cast<std::size_t>(it - vocab.begin())];
  }
  return total;
}

LinearModel train_linear(
    std::span<const std::pair<const Sentence*, Polarity>> data,
    const LinearTrainConfig& config, std::vector<double>* epoch_avg_loss) {
  if (config.epochs < 1)
    throw std::invalid_argument("epochs must be >= 1");
  if (!(config.learning_rate > 0.0))
    throw std::invalid_argument("learning_rate must be > 0");
  if (!(config.reg >= 0.0))
    throw std::invalid_argument("reg must be >= 0");

  std::vector<double> labels;
  labels.reserve(data.size());
  bool has_pos = false;
  bool has_neg = false;
  for (const auto& [sentence, polarity] : data) {
    if (polarity == Polarity::Pos) {
      labels.push_back(1.0);
      has_pos = true;
    } else if (polarity == Polarity::Neg) {
      labels.push_back(-1.0);
      has_neg = true;
    } else {
      throw std::invalid_argument(
          "train_linear requires sentences labeled pos or neg");
    }
  }
  if (!has_pos || !has_neg)
    throw std::invalid_argument("train_linear requires both classes");

  LinearModel model;
  {
    std::set<std::string> vocab_set;
    for (const auto& [sentence, polarity] : data)
      for (const Token& t : sentence->tokens) vocab_set.insert(t.lemma);
    model.vocab.assign(vocab_set.begin(), vocab_set.end());
  }
  model.weights.assign(model.vocab.size(), 0.0);

  // Binary presence features as sorted vocabulary indices.
  std::vector<std::vector<std::size_t>> features(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (const std::string& lemma : unique_lemmas(*data[i].first)) {
      auto it =
          std::lower_bound(model.vocab.begin(), model.vocab.end(), lemma);
      features[i].push_back(
          static_cast<std::size_t>(it - model.vocab.begin()));
    }
  }

  auto example_score = [&](std::size_t i) {
    double s = model.bias;
    for (std::size_t f : features[i]) s += model.weights[f];
    return s;
  };

  std::mt19937_64 rng(config.seed);
  std::vector<std::size_t> order(data.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const double shrink =
      std::max(0.0, 1.0 - config.learning_rate * config.reg);

  if (epoch_avg_loss != nullptr) epoch_avg_loss->clear();
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    // Seeded Fisher-Yates; mt19937_64's output sequence is fully specified,
    // so the permutation is identical across platforms.
    for (std::size_t i = order.size(); i > 1; --i) {
      const std::size_t j =
          static_cast<std::size_t>(rng() % static_cast<std::uint64_t>(i));
      std::swap(order[i - 1], order[j]);
    }
    for (std::size_t idx : order) {
      if (shrink != 1.0)
        for (double& w : model.weights) w *= shrink;
      const double margin = labels[idx] * example_score(idx);
      if (margin < 1.0) {
        const double step = config.learning_rate * labels[idx];
        for (std::size_t f : features[idx]) model.weights[f] += step;
        model.bias += step;
      }
    }
    if (epoch_avg_loss != nullptr) {
      double total = 0.0;
      for (std::size_t i = 0; i < data.size(); ++i)
        total += std::max(0.0, 1.0 - labels[i] * example_score(i));
      epoch_avg_loss->push_back(total / static_cast<double>(data.size()));
    }
  }
  return model;
}

Polarity predict_linear(const LinearModel& m, const Sentence& s) {
  return m.score(s) >= 0.0 ? Polarity::Pos : Polarity::Neg;
}

void save_linear_json(const LinearModel& m, std::ostream& out) {
  nlohmann::json j;
  j["bias"] = m.bias;
  nlohmann::json weights = nlohmann::json::object();
  for (std::size_t i = 0; i < m.vocab.size(); ++i)
    weights[m.vocab[i]] = m.weights[i];
  j["weights"] = std::move(weights);
  out << j.dump(2) << '\n';
}

LinearModel load_linear_json(std::istream& in) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("bad model JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("bias") || !j.contains("weights") ||
      !j["weights"].is_object())
    throw std::runtime_error("model JSON must be {bias, weights: {...}}");
  LinearModel m;
  m.bias = j["bias"].get<double>();
  for (const auto& [feature, weight] : j["weights"].items()) {
    m.vocab.push_back(feature);
    m.weights.push_back(weight.get<double>());
  }
  if (!std::isfinite(m.bias))
    throw std::runtime_error("model bias is not finite");
  for (double w : m.weights)
    if (!std::isfinite(w)) throw std::runtime_error("model weight not finite");
  // nlohmann object iteration is key-ordered, but verify: score() binary
  // searches the vocabulary.
  if (!std::is_sorted(m.vocab.begin(), m.vocab.end()))
    throw std::runtime_error("model features are not sorted");
  return m;
}

}  // namespace affectlog
