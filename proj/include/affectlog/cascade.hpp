#pragma once

#include <filesystem>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "affectlog/corpus.hpp"
#include "affectlog/patterns.hpp"

namespace affectlog {

template <typename Unit>
struct CascadeStage {
  std::string name;
  std::function<Polarity(const Unit&)> classify;
};

// Ordered fallthrough chain: each stage is consulted only when every earlier
// stage abstained (returned Neutral). One to three stages, unique names.
template <typename Unit>
class BasicCascade {
 public:
  BasicCascade() = default;
  explicit BasicCascade(std::vector<CascadeStage<Unit>> stages)
      : stages_(std::move(stages)) {
    validate();
  }

  const std::vector<CascadeStage<Unit>>& stages() const { return stages_; }

  void validate() const {
    if (stages_.empty() || stages_.size() > 3)
      throw std::invalid_argument("cascade needs 1 to 3 stages");
    for (std::size_t i = 0; i < stages_.size(); ++i) {
      if (stages_[i].name.empty())
        throw std::invalid_argument("cascade stage names must be nonempty");
      if (!stages_[i].classify)
        throw std::invalid_argument("cascade stage '" + stages_[i].name +
                                    "' has no classifier");
      for (std::size_t j = 0; j < i; ++j)
        if (stages_[j].name == stages_[i].name)
          throw std::invalid_argument("duplicate cascade stage name '" +
                                      stages_[i].name + "'");
    }
  }

  // First non-Neutral stage wins; Neutral means every stage abstained.
  Polarity classify(const Unit& u) const {
    validate();
    for (const CascadeStage<Unit>& stage : stages_) {
      Polarity p;
      try {
        p = stage.classify(u);
      } catch (const std::exception& e) {
        throw std::runtime_error("cascade stage '" + stage.name +
                                 "' failed: " + e.what());
      }
      if (p != Polarity::Neutral) return p;
    }
    return Polarity::Neutral;
  }

 private:
  std::vector<CascadeStage<Unit>> stages_;
};

template <typename Unit>
Polarity cascade_classify(const Unit& u, const BasicCascade<Unit>& cascade) {
  return cascade.classify(u);
}

using SentenceCascade = BasicCascade<Sentence>;

// Manifest JSON: {"stages": [{"kind": ..., "config": ...}, ...]} where kind
// is pattern-threshold, lexicon, or linear and config is a path to that
// stage's JSON (or TSV lexicon referenced inside it). Relative paths resolve
// against the manifest's directory. Stage names are "<index>:<kind>".
//
//   pattern-threshold config: {"stats": path, "pos": {theta_f, theta_p,
//       theta_n}, "neg": {...}}
//   lexicon config:           {"lexicon": path, "tau": number}
//   linear config:            {"model": path}
SentenceCascade load_cascade_manifest(
    const std::filesystem::path& manifest_path,
    const ExtractOptions& opts = default_extract_options());

// One classifier stage from its config file; shared by the single-classifier
// path and the manifest loader. index only affects the generated stage name.
CascadeStage<Sentence> load_stage_config(
    const std::string& kind, const std::filesystem::path& config_path,
    std::size_t index = 0,
    const ExtractOptions& opts = default_extract_options());

}  // namespace affectlog
