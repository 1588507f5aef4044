#include "affectlog/cascade.hpp"

#include <fstream>
#include <memory>

#include "affectlog/baselines.hpp"
#include "affectlog/stats.hpp"
#include "json_util.hpp"

namespace affectlog {

namespace {

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open " + path.string() + " for reading");
  return in;
}

}  // namespace

CascadeStage<Sentence> load_stage_config(const std::string& kind,
                                         const std::filesystem::path& config_path,
                                         std::size_t index,
                                         const ExtractOptions& opts) {
  const nlohmann::json config = detail::parse_json_file(config_path);
  const std::filesystem::path dir = config_path.parent_path();
  const std::string name = std::to_string(index + 1) + ":" + kind;
  const std::string context = "cascade stage " + name;

  if (kind == "pattern-threshold") {
    if (!config.contains("stats") || !config.contains("pos") ||
        !config.contains("neg"))
      throw std::runtime_error(context + ": expected {stats, pos, neg}");
    const std::filesystem::path stats_path =
        detail::resolve_path(dir, config["stats"].get<std::string>());
    std::ifstream in = open_or_throw(stats_path);
    auto table = std::make_shared<StatsTable>(
        load_stats_jsonl(in, UnitKind::Sentence));
    const ThresholdParams pos =
        detail::threshold_from_json(config["pos"], context + " pos");
    const ThresholdParams neg =
        detail::threshold_from_json(config["neg"], context + " neg");
    return {name, [table, pos, neg, opts](const Sentence& s) {
              return classify_threshold(pattern_keys(s, opts), *table, pos,
                                        neg);
            }};
  }
  if (kind == "lexicon") {
    if (!config.contains("lexicon"))
      throw std::runtime_error(context + ": expected {lexicon, tau}");
    const std::filesystem::path lex_path =
        detail::resolve_path(dir, config["lexicon"].get<std::string>());
    std::ifstream in = open_or_throw(lex_path);
    auto lex = std::make_shared<Lexicon>(load_lexicon_tsv(in));
    const double tau = config.value("tau", 0.0);
    if (!(tau >= 0.0))
      throw std::runtime_error(context + ": tau must be >= 0");
    return {name, [lex, tau, aliases = opts.deprel_aliases](
                      const Sentence& s) {
              return lexicon_classify(s, *lex, tau, aliases);
            }};
  }
  if (kind == "linear") {
    if (!config.contains("model"))
      throw std::runtime_error(context + ": expected {model}");
    const std::filesystem::path model_path =
        detail::resolve_path(dir, config["model"].get<std::string>());
    std::ifstream in = open_or_throw(model_path);
    auto model = std::make_shared<LinearModel>(load_linear_json(in));
    return {name, [model](const Sentence& s) {
              return predict_linear(*model, s);
            }};
  }
  throw std::runtime_error(context + ": unknown stage kind");
}

SentenceCascade load_cascade_manifest(
    const std::filesystem::path& manifest_path, const ExtractOptions& opts) {
  const nlohmann::json manifest = detail::parse_json_file(manifest_path);
  if (!manifest.is_object() || !manifest.contains("stages") ||
      !manifest["stages"].is_array())
    throw std::runtime_error("cascade manifest must be {stages: [...]}");
  const std::filesystem::path dir = manifest_path.parent_path();

  std::vector<CascadeStage<Sentence>> stages;
  std::size_t index = 0;
  for (const nlohmann::json& stage : manifest["stages"]) {
    if (!stage.is_object() || !stage.contains("kind") ||
        !stage.contains("config"))
      throw std::runtime_error("cascade manifest stage " +
                               std::to_string(index + 1) +
                               " must be {kind, config}");
    stages.push_back(load_stage_config(
        stage["kind"].get<std::string>(),
        detail::resolve_path(dir, stage["config"].get<std::string>()), index,
        opts));
    ++index;
  }
  return SentenceCascade(std::move(stages));
}

}  // namespace affectlog
