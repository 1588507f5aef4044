#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "affectlog/affect.hpp"
#include "affectlog/baselines.hpp"
#include "affectlog/bootstrap.hpp"
#include "affectlog/cascade.hpp"
#include "affectlog/corpus.hpp"
#include "affectlog/eval.hpp"
#include "affectlog/io.hpp"
#include "affectlog/parallel.hpp"
#include "affectlog/patterns.hpp"
#include "affectlog/stats.hpp"

namespace {

using namespace affectlog;

// Command-line misuse that CLI11 cannot catch (mutually dependent options);
// mapped to exit 2 like any other usage error.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<Document> read_corpus_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open " + path.string() + " for reading");
  try {
    return parse_conllu(in);
  } catch (const ParseError& e) {
    throw std::runtime_error(path.string() + ":" + std::to_string(e.line()) +
                             ": " + e.what());
  } catch (const TreeError& e) {
    throw std::runtime_error(path.string() + ": sentence " + e.sent_id() +
                             ": " + e.what());
  }
}

StatsTable read_stats_file(const std::filesystem::path& path, UnitKind kind) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open " + path.string() + " for reading");
  try {
    return load_stats_jsonl(in, kind);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

void require_labeled(const std::vector<Document>& docs) {
  for (const Document& d : docs)
    if (d.label != Polarity::Pos && d.label != Polarity::Neg)
      throw std::runtime_error("story '" + d.doc_id +
                               "' is unlabeled; a labeled corpus is required");
}

struct PredRow {
  std::string doc_id;
  std::string sent_id;
  Polarity label = Polarity::Neutral;
};

std::vector<PredRow> read_label_tsv(const std::filesystem::path& path,
                                    bool allow_neutral) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open " + path.string() + " for reading");
  std::vector<PredRow> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    const std::size_t t1 = line.find('\t');
    const std::size_t t2 =
        t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
    if (t1 == std::string::npos || t2 == std::string::npos ||
        line.find('\t', t2 + 1) != std::string::npos)
      throw std::runtime_error(where +
                               ": expected doc_id<TAB>sent_id<TAB>label");
    PredRow row;
    row.doc_id = line.substr(0, t1);
    row.sent_id = line.substr(t1 + 1, t2 - t1 - 1);
    const std::string label = line.substr(t2 + 1);
    if (row.doc_id.empty() || row.sent_id.empty())
      throw std::runtime_error(where + ": empty doc_id or sent_id");
    try {
      row.label = polarity_from_string(label);
    } catch (const std::invalid_argument&) {
      throw std::runtime_error(where + ": bad label '" + label + "'");
    }
    if (row.label == Polarity::Unlabeled ||
        (!allow_neutral && row.label == Polarity::Neutral))
      throw std::runtime_error(where + ": label '" + label +
                               "' not allowed here");
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string render_predictions(std::span<const PredRow> rows) {
  std::ostringstream os;
  for (const PredRow& r : rows)
    os << r.doc_id << '\t' << r.sent_id << '\t' << to_string(r.label) << '\n';
  return os.str();
}

std::vector<PredRow> classify_sentences(
    const std::vector<Document>& docs,
    const std::function<Polarity(const Sentence&)>& classify) {
  std::vector<const Sentence*> sentences;
  for (const Document& d : docs)
    for (const Sentence& s : d.sentences) sentences.push_back(&s);
  std::vector<Polarity> labels(sentences.size(), Polarity::Neutral);
  parallel_for(sentences.size(),
               [&](std::size_t i) { labels[i] = classify(*sentences[i]); });
  std::vector<PredRow> rows;
  rows.reserve(sentences.size());
  for (std::size_t i = 0; i < sentences.size(); ++i)
    rows.push_back(
        PredRow{sentences[i]->doc_id, sentences[i]->sent_id, labels[i]});
  return rows;
}

// Sentence units with inherited story labels, keys extracted in parallel.
std::vector<LabeledUnit> sentence_units(const std::vector<Document>& docs,
                                        bool first_person_only,
                                        const ExtractOptions& opts) {
  std::vector<std::pair<const Sentence*, Polarity>> pairs;
  for (const Document& d : docs) {
    auto doc_pairs = inherit_labels(d, first_person_only);
    pairs.insert(pairs.end(), doc_pairs.begin(), doc_pairs.end());
  }
  std::vector<LabeledUnit> units(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t i) {
    units[i] = LabeledUnit{pattern_keys(*pairs[i].first, opts),
                           pairs[i].second};
  });
  return units;
}

nlohmann::json report_to_json(const EvalReport& report) {
  std::ostringstream os;
  write_eval_report_json(report, os);
  return nlohmann::json::parse(os.str());
}

nlohmann::json threshold_to_json(const ThresholdParams& p) {
  return {{"theta_f", p.theta_f},
          {"theta_p", p.theta_p},
          {"theta_n", p.theta_n}};
}

void add_threshold_options(CLI::App* cmd, ThresholdParams& pos,
                           ThresholdParams& neg) {
  cmd->add_option("--pos-theta-f", pos.theta_f,
                  "minimum pattern frequency, positive class")
      ->capture_default_str();
  cmd->add_option("--pos-theta-p", pos.theta_p,
                  "minimum P(pos|pattern), positive class")
      ->capture_default_str();
  cmd->add_option("--pos-theta-n", pos.theta_n,
                  "minimum qualifying hits, positive class")
      ->capture_default_str();
  cmd->add_option("--neg-theta-f", neg.theta_f,
                  "minimum pattern frequency, negative class")
      ->capture_default_str();
  cmd->add_option("--neg-theta-p", neg.theta_p,
                  "minimum P(neg|pattern), negative class")
      ->capture_default_str();
  cmd->add_option("--neg-theta-n", neg.theta_n,
                  "minimum qualifying hits, negative class")
      ->capture_default_str();
}

int run_command(int argc, char** argv) {
  CLI::App app{
      "affectlog: weakly supervised affect pattern learning and "
      "classification"};
  app.require_subcommand(1);
  std::uint64_t seed = 1;
  app.add_option("--seed", seed, "RNG seed for the linear trainer")
      ->capture_default_str();

  // extract -------------------------------------------------------------
  struct {
    std::string corpus;
    std::string out;
    bool no_lex = false;
  } ex;
  CLI::App* extract =
      app.add_subcommand("extract", "Extract patterns to JSONL");
  extract->fallthrough();
  extract->add_option("--corpus", ex.corpus, "input corpus (CoNLL-U)")
      ->required();
  extract->add_option("--out", ex.out, "output pattern JSONL")->required();
  extract->add_flag("--no-object-lexicalization", ex.no_lex,
                    "drop the verb+object key variants");
  extract->callback([&] {
    ExtractOptions opts = default_extract_options();
    opts.lexicalize_objects = !ex.no_lex;
    const auto docs = read_corpus_file(ex.corpus);
    const auto occurrences = extract_corpus_patterns(docs, opts);
    std::ostringstream os;
    write_pattern_jsonl(occurrences, os);
    atomic_write_file(ex.out, os.str());
  });

  // learn ---------------------------------------------------------------
  struct {
    std::string corpus;
    std::string out;
    std::string unit = "story";
    bool first_person_only = false;
    bool no_lex = false;
  } ln;
  CLI::App* learn = app.add_subcommand(
      "learn", "Collect class-conditional pattern statistics");
  learn->fallthrough();
  learn->add_option("--corpus", ln.corpus, "labeled corpus (CoNLL-U)")
      ->required();
  learn->add_option("--out", ln.out, "output stats JSONL")->required();
  learn->add_option("--unit", ln.unit, "counting unit")
      ->check(CLI::IsMember({"story", "sentence"}))
      ->capture_default_str();
  learn->add_flag("--first-person-only", ln.first_person_only,
                  "sentence unit: keep only first-person sentences");
  learn->add_flag("--no-object-lexicalization", ln.no_lex,
                  "drop the verb+object key variants");
  learn->callback([&] {
    ExtractOptions opts = default_extract_options();
    opts.lexicalize_objects = !ln.no_lex;
    const auto docs = read_corpus_file(ln.corpus);
    const UnitKind kind = unit_kind_from_string(ln.unit);
    std::vector<LabeledUnit> units;
    if (kind == UnitKind::Story) {
      require_labeled(docs);
      units.resize(docs.size());
      parallel_for(docs.size(), [&](std::size_t i) {
        units[i] = LabeledUnit{story_keys(docs[i], opts), docs[i].label};
      });
    } else {
      units = sentence_units(docs, ln.first_person_only, opts);
    }
    const StatsTable table = collect_stats(units, kind);
    std::ostringstream os;
    save_stats_jsonl(table, os);
    atomic_write_file(ln.out, os.str());
  });

  // bootstrap -----------------------------------------------------------
  struct {
    std::string seed_corpus;
    std::string unlabeled;
    std::string out;
    std::string log;
    std::uint64_t max_rounds = 1;
    bool no_lex = false;
    ThresholdParams pos = kBootstrapPosDefaults;
    ThresholdParams neg = kBootstrapNegDefaults;
  } bs;
  CLI::App* bootstrap = app.add_subcommand(
      "bootstrap", "Label unlabeled stories from a labeled seed");
  bootstrap->fallthrough();
  bootstrap->add_option("--seed-corpus", bs.seed_corpus,
                        "labeled seed stories (CoNLL-U)")
      ->required();
  bootstrap->add_option("--unlabeled", bs.unlabeled,
                        "unlabeled stories (CoNLL-U)")
      ->required();
  bootstrap->add_option("--out", bs.out, "output labeled corpus (CoNLL-U)")
      ->required();
  bootstrap->add_option("--log", bs.log,
                        "optional TSV log of newly labeled doc ids");
  bootstrap->add_option("--max-rounds", bs.max_rounds, "expansion rounds")
      ->capture_default_str();
  bootstrap->add_flag("--no-object-lexicalization", bs.no_lex,
                      "drop the verb+object key variants");
  add_threshold_options(bootstrap, bs.pos, bs.neg);
  bootstrap->callback([&] {
    ExtractOptions opts = default_extract_options();
    opts.lexicalize_objects = !bs.no_lex;
    const auto seed_docs = read_corpus_file(bs.seed_corpus);
    const auto unlabeled_docs = read_corpus_file(bs.unlabeled);
    const BootstrapResult result = run_bootstrap(
        seed_docs, unlabeled_docs, bs.pos, bs.neg, bs.max_rounds, opts);
    std::ostringstream os;
    serialize_conllu(result.labeled, os);
    atomic_write_file(bs.out, os.str());
    if (!bs.log.empty()) {
      std::ostringstream log;
      for (std::size_t i = seed_docs.size(); i < result.labeled.size(); ++i)
        log << result.labeled[i].doc_id << '\t'
            << to_string(result.labeled[i].label) << '\n';
      atomic_write_file(bs.log, log.str());
    }
  });

  // classify ------------------------------------------------------------
  struct {
    std::string corpus;
    std::string kind;
    std::string config;
    std::string out;
    bool no_lex = false;
  } cf;
  CLI::App* classify = app.add_subcommand(
      "classify", "Classify sentences with a single configured classifier");
  classify->fallthrough();
  classify->add_option("--corpus", cf.corpus, "input corpus (CoNLL-U)")
      ->required();
  classify->add_option("--kind", cf.kind, "classifier kind")
      ->check(CLI::IsMember({"pattern-threshold", "lexicon", "linear"}))
      ->required();
  classify->add_option("--config", cf.config, "classifier config JSON")
      ->required();
  classify->add_option("--out", cf.out, "output predictions TSV")->required();
  classify->add_flag("--no-object-lexicalization", cf.no_lex,
                     "drop the verb+object key variants");
  classify->callback([&] {
    ExtractOptions opts = default_extract_options();
    opts.lexicalize_objects = !cf.no_lex;
    const auto docs = read_corpus_file(cf.corpus);
    const CascadeStage<Sentence> stage =
        load_stage_config(cf.kind, cf.config, 0, opts);
    const auto rows = classify_sentences(docs, stage.classify);
    atomic_write_file(cf.out, render_predictions(rows));
  });

  // cascade -------------------------------------------------------------
  struct {
    std::string corpus;
    std::string manifest;
    std::string out;
    bool no_lex = false;
  } cs;
  CLI::App* cascade = app.add_subcommand(
      "cascade", "Classify sentences with a neutral-fallthrough cascade");
  cascade->fallthrough();
  cascade->add_option("--corpus", cs.corpus, "input corpus (CoNLL-U)")
      ->required();
  cascade->add_option("--manifest", cs.manifest, "cascade manifest JSON")
      ->required();
  cascade->add_option("--out", cs.out, "output predictions TSV")->required();
  cascade->add_flag("--no-object-lexicalization", cs.no_lex,
                    "drop the verb+object key variants");
  cascade->callback([&] {
    ExtractOptions opts = default_extract_options();
    opts.lexicalize_objects = !cs.no_lex;
    const auto docs = read_corpus_file(cs.corpus);
    const SentenceCascade chain = load_cascade_manifest(cs.manifest, opts);
    const auto rows = classify_sentences(
        docs, [&chain](const Sentence& s) { return chain.classify(s); });
    atomic_write_file(cs.out, render_predictions(rows));
  });

  // tune ----------------------------------------------------------------
  struct {
    std::string dev;
    std::string stats;
    std::string grid;
    std::string out;
    std::string stats_unit = "story";
    bool first_person_only = false;
    bool no_lex = false;
  } tn;
  CLI::App* tune = app.add_subcommand(
      "tune", "Grid-search threshold parameters on a dev corpus");
  tune->fallthrough();
  tune->add_option("--dev", tn.dev, "labeled dev corpus (CoNLL-U)")
      ->required();
  tune->add_option("--stats", tn.stats, "pattern stats JSONL")->required();
  tune->add_option("--grid", tn.grid, "tune grid JSON")->required();
  tune->add_option("--out", tn.out, "output best-params JSON")->required();
  tune->add_option("--stats-unit", tn.stats_unit,
                   "unit the stats were collected at")
      ->check(CLI::IsMember({"story", "sentence"}))
      ->capture_default_str();
  tune->add_flag("--first-person-only", tn.first_person_only,
                 "keep only first-person sentences");
  tune->add_flag("--no-object-lexicalization", tn.no_lex,
                 "drop the verb+object key variants");
  tune->callback([&] {
    ExtractOptions opts = default_extract_options();
    opts.lexicalize_objects = !tn.no_lex;
    const auto docs = read_corpus_file(tn.dev);
    const StatsTable table =
        read_stats_file(tn.stats, unit_kind_from_string(tn.stats_unit));
    const TuneGrid grid = load_tune_grid(tn.grid);
    const auto units = sentence_units(docs, tn.first_person_only, opts);
    const TuneResult result = tune_thresholds(units, table, grid);
    nlohmann::json j;
    j["pos"] = threshold_to_json(result.pos);
    j["neg"] = threshold_to_json(result.neg);
    j["report"] = report_to_json(result.report);
    atomic_write_file(tn.out, j.dump(2) + "\n");
  });

  // eval ----------------------------------------------------------------
  struct {
    std::string pred;
    std::string gold;
    std::string gold_corpus;
    std::string out;
    std::string name = "classifier";
    bool first_person_only = false;
  } ev;
  CLI::App* eval = app.add_subcommand(
      "eval", "Score predictions against gold labels");
  eval->fallthrough();
  eval->add_option("--pred", ev.pred, "predictions TSV")->required();
  eval->add_option("--gold", ev.gold, "gold labels TSV");
  eval->add_option("--gold-corpus", ev.gold_corpus,
                   "labeled corpus to derive gold labels from");
  eval->add_option("--out", ev.out, "optional JSON report path");
  eval->add_option("--name", ev.name, "classifier name for the table")
      ->capture_default_str();
  eval->add_flag("--first-person-only", ev.first_person_only,
                 "gold corpus: keep only first-person sentences");
  eval->callback([&] {
    if (ev.gold.empty() == ev.gold_corpus.empty())
      throw UsageError("eval: provide exactly one of --gold or --gold-corpus");
    const auto pred_rows = read_label_tsv(ev.pred, true);

    std::vector<PredRow> gold_rows;
    if (!ev.gold.empty()) {
      gold_rows = read_label_tsv(ev.gold, false);
    } else {
      const auto docs = read_corpus_file(ev.gold_corpus);
      for (const Document& d : docs)
        for (const auto& [sentence, label] :
             inherit_labels(d, ev.first_person_only))
          gold_rows.push_back(
              PredRow{sentence->doc_id, sentence->sent_id, label});
    }

    std::map<std::pair<std::string, std::string>, Polarity> pred_map;
    for (const PredRow& r : pred_rows)
      if (!pred_map.emplace(std::make_pair(r.doc_id, r.sent_id), r.label)
               .second)
        throw std::runtime_error("duplicate prediction for " + r.doc_id +
                                 "/" + r.sent_id);
    if (pred_rows.size() != gold_rows.size())
      throw std::runtime_error(
          "prediction/gold row count mismatch (" +
          std::to_string(pred_rows.size()) + " vs " +
          std::to_string(gold_rows.size()) + ")");

    std::vector<Polarity> pred_labels;
    std::vector<Polarity> gold_labels;
    std::set<std::pair<std::string, std::string>> seen;
    for (const PredRow& g : gold_rows) {
      const auto key = std::make_pair(g.doc_id, g.sent_id);
      if (!seen.insert(key).second)
        throw std::runtime_error("duplicate gold label for " + g.doc_id +
                                 "/" + g.sent_id);
      const auto it = pred_map.find(key);
      if (it == pred_map.end())
        throw std::runtime_error("no prediction for " + g.doc_id + "/" +
                                 g.sent_id);
      pred_labels.push_back(it->second);
      gold_labels.push_back(g.label);
    }

    const EvalReport report = evaluate(pred_labels, gold_labels);
    const NamedReport row{ev.name, report};
    write_results_table({&row, 1}, std::cout);
    if (!ev.out.empty()) {
      std::ostringstream os;
      write_eval_report_json(report, os);
      atomic_write_file(ev.out, os.str());
    }
  });

  // induce-affect -------------------------------------------------------
  struct {
    std::string stats;
    std::string out;
    double min_p = 0.7;
    std::uint64_t min_freq = 1;
    std::vector<std::string> have_verbs;
    std::vector<std::string> lack_verbs;
  } ia;
  CLI::App* induce = app.add_subcommand(
      "induce-affect", "Derive object polarities from possession patterns");
  induce->fallthrough();
  induce->add_option("--stats", ia.stats, "pattern stats JSONL")->required();
  induce->add_option("--out", ia.out, "output TSV report")->required();
  induce->add_option("--min-p", ia.min_p,
                     "minimum class probability for induction")
      ->capture_default_str();
  induce->add_option("--min-freq", ia.min_freq, "minimum pattern frequency")
      ->capture_default_str();
  induce->add_option("--have-verb", ia.have_verbs,
                     "override the possession-gaining verb set");
  induce->add_option("--lack-verb", ia.lack_verbs,
                     "override the possession-losing verb set");
  induce->callback([&] {
    const StatsTable table = read_stats_file(ia.stats, UnitKind::Story);
    AffectReportOptions opts;
    opts.min_probability = ia.min_p;
    opts.min_freq = ia.min_freq;
    if (!ia.have_verbs.empty())
      opts.have_verbs = {ia.have_verbs.begin(), ia.have_verbs.end()};
    if (!ia.lack_verbs.empty())
      opts.lack_verbs = {ia.lack_verbs.begin(), ia.lack_verbs.end()};
    const auto rows = induce_object_affect(table, opts);
    std::ostringstream os;
    write_affect_report_tsv(rows, os);
    atomic_write_file(ia.out, os.str());
  });

  // train-linear ----------------------------------------------------------
  struct {
    std::string corpus;
    std::string out;
    std::uint64_t epochs = 50;
    double learning_rate = 0.1;
    double reg = 0.0;
    bool first_person_only = false;
  } tl;
  CLI::App* train = app.add_subcommand(
      "train-linear", "Train the linear unigram baseline");
  train->fallthrough();
  train->add_option("--corpus", tl.corpus, "labeled corpus (CoNLL-U)")
      ->required();
  train->add_option("--out", tl.out, "output model JSON")->required();
  train->add_option("--epochs", tl.epochs, "training epochs")
      ->capture_default_str();
  train->add_option("--learning-rate", tl.learning_rate, "SGD step size")
      ->capture_default_str();
  train->add_option("--reg", tl.reg, "L2 regularization strength")
      ->capture_default_str();
  train->add_flag("--first-person-only", tl.first_person_only,
                  "keep only first-person sentences");
  train->callback([&] {
    const auto docs = read_corpus_file(tl.corpus);
    std::vector<std::pair<const Sentence*, Polarity>> data;
    for (const Document& d : docs) {
      auto pairs = inherit_labels(d, tl.first_person_only);
      data.insert(data.end(), pairs.begin(), pairs.end());
    }
    LinearTrainConfig config;
    config.epochs = tl.epochs;
    config.learning_rate = tl.learning_rate;
    config.reg = tl.reg;
    config.seed = seed;
    const LinearModel model = train_linear(data, config);
    std::ostringstream os;
    save_linear_json(model, os);
    atomic_write_file(tl.out, os.str());
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) { return run_command(argc, argv); }
